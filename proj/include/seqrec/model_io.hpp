#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "seqrec/embedding.hpp"

namespace seqrec {

// Binary layout, all integers and floats little-endian:
//
//   "SEQV1"
//   config:  u8 mode, u8 use_subwords, u32 size, u32 min_n, u32 max_n,
//            u32 window, u32 epochs, u32 negatives, f64 initial_lr,
//            u64 seed, u32 workers, u32 min_count
//   corpus:  u8 non_seq, i64 delta_t_seconds
//   vocab:   u64 n_sessions, { u32 len, bytes, u32 index, u64 frequency }*
//            u64 n_ngrams,   { u32 len, bytes, u32 index }*
//   input:   u64 rows, u32 cols, f32[rows * cols]
//   output:  u64 rows, u32 cols, f32[rows * cols]
inline constexpr char kModelMagic[] = "SEQV1";

void save_model(const EmbeddingModel& model, std::ostream& out);
void save_model(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_model(std::istream& in);
EmbeddingModel load_model(const std::string& path);

// `rows dim` header, then `token v1 ... vd` per session token, using the
// composed vectors.
void export_text(const EmbeddingModel& model, std::ostream& out);

}  // namespace seqrec
