#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "seqrec/embedding.hpp"

namespace seqrec {

// a.b / (|a| |b|), accumulated in double. Zero on either side gives 0.
double cosine_similarity(std::span<const float> a, std::span<const float> b);

struct Neighbor {
  std::uint32_t index = 0;  // session index in the vocabulary
  TokenKey token;
  double score = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

namespace kernels {

// scores[i] = cosine(rows.row(i), query) given precomputed row norms.
void cosine_scan_serial(const Matrix& rows, std::span<const double> row_norms,
                        std::span<const float> query, std::span<double> scores);
// Same contract, rows split across OpenMP threads.
void cosine_scan_parallel(const Matrix& rows, std::span<const double> row_norms,
                          std::span<const float> query,
                          std::span<double> scores);

// Indices of the n best scores, descending, ties by ascending index.
std::vector<std::uint32_t> top_n(std::span<const double> scores, std::size_t n,
                                 const std::unordered_set<std::uint32_t>& exclude);

}  // namespace kernels

// Composed vectors of every session token, ready for exhaustive search.
class NeighborIndex {
 public:
  explicit NeighborIndex(const EmbeddingModel& model, bool parallel = true);

  const EmbeddingModel& model() const noexcept { return *model_; }
  std::size_t size() const noexcept { return rows_.rows(); }
  std::span<const float> vector(std::uint32_t i) const { return rows_.row(i); }

  // Top-n session tokens by cosine to the query, skipping `exclude`.
  std::vector<Neighbor> most_similar(
      std::span<const float> query, std::size_t n,
      const std::unordered_set<std::uint32_t>& exclude = {}) const;
  std::vector<Neighbor> most_similar(std::span<const float> query,
                                     std::size_t n,
                                     const std::unordered_set<TokenKey>& exclude) const;

 private:
  const EmbeddingModel* model_;
  Matrix rows_;
  std::vector<double> norms_;
  bool parallel_;
};

}  // namespace seqrec
