#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "seqrec/matrix.hpp"
#include "seqrec/vocabulary.hpp"

namespace seqrec {

enum class TrainMode : std::uint8_t { skipgram = 0, cbow = 1 };

std::string to_string(TrainMode mode);
TrainMode parse_train_mode(const std::string& text);

// Defaults follow the usual fastText/gensim settings except min_count and
// min_n, which are 1.
struct TrainConfig {
  TrainMode mode = TrainMode::skipgram;
  bool use_subwords = true;
  std::size_t size = 100;
  std::size_t min_n = 1;
  std::size_t max_n = 5;
  std::size_t window = 5;
  std::size_t epochs = 5;
  std::size_t negatives = 5;
  double initial_lr = 0.025;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t min_count = 1;

  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// How the training corpus was built; recommendation must match it.
struct CorpusInfo {
  bool non_seq = false;
  std::chrono::seconds delta_t{5 * 3600};

  friend bool operator==(const CorpusInfo&, const CorpusInfo&) = default;
};

struct EmbeddingModel {
  TrainConfig config;
  CorpusInfo corpus;
  Vocabulary vocabulary;
  Matrix input;   // session rows, then n-gram rows
  Matrix output;  // session rows only

  std::size_t dim() const noexcept { return input.cols(); }

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;
};

// Mean of the token's own input row and its n-gram rows.
std::vector<float> composed_input_vector(const EmbeddingModel& model,
                                         std::uint32_t session_index);
std::vector<float> composed_input_vector(const EmbeddingModel& model,
                                         const TokenKey& token);

// Seen sequences use the composed vector. Unseen sequences fall back to the
// mean of whichever of their n-grams are known (subword models only).
std::vector<float> token_vector(const EmbeddingModel& model,
                                std::span<const VenueId> venues);

struct EpochStats {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  double learning_rate = 0.0;
  std::size_t pairs = 0;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Negative-sampling SGD over the corpus. workers == 1 runs the serial
// reference loop and is bit-reproducible for a fixed seed; workers > 1 runs
// unsynchronized OpenMP updates and is not.
EmbeddingModel train(const Corpus& corpus, const TrainConfig& cfg,
                     const EpochCallback& on_epoch = {});

}  // namespace seqrec
