#include <atomic>
#include <cmath>
#include <random>

#include <omp.h>

#include "seqrec/embedding.hpp"
#include "seqrec/errors.hpp"
#include "seqrec/negative_sampling.hpp"

namespace seqrec {

namespace {

// Portable uniform draw in [0, 1); std:: distributions differ across
// standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Draws session indices with probability proportional to frequency^0.75.
class NegativeSampler {
 public:
  explicit NegativeSampler(const Vocabulary& vocab) {
    cumulative_.reserve(vocab.session_count());
    double total = 0.0;
    for (const auto& e : vocab.sessions()) {
      total += std::pow(static_cast<double>(e.frequency), 0.75);
      cumulative_.push_back(total);
    }
  }

  std::uint32_t draw(std::mt19937_64& rng, std::uint32_t avoid) const {
    std::uint32_t pick = 0;
    // A one-token vocabulary can only ever return the target.
    for (int attempt = 0; attempt < 16; ++attempt) {
      const double u = uniform01(rng) * cumulative_.back();
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      if (it == cumulative_.end()) --it;
      pick = static_cast<std::uint32_t>(it - cumulative_.begin());
      if (pick != avoid) break;
    }
    return pick;
  }

 private:
  std::vector<double> cumulative_;
};

struct SharedState {
  EmbeddingModel& model;
  const TrainConfig& cfg;
  const std::vector<std::vector<std::uint32_t>>& sentences;
  const NegativeSampler& sampler;
  std::uint64_t total_steps = 0;
  std::atomic<std::uint64_t> processed{0};

  double learning_rate() const {
    const double progress =
        static_cast<double>(processed.load(std::memory_order_relaxed)) /
        static_cast<double>(total_steps);
    return cfg.initial_lr * std::max(1e-4, 1.0 - progress);
  }
};

class Worker {
 public:
  Worker(SharedState& shared, std::uint64_t seed)
      : s_(shared),
        rng_(seed),
        hidden_(shared.cfg.size),
        grad_hidden_(shared.cfg.size),
        grad_rows_((1 + shared.cfg.negatives) * shared.cfg.size),
        negatives_(shared.cfg.negatives) {}

  void run_sentence(const std::vector<std::uint32_t>& sentence) {
    const auto window = s_.cfg.window;
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      const double lr = s_.learning_rate();
      const auto reach = static_cast<std::size_t>(1 + rng_() % window);
      const std::size_t lo = i >= reach ? i - reach : 0;
      const std::size_t hi = std::min(sentence.size() - 1, i + reach);

      if (s_.cfg.mode == TrainMode::skipgram) {
        for (std::size_t j = lo; j <= hi; ++j)
          if (j != i) skipgram_pair(sentence[i], sentence[j], lr);
      } else {
        contexts_.clear();
        for (std::size_t j = lo; j <= hi; ++j)
          if (j != i) contexts_.push_back(sentence[j]);
        if (!contexts_.empty()) cbow(sentence[i], lr);
      }
      s_.processed.fetch_add(1, std::memory_order_relaxed);
    }
  }

  double loss_sum = 0.0;
  std::size_t pairs = 0;

 private:
  void sample_negatives(std::uint32_t target) {
    for (auto& n : negatives_) n = s_.sampler.draw(rng_, target);
  }

  float step(std::uint32_t target, double lr) {
    sample_negatives(target);
    auto& output = s_.model.output;
    const float loss = negative_sampling_step<float>(
        hidden_, target, negatives_, output, grad_hidden_, grad_rows_);
    const auto dim = hidden_.size();
    const auto flr = static_cast<float>(lr);
    for (std::size_t slot = 0; slot <= negatives_.size(); ++slot) {
      const auto row = slot == 0 ? target : negatives_[slot - 1];
      auto dst = output.row(row);
      const float* g = grad_rows_.data() + slot * dim;
      for (std::size_t d = 0; d < dim; ++d) dst[d] -= flr * g[d];
    }
    loss_sum += loss;
    ++pairs;
    return flr;
  }

  void skipgram_pair(std::uint32_t center, std::uint32_t context, double lr) {
    auto& input = s_.model.input;
    const auto rows = s_.model.vocabulary.input_rows(center);
    const auto dim = hidden_.size();
    std::fill(hidden_.begin(), hidden_.end(), 0.0f);
    for (auto r : rows) {
      auto src = input.row(r);
      for (std::size_t d = 0; d < dim; ++d) hidden_[d] += src[d];
    }
    const float inv = 1.0f / static_cast<float>(rows.size());
    for (auto& h : hidden_) h *= inv;

    const float flr = step(context, lr);
    // The mean's gradient is shared equally by its constituent rows.
    const float scale = flr * inv;
    for (auto r : rows) {
      auto dst = input.row(r);
      for (std::size_t d = 0; d < dim; ++d) dst[d] -= scale * grad_hidden_[d];
    }
  }

  void cbow(std::uint32_t center, double lr) {
    auto& input = s_.model.input;
    const auto& vocab = s_.model.vocabulary;
    const auto dim = hidden_.size();
    const float inv_ctx = 1.0f / static_cast<float>(contexts_.size());
    std::fill(hidden_.begin(), hidden_.end(), 0.0f);
    for (auto c : contexts_) {
      const auto rows = vocab.input_rows(c);
      const float w = inv_ctx / static_cast<float>(rows.size());
      for (auto r : rows) {
        auto src = input.row(r);
        for (std::size_t d = 0; d < dim; ++d) hidden_[d] += w * src[d];
      }
    }

    const float flr = step(center, lr);
    for (auto c : contexts_) {
      const auto rows = vocab.input_rows(c);
      const float scale = flr * inv_ctx / static_cast<float>(rows.size());
      for (auto r : rows) {
        auto dst = input.row(r);
        for (std::size_t d = 0; d < dim; ++d) dst[d] -= scale * grad_hidden_[d];
      }
    }
  }

  SharedState& s_;
  std::mt19937_64 rng_;
  std::vector<float> hidden_;
  std::vector<float> grad_hidden_;
  std::vector<float> grad_rows_;
  std::vector<std::uint32_t> negatives_;
  std::vector<std::uint32_t> contexts_;
};

}  // namespace

EmbeddingModel train(const Corpus& corpus, const TrainConfig& cfg,
                     const EpochCallback& on_epoch) {
  cfg.validate();
  if (corpus.token_count() == 0) throw Error("cannot train on an empty corpus");

  EmbeddingModel model;
  model.config = cfg;
  model.corpus = {corpus.non_seq, corpus.delta_t};
  model.vocabulary = build_vocabulary(corpus, cfg.min_count, cfg.min_n,
                                      cfg.max_n, cfg.use_subwords);
  const auto& vocab = model.vocabulary;
  if (vocab.session_count() == 0)
    throw Error("no token reaches min_count = " + std::to_string(cfg.min_count));

  std::vector<std::vector<std::uint32_t>> sentences;
  std::uint64_t tokens = 0;
  bool has_pairs = false;
  for (const auto& raw : corpus.sentences) {
    std::vector<std::uint32_t> ids;
    for (const auto& tok : raw)
      if (auto id = vocab.find_session(tok)) ids.push_back(*id);
    if (ids.empty()) continue;
    has_pairs = has_pairs || ids.size() > 1;
    tokens += ids.size();
    sentences.push_back(std::move(ids));
  }
  if (!has_pairs)
    throw Error("no context pairs: every sentence has a single token");

  model.input = Matrix(vocab.input_row_count(), cfg.size);
  model.output = Matrix(vocab.session_count(), cfg.size);
  {
    std::mt19937_64 init_rng(cfg.seed);
    const double bound = 1.0 / static_cast<double>(cfg.size);
    for (auto& v : model.input.data())
      v = static_cast<float>((2.0 * uniform01(init_rng) - 1.0) * bound);
  }

  const NegativeSampler sampler(vocab);
  SharedState shared{model, cfg, sentences, sampler};
  shared.total_steps = tokens * cfg.epochs;

  std::vector<Worker> workers;
  workers.reserve(cfg.workers);
  for (std::size_t w = 0; w < cfg.workers; ++w)
    workers.emplace_back(shared, cfg.seed + 0x9E3779B97F4A7C15ull * (w + 1));

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (auto& w : workers) {
      w.loss_sum = 0.0;
      w.pairs = 0;
    }
    if (cfg.workers == 1) {
      for (const auto& s : sentences) workers[0].run_sentence(s);
    } else {
      const auto n_workers = static_cast<int>(cfg.workers);
      const auto n_sentences = static_cast<std::ptrdiff_t>(sentences.size());
#pragma omp parallel num_threads(n_workers)
      {
        const int tid = omp_get_thread_num();
        const int nthreads = omp_get_num_threads();
        for (std::ptrdiff_t i = tid; i < n_sentences; i += nthreads)
          workers[static_cast<std::size_t>(tid)].run_sentence(
              sentences[static_cast<std::size_t>(i)]);
      }
    }

    EpochStats stats;
    stats.epoch = epoch + 1;
    double loss = 0.0;
    for (const auto& w : workers) {
      loss += w.loss_sum;
      stats.pairs += w.pairs;
    }
    stats.mean_loss = stats.pairs ? loss / static_cast<double>(stats.pairs) : 0.0;
    stats.learning_rate = shared.learning_rate();
    if (on_epoch) on_epoch(stats);
  }

  for (const auto* m : {&model.input, &model.output})
    for (float v : m->data())
      if (!std::isfinite(v)) throw Error("training diverged: non-finite weight");
  return model;
}

}  // namespace seqrec
