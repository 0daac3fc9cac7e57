#include "toy_model.hpp"

#include <random>
#include <unordered_set>

namespace seqrec::fixtures {

EmbeddingModel random_model(const std::vector<std::vector<VenueId>>& tokens,
                            std::size_t dim, bool use_subwords,
                            std::uint64_t seed, std::size_t min_n,
                            std::size_t max_n, bool non_seq) {
  std::vector<Vocabulary::SessionEntry> sessions;
  std::vector<TokenKey> ngrams;
  std::unordered_set<TokenKey> seen;
  for (const auto& t : tokens) {
    sessions.push_back({TokenKey(t), 1});
    if (!use_subwords) continue;
    for (auto& g : extract_ngrams(t, min_n, max_n)) {
      TokenKey key(g);
      if (seen.insert(key).second) ngrams.push_back(key);
    }
  }
  EmbeddingModel m;
  m.config.size = dim;
  m.config.use_subwords = use_subwords;
  m.config.min_n = min_n;
  m.config.max_n = max_n;
  m.corpus.non_seq = non_seq;
  m.vocabulary = Vocabulary(std::move(sessions), std::move(ngrams), 1, min_n,
                            max_n, use_subwords);
  m.input = Matrix(m.vocabulary.input_row_count(), dim);
  m.output = Matrix(m.vocabulary.session_count(), dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (auto& v : m.input.data()) v = u(rng);
  return m;
}

}  // namespace seqrec::fixtures
