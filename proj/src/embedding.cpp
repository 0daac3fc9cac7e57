#include "seqrec/embedding.hpp"

#include "seqrec/errors.hpp"

namespace seqrec {

std::string to_string(TrainMode mode) {
  return mode == TrainMode::skipgram ? "skipgram" : "cbow";
}

TrainMode parse_train_mode(const std::string& text) {
  if (text == "skipgram" || text == "sg" || text == "skip-gram")
    return TrainMode::skipgram;
  if (text == "cbow") return TrainMode::cbow;
  throw ArgumentError("unknown training mode '" + text + "'");
}

void TrainConfig::validate() const {
  if (size < 1) throw ArgumentError("size must be at least 1");
  if (window < 1) throw ArgumentError("window must be at least 1");
  if (epochs < 1) throw ArgumentError("epochs must be at least 1");
  if (negatives < 1) throw ArgumentError("negatives must be at least 1");
  if (!(initial_lr > 0.0)) throw ArgumentError("initial_lr must be positive");
  if (workers < 1) throw ArgumentError("workers must be at least 1");
  if (min_n < 1) throw ArgumentError("min_n must be at least 1");
  if (min_n > max_n) throw ArgumentError("min_n must not exceed max_n");
}

namespace {

std::vector<float> mean_of_rows(const Matrix& m,
                                std::span<const std::uint32_t> rows) {
  std::vector<float> out(m.cols(), 0.0f);
  if (rows.empty()) return out;
  for (auto r : rows) {
    auto src = m.row(r);
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += src[d];
  }
  const float scale = 1.0f / static_cast<float>(rows.size());
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace

std::vector<float> composed_input_vector(const EmbeddingModel& model,
                                         std::uint32_t session_index) {
  if (session_index >= model.vocabulary.session_count())
    throw LookupError("session index out of range");
  return mean_of_rows(model.input, model.vocabulary.input_rows(session_index));
}

std::vector<float> composed_input_vector(const EmbeddingModel& model,
                                         const TokenKey& token) {
  auto id = model.vocabulary.find_session(token);
  if (!id) throw LookupError("unknown token " + token.str());
  return composed_input_vector(model, *id);
}

std::vector<float> token_vector(const EmbeddingModel& model,
                                std::span<const VenueId> venues) {
  const TokenKey key(venues);
  if (auto id = model.vocabulary.find_session(key))
    return composed_input_vector(model, *id);
  if (!model.vocabulary.use_subwords())
    throw LookupError("unseen token " + key.str() +
                      " and the model has no subwords");

  std::vector<std::uint32_t> rows;
  for (const auto& gram : extract_ngrams(venues, model.vocabulary.min_n(),
                                         model.vocabulary.max_n())) {
    if (auto g = model.vocabulary.find_ngram(TokenKey(gram)))
      rows.push_back(model.vocabulary.ngram_input_row(*g));
  }
  if (rows.empty())
    throw UnrepresentableError("no known n-gram in " + key.str());
  return mean_of_rows(model.input, rows);
}

}  // namespace seqrec
