#include "seqrec/vocabulary.hpp"

#include <algorithm>
#include <numeric>

#include "seqrec/errors.hpp"

namespace seqrec {

TokenKey::TokenKey(std::span<const VenueId> venues) {
  for (std::size_t i = 0; i < venues.size(); ++i) {
    if (i) value_ += kSeparator;
    value_ += venues[i];
  }
}

TokenKey TokenKey::from_string(std::string canonical) {
  TokenKey key;
  key.value_ = std::move(canonical);
  return key;
}

std::vector<VenueId> TokenKey::venues() const {
  std::vector<VenueId> out;
  if (value_.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    auto pos = value_.find(kSeparator, start);
    out.push_back(value_.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t TokenKey::length() const {
  if (value_.empty()) return 0;
  return 1 + static_cast<std::size_t>(
                 std::count(value_.begin(), value_.end(), kSeparator));
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

Corpus build_corpus(const Dataset& train, const SegmentationConfig& seg,
                    bool non_seq) {
  Corpus corpus;
  corpus.non_seq = non_seq;
  corpus.delta_t = seg.delta_t;
  for (const auto& [user, history] : train.histories) {
    std::vector<TokenKey> sentence;
    if (non_seq) {
      for (const auto& rec : history)
        sentence.emplace_back(std::span<const VenueId>(&rec.venue_id, 1));
    } else {
      for (const auto& session : segment_user_history(history, seg.delta_t))
        sentence.emplace_back(session.venue_ids);
    }
    if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

Vocabulary::Vocabulary(std::vector<SessionEntry> sessions,
                       std::vector<TokenKey> ngrams, std::size_t min_count,
                       std::size_t min_n, std::size_t max_n, bool use_subwords)
    : sessions_(std::move(sessions)),
      ngrams_(std::move(ngrams)),
      min_count_(min_count),
      min_n_(min_n),
      max_n_(max_n),
      use_subwords_(use_subwords) {
  index();
}

void Vocabulary::index() {
  session_index_.clear();
  ngram_index_.clear();
  for (std::uint32_t i = 0; i < sessions_.size(); ++i) {
    if (!session_index_.emplace(sessions_[i].key.str(), i).second)
      throw Error("duplicate session token " + sessions_[i].key.str());
  }
  for (std::uint32_t i = 0; i < ngrams_.size(); ++i) {
    if (!ngram_index_.emplace(ngrams_[i].str(), i).second)
      throw Error("duplicate n-gram token " + ngrams_[i].str());
  }

  input_rows_.assign(sessions_.size(), {});
  for (std::uint32_t i = 0; i < sessions_.size(); ++i) {
    auto& rows = input_rows_[i];
    rows.push_back(i);
    if (!use_subwords_) continue;
    const auto venues = sessions_[i].key.venues();
    for (const auto& gram : extract_ngrams(venues, min_n_, max_n_)) {
      auto id = find_ngram(TokenKey(gram));
      if (!id) throw Error("n-gram table is missing " + TokenKey(gram).str());
      rows.push_back(ngram_input_row(*id));
    }
  }
}

std::optional<std::uint32_t> Vocabulary::find_session(
    const TokenKey& key) const {
  auto it = session_index_.find(key.str());
  if (it == session_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Vocabulary::find_ngram(const TokenKey& key) const {
  auto it = ngram_index_.find(key.str());
  if (it == ngram_index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count,
                            std::size_t min_n, std::size_t max_n,
                            bool use_subwords) {
  if (corpus.token_count() == 0) throw Error("cannot build vocabulary: empty corpus");
  if (min_n == 0 || min_n > max_n)
    throw ArgumentError("n-gram bounds must satisfy 1 <= min_n <= max_n");

  std::vector<Vocabulary::SessionEntry> entries;
  std::unordered_map<std::string, std::size_t> seen;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& token : sentence) {
      auto [it, inserted] = seen.emplace(token.str(), entries.size());
      if (inserted) entries.push_back({token, 0});
      ++entries[it->second].frequency;
    }
  }
  std::erase_if(entries, [&](const auto& e) { return e.frequency < min_count; });
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) {
                     return a.frequency > b.frequency;
                   });

  std::vector<TokenKey> ngrams;
  if (use_subwords) {
    std::unordered_map<std::string, std::uint32_t> known;
    for (const auto& e : entries) {
      for (auto& gram : extract_ngrams(e.key.venues(), min_n, max_n)) {
        TokenKey key(gram);
        if (known.emplace(key.str(), static_cast<std::uint32_t>(ngrams.size()))
                .second)
          ngrams.push_back(std::move(key));
      }
    }
  }
  return Vocabulary(std::move(entries), std::move(ngrams), min_count, min_n,
                    max_n, use_subwords);
}

}  // namespace seqrec
