#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqrec/ingest.hpp"
#include "seqrec/sessions.hpp"

namespace seqrec {

// Canonical form of a venue sequence: ids joined by ','. Venue ids never
// contain ',' (see is_valid_venue_id), so the mapping is injective.
class TokenKey {
 public:
  static constexpr char kSeparator = ',';

  TokenKey() = default;
  explicit TokenKey(std::span<const VenueId> venues);
  static TokenKey from_string(std::string canonical);

  const std::string& str() const noexcept { return value_; }
  std::vector<VenueId> venues() const;
  std::size_t length() const;

  friend bool operator==(const TokenKey&, const TokenKey&) = default;
  friend auto operator<=>(const TokenKey&, const TokenKey&) = default;

 private:
  std::string value_;
};

// One sentence per user: the user's tokens in time order.
struct Corpus {
  std::vector<std::vector<TokenKey>> sentences;
  bool non_seq = false;
  std::chrono::seconds delta_t{5 * 3600};

  std::size_t token_count() const;
};

// non_seq=false: each user's sessions under seg.delta_t become the tokens.
// non_seq=true: every check-in becomes a single-venue token.
Corpus build_corpus(const Dataset& train, const SegmentationConfig& seg,
                    bool non_seq);

class Vocabulary {
 public:
  struct SessionEntry {
    TokenKey key;
    std::uint64_t frequency = 0;

    friend bool operator==(const SessionEntry&, const SessionEntry&) = default;
  };

  Vocabulary() = default;
  // Reassembles a vocabulary from stored tables; n-gram links are rebuilt.
  Vocabulary(std::vector<SessionEntry> sessions, std::vector<TokenKey> ngrams,
             std::size_t min_count, std::size_t min_n, std::size_t max_n,
             bool use_subwords);

  std::size_t session_count() const noexcept { return sessions_.size(); }
  std::size_t ngram_count() const noexcept { return ngrams_.size(); }
  // Input rows cover both tables: sessions first, then n-grams.
  std::size_t input_row_count() const noexcept {
    return sessions_.size() + ngrams_.size();
  }

  const std::vector<SessionEntry>& sessions() const noexcept {
    return sessions_;
  }
  const std::vector<TokenKey>& ngrams() const noexcept { return ngrams_; }

  std::optional<std::uint32_t> find_session(const TokenKey& key) const;
  std::optional<std::uint32_t> find_ngram(const TokenKey& key) const;

  std::uint32_t ngram_input_row(std::uint32_t ngram_index) const {
    return static_cast<std::uint32_t>(sessions_.size()) + ngram_index;
  }

  // The session's own row followed by the rows of its n-grams (own row only
  // when subwords are off).
  std::span<const std::uint32_t> input_rows(std::uint32_t session_index) const {
    return input_rows_[session_index];
  }

  std::size_t min_count() const noexcept { return min_count_; }
  std::size_t min_n() const noexcept { return min_n_; }
  std::size_t max_n() const noexcept { return max_n_; }
  bool use_subwords() const noexcept { return use_subwords_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.sessions_ == b.sessions_ && a.ngrams_ == b.ngrams_ &&
           a.min_count_ == b.min_count_ && a.min_n_ == b.min_n_ &&
           a.max_n_ == b.max_n_ && a.use_subwords_ == b.use_subwords_;
  }

 private:
  void index();

  std::vector<SessionEntry> sessions_;
  std::vector<TokenKey> ngrams_;
  std::unordered_map<std::string, std::uint32_t> session_index_;
  std::unordered_map<std::string, std::uint32_t> ngram_index_;
  std::vector<std::vector<std::uint32_t>> input_rows_;
  std::size_t min_count_ = 1;
  std::size_t min_n_ = 1;
  std::size_t max_n_ = 5;
  bool use_subwords_ = true;
};

// Session tokens with frequency >= min_count, ordered by descending
// frequency then first appearance. With subwords, every n-gram of a retained
// token is indexed once, in order of first appearance.
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count,
                            std::size_t min_n, std::size_t max_n,
                            bool use_subwords);

}  // namespace seqrec

template <>
struct std::hash<seqrec::TokenKey> {
  std::size_t operator()(const seqrec::TokenKey& k) const noexcept {
    return std::hash<std::string>{}(k.str());
  }
};
