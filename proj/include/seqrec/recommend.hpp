#pragma once

#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "seqrec/similarity.hpp"

namespace seqrec {

enum class RecType { seq, seq_single_max, seq_single_avg, non_seq };

std::string to_string(RecType type);
RecType parse_rec_type(const std::string& text);

// NonSeq needs a model trained on single check-ins; the other types need a
// session model. Throws ArgumentError on a mismatch.
void check_compatible(const EmbeddingModel& model, RecType type);

// A venue sequence with a similarity score. Single-venue recommendations
// hold one venue.
struct ScoredItem {
  std::vector<VenueId> venues;
  double score = 0.0;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

struct RecommendOptions {
  RecType type = RecType::seq_single_avg;
  std::size_t neighbors = 10;  // N
  std::size_t k = 10;
  // Sequences emitted by the Seq type.
  std::size_t seq_outputs = 1;
  bool exclude_visited = false;
};

struct Recommendation {
  UserId user_id;
  RecType kind = RecType::seq_single_avg;
  std::vector<ScoredItem> items;
  std::size_t unrepresentable_queries = 0;
};

// Query sequences for a user's training history: the sessions under the
// model's delta_t, or single check-ins for a NonSeq model. Repeats are
// dropped, first occurrence kept.
std::vector<std::vector<VenueId>> build_queries(
    const EmbeddingModel& model, std::span<const CheckinRecord> history);

// Union of neighbor lists keeping each token's best score, ordered by score
// then vocabulary index.
std::vector<Neighbor> merge_neighbors(
    std::span<const std::vector<Neighbor>> lists);

struct VisitedFilter {
  std::unordered_set<VenueId> venues;
  std::unordered_set<TokenKey> sequences;
};

// Turns ranked neighbor sequences into the final list for `type`:
//   seq             top seq_outputs sequences as they are
//   seq_single_max  per venue, max score over its occurrences; top k
//   seq_single_avg  per venue, mean score over its occurrences; top k
//   non_seq         neighbors are venues already; top k
// Ties: score, then neighbor rank, then position in the sequence.
std::vector<ScoredItem> aggregate_neighbors(std::span<const ScoredItem> ranked,
                                            RecType type, std::size_t k,
                                            std::size_t seq_outputs = 1,
                                            const VisitedFilter* visited = nullptr);

// Throws ColdUserError when no query can be represented.
Recommendation recommend_for_user(const NeighborIndex& index,
                                  const UserId& user,
                                  std::span<const std::vector<VenueId>> queries,
                                  const RecommendOptions& options);

nlohmann::json to_json(const Recommendation& rec);

}  // namespace seqrec
