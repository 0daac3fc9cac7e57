#pragma once

#include <map>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "seqrec/recommend.hpp"

namespace seqrec {

// |top-k(recommended) ∩ actual| / k. The denominator stays k even when
// fewer than k items were recommended.
double precision_at_k(std::span<const std::string> recommended,
                      const std::unordered_set<std::string>& actual,
                      std::size_t k);

// Binary gain, log2(rank + 1) discount, normalized by the ideal DCG of
// min(|actual|, k) hits. Requires a non-empty `actual`.
double ndcg_at_k(std::span<const std::string> recommended,
                 const std::unordered_set<std::string>& actual, std::size_t k);

// Same two metrics over a precomputed relevance list (rank order).
double precision_from_relevance(const std::vector<bool>& relevant, std::size_t k);
double ndcg_from_relevance(const std::vector<bool>& relevant,
                           std::size_t relevant_total, std::size_t k);

// Fraction of users with at least one hit. Throws on an empty map.
double hit_rate(const std::map<std::string, bool>& per_user_hits);

// Equal length and element-wise equal.
bool seq_exact_match(std::span<const VenueId> recommended,
                     std::span<const VenueId> actual);

// Held-out truth for one user.
struct GroundTruth {
  std::vector<VenueId> venues_in_order;
  std::unordered_set<VenueId> venues;
  std::vector<std::vector<VenueId>> sessions;  // test split under delta_t
};

std::map<UserId, GroundTruth> build_ground_truth(const Dataset& test,
                                                 std::chrono::seconds delta_t);

struct UserMetrics {
  UserId user_id;
  double precision = 0.0;
  double ndcg = 0.0;
  bool hit = false;
  bool cold = false;
};

struct MetricsReport {
  double precision_at_k = 0.0;
  double ndcg_at_k = 0.0;
  double hit_rate = 0.0;
  std::size_t k = 10;
  std::size_t n = 10;
  std::size_t n_users_evaluated = 0;
  std::size_t n_cold_users = 0;
  TrainConfig train_config;
  RecType rec_type = RecType::seq_single_avg;
  std::vector<UserMetrics> per_user;
};

// Scores one user's recommendation. Seq items hit when they exactly match
// one of the user's test sessions; other types hit on venue membership.
UserMetrics score_user(const Recommendation& rec, const GroundTruth& truth,
                       std::size_t k);

// Recommends for every user in `truth` from the given queries and
// macro-averages. Users whose queries are all unrepresentable (or who have
// no queries) score zero and count as cold.
MetricsReport evaluate_queries(
    const NeighborIndex& index,
    const std::map<UserId, std::vector<std::vector<VenueId>>>& queries,
    const std::map<UserId, GroundTruth>& truth,
    const RecommendOptions& options);

// Queries come from split.train, truth from split.test, both segmented with
// the model's delta_t.
MetricsReport evaluate(const EmbeddingModel& model, const SplitDataset& split,
                       const RecommendOptions& options);

nlohmann::json to_json(const MetricsReport& report);

}  // namespace seqrec
