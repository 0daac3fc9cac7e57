#include "seqrec/metrics.hpp"

#include <cmath>

#include "seqrec/errors.hpp"

namespace seqrec {

double precision_from_relevance(const std::vector<bool>& relevant, std::size_t k) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < std::min(k, relevant.size()); ++i)
    hits += relevant[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(k);
}

double ndcg_from_relevance(const std::vector<bool>& relevant,
                           std::size_t relevant_total, std::size_t k) {
  if (k == 0) throw ArgumentError("k must be at least 1");
  if (relevant_total == 0) throw ArgumentError("ndcg needs a non-empty truth set");
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, relevant.size()); ++i)
    if (relevant[i]) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, relevant_total); ++i)
    idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

namespace {

std::vector<bool> relevance_of(std::span<const std::string> recommended,
                               const std::unordered_set<std::string>& actual) {
  std::vector<bool> rel;
  rel.reserve(recommended.size());
  for (const auto& r : recommended) rel.push_back(actual.contains(r));
  return rel;
}

}  // namespace

double precision_at_k(std::span<const std::string> recommended,
                      const std::unordered_set<std::string>& actual,
                      std::size_t k) {
  return precision_from_relevance(relevance_of(recommended, actual), k);
}

double ndcg_at_k(std::span<const std::string> recommended,
                 const std::unordered_set<std::string>& actual, std::size_t k) {
  return ndcg_from_relevance(relevance_of(recommended, actual), actual.size(), k);
}

double hit_rate(const std::map<std::string, bool>& per_user_hits) {
  if (per_user_hits.empty()) throw ArgumentError("hit_rate: no users");
  std::size_t hits = 0;
  for (const auto& [user, hit] : per_user_hits) hits += hit ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(per_user_hits.size());
}

bool seq_exact_match(std::span<const VenueId> recommended,
                     std::span<const VenueId> actual) {
  return std::equal(recommended.begin(), recommended.end(), actual.begin(),
                    actual.end());
}

std::map<UserId, GroundTruth> build_ground_truth(const Dataset& test,
                                                 std::chrono::seconds delta_t) {
  std::map<UserId, GroundTruth> out;
  for (const auto& [user, history] : test.histories) {
    if (history.empty()) continue;
    GroundTruth truth;
    for (const auto& rec : history) {
      truth.venues_in_order.push_back(rec.venue_id);
      truth.venues.insert(rec.venue_id);
    }
    for (auto& s : segment_user_history(history, delta_t))
      truth.sessions.push_back(std::move(s.venue_ids));
    out.emplace(user, std::move(truth));
  }
  return out;
}

UserMetrics score_user(const Recommendation& rec, const GroundTruth& truth,
                       std::size_t k) {
  UserMetrics m;
  m.user_id = rec.user_id;
  std::vector<bool> rel;
  std::size_t relevant_total = 0;
  if (rec.kind == RecType::seq) {
    std::unordered_set<TokenKey> distinct;
    for (const auto& s : truth.sessions) distinct.insert(TokenKey(s));
    relevant_total = distinct.size();
    for (const auto& item : rec.items) {
      bool match = std::any_of(truth.sessions.begin(), truth.sessions.end(),
                               [&](const auto& s) {
                                 return seq_exact_match(item.venues, s);
                               });
      rel.push_back(match);
    }
  } else {
    relevant_total = truth.venues.size();
    for (const auto& item : rec.items)
      rel.push_back(truth.venues.contains(item.venues.front()));
  }
  m.precision = precision_from_relevance(rel, k);
  m.ndcg = ndcg_from_relevance(rel, relevant_total, k);
  m.hit = m.precision > 0.0;
  return m;
}

MetricsReport evaluate_queries(
    const NeighborIndex& index,
    const std::map<UserId, std::vector<std::vector<VenueId>>>& queries,
    const std::map<UserId, GroundTruth>& truth,
    const RecommendOptions& options) {
  if (truth.empty()) throw Error("evaluate: empty test split");
  check_compatible(index.model(), options.type);
  if (options.k == 0 || options.neighbors == 0)
    throw ArgumentError("k and N must be at least 1");
  if (index.size() == 0) throw Error("evaluate: empty vocabulary");

  std::vector<const std::pair<const UserId, GroundTruth>*> users;
  for (const auto& entry : truth) users.push_back(&entry);

  std::vector<UserMetrics> per_user(users.size());
  const auto n_users = static_cast<std::ptrdiff_t>(users.size());
  const std::vector<std::vector<VenueId>> none;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n_users; ++i) {
    const auto& [user, gt] = *users[static_cast<std::size_t>(i)];
    auto& out = per_user[static_cast<std::size_t>(i)];
    auto q = queries.find(user);
    const auto& user_queries = q == queries.end() ? none : q->second;
    try {
      auto rec = recommend_for_user(index, user, user_queries, options);
      out = score_user(rec, gt, options.k);
    } catch (const ColdUserError&) {
      out = UserMetrics{user, 0.0, 0.0, false, true};
    }
  }

  MetricsReport report;
  report.k = options.k;
  report.n = options.neighbors;
  report.train_config = index.model().config;
  report.rec_type = options.type;
  report.n_users_evaluated = per_user.size();
  double p = 0.0, g = 0.0, h = 0.0;
  for (const auto& m : per_user) {
    p += m.precision;
    g += m.ndcg;
    h += m.hit ? 1.0 : 0.0;
    report.n_cold_users += m.cold ? 1 : 0;
  }
  const auto denom = static_cast<double>(per_user.size());
  report.precision_at_k = p / denom;
  report.ndcg_at_k = g / denom;
  report.hit_rate = h / denom;
  report.per_user = std::move(per_user);
  return report;
}

MetricsReport evaluate(const EmbeddingModel& model, const SplitDataset& split,
                       const RecommendOptions& options) {
  if (split.test.empty()) throw Error("evaluate: empty test split");
  const NeighborIndex index(model);
  std::map<UserId, std::vector<std::vector<VenueId>>> queries;
  for (const auto& [user, history] : split.train.histories)
    queries.emplace(user, build_queries(model, history));
  return evaluate_queries(index, queries,
                          build_ground_truth(split.test, model.corpus.delta_t),
                          options);
}

nlohmann::json to_json(const MetricsReport& r) {
  const auto& c = r.train_config;
  return {
      {"precision_at_k", r.precision_at_k},
      {"ndcg_at_k", r.ndcg_at_k},
      {"hit_rate", r.hit_rate},
      {"k", r.k},
      {"n", r.n},
      {"n_users_evaluated", r.n_users_evaluated},
      {"n_cold_users", r.n_cold_users},
      {"params",
       {{"mode", to_string(c.mode)},
        {"use_subwords", c.use_subwords},
        {"size", c.size},
        {"min_n", c.min_n},
        {"max_n", c.max_n},
        {"window", c.window},
        {"epochs", c.epochs},
        {"negatives", c.negatives},
        {"initial_lr", c.initial_lr},
        {"seed", c.seed},
        {"min_count", c.min_count},
        {"rec_type", to_string(r.rec_type)}}},
  };
}

}  // namespace seqrec
