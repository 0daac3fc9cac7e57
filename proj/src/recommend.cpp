#include "seqrec/recommend.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "seqrec/errors.hpp"

namespace seqrec {

std::string to_string(RecType type) {
  switch (type) {
    case RecType::seq: return "seq";
    case RecType::seq_single_max: return "seq-single-max";
    case RecType::seq_single_avg: return "seq-single-avg";
    case RecType::non_seq: return "non-seq";
  }
  return "unknown";
}

RecType parse_rec_type(const std::string& text) {
  if (text == "seq") return RecType::seq;
  if (text == "seq-single-max") return RecType::seq_single_max;
  if (text == "seq-single-avg") return RecType::seq_single_avg;
  if (text == "non-seq") return RecType::non_seq;
  throw ArgumentError("unknown recommendation type '" + text + "'");
}

void check_compatible(const EmbeddingModel& model, RecType type) {
  const bool wants_non_seq = type == RecType::non_seq;
  if (wants_non_seq && !model.corpus.non_seq)
    throw ArgumentError("non-seq recommendations need a model trained with --non-seq");
  if (!wants_non_seq && model.corpus.non_seq)
    throw ArgumentError(to_string(type) +
                        " recommendations need a session model, not a --non-seq model");
}

std::vector<std::vector<VenueId>> build_queries(
    const EmbeddingModel& model, std::span<const CheckinRecord> history) {
  std::vector<std::vector<VenueId>> queries;
  std::unordered_set<TokenKey> seen;
  auto add = [&](std::vector<VenueId> venues) {
    if (seen.insert(TokenKey(venues)).second) queries.push_back(std::move(venues));
  };
  if (model.corpus.non_seq) {
    for (const auto& rec : history) add({rec.venue_id});
  } else {
    for (auto& s : segment_user_history(history, model.corpus.delta_t))
      add(std::move(s.venue_ids));
  }
  return queries;
}

std::vector<Neighbor> merge_neighbors(
    std::span<const std::vector<Neighbor>> lists) {
  std::map<std::uint32_t, Neighbor> best;
  for (const auto& list : lists) {
    for (const auto& n : list) {
      auto [it, inserted] = best.emplace(n.index, n);
      if (!inserted && n.score > it->second.score) it->second.score = n.score;
    }
  }
  std::vector<Neighbor> merged;
  merged.reserve(best.size());
  for (auto& [idx, n] : best) merged.push_back(std::move(n));
  std::stable_sort(merged.begin(), merged.end(),
                   [](const Neighbor& a, const Neighbor& b) {
                     return a.score > b.score;
                   });
  return merged;
}

namespace {

struct VenueScore {
  VenueId venue;
  double best = 0.0;
  double sum = 0.0;
  std::size_t occurrences = 0;
  std::size_t first_seen = 0;  // encodes neighbor rank, then position
};

std::vector<ScoredItem> per_venue(std::span<const ScoredItem> ranked,
                                  bool use_mean, std::size_t k,
                                  const VisitedFilter* visited) {
  std::unordered_map<VenueId, std::size_t> slot;
  std::vector<VenueScore> venues;
  std::size_t order = 0;
  for (const auto& item : ranked) {
    for (const auto& v : item.venues) {
      auto [it, inserted] = slot.emplace(v, venues.size());
      if (inserted) venues.push_back({v, item.score, 0.0, 0, order});
      auto& vs = venues[it->second];
      vs.best = std::max(vs.best, item.score);
      vs.sum += item.score;
      ++vs.occurrences;
      ++order;
    }
  }
  std::vector<ScoredItem> out;
  for (const auto& vs : venues) {
    if (visited && visited->venues.contains(vs.venue)) continue;
    const double score =
        use_mean ? vs.sum / static_cast<double>(vs.occurrences) : vs.best;
    out.push_back({{vs.venue}, score});
  }
  // venues is in first-seen order, so a stable sort keeps that tie-break.
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredItem& a, const ScoredItem& b) {
                     return a.score > b.score;
                   });
  if (out.size() > k) out.resize(k);
  return out;
}

}  // namespace

std::vector<ScoredItem> aggregate_neighbors(std::span<const ScoredItem> ranked,
                                            RecType type, std::size_t k,
                                            std::size_t seq_outputs,
                                            const VisitedFilter* visited) {
  switch (type) {
    case RecType::seq: {
      std::vector<ScoredItem> out;
      for (const auto& item : ranked) {
        if (out.size() >= seq_outputs) break;
        if (visited && visited->sequences.contains(TokenKey(item.venues)))
          continue;
        out.push_back(item);
      }
      return out;
    }
    case RecType::seq_single_max:
      return per_venue(ranked, false, k, visited);
    case RecType::seq_single_avg:
      return per_venue(ranked, true, k, visited);
    case RecType::non_seq: {
      std::vector<ScoredItem> out;
      for (const auto& item : ranked) {
        if (out.size() >= k) break;
        if (visited && visited->venues.contains(item.venues.front())) continue;
        out.push_back(item);
      }
      return out;
    }
  }
  return {};
}

Recommendation recommend_for_user(const NeighborIndex& index,
                                  const UserId& user,
                                  std::span<const std::vector<VenueId>> queries,
                                  const RecommendOptions& options) {
  const auto& model = index.model();
  check_compatible(model, options.type);

  Recommendation rec;
  rec.user_id = user;
  rec.kind = options.type;

  std::vector<std::vector<Neighbor>> lists;
  for (const auto& q : queries) {
    std::vector<float> vec;
    try {
      vec = token_vector(model, q);
    } catch (const LookupError&) {
      ++rec.unrepresentable_queries;
      continue;
    } catch (const UnrepresentableError&) {
      ++rec.unrepresentable_queries;
      continue;
    }
    std::unordered_set<std::uint32_t> exclude;
    if (auto own = model.vocabulary.find_session(TokenKey(q))) exclude.insert(*own);
    lists.push_back(index.most_similar(vec, options.neighbors, exclude));
  }
  if (lists.empty())
    throw ColdUserError("user " + user + " has no representable query");

  std::vector<ScoredItem> ranked;
  for (const auto& n : merge_neighbors(lists))
    ranked.push_back({n.token.venues(), n.score});

  VisitedFilter visited;
  if (options.exclude_visited) {
    for (const auto& q : queries) {
      visited.sequences.insert(TokenKey(q));
      visited.venues.insert(q.begin(), q.end());
    }
  }
  rec.items = aggregate_neighbors(ranked, options.type, options.k,
                                  options.seq_outputs,
                                  options.exclude_visited ? &visited : nullptr);
  return rec;
}

nlohmann::json to_json(const Recommendation& rec) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& item : rec.items) {
    nlohmann::json j;
    if (rec.kind == RecType::seq)
      j["sequence"] = item.venues;
    else
      j["venue"] = item.venues.front();
    j["score"] = item.score;
    items.push_back(std::move(j));
  }
  return {{"user", rec.user_id}, {"type", to_string(rec.kind)}, {"items", items}};
}

}  // namespace seqrec
