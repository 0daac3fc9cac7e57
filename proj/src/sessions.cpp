#include "seqrec/sessions.hpp"

#include <cmath>

#include "seqrec/errors.hpp"

namespace seqrec {

namespace {
constexpr Timestamp kSecondsPerDay = 86400;
}

void SegmentationConfig::validate() const {
  if (delta_t.count() <= 0) throw ArgumentError("delta_t must be positive");
  if (min_n < 1) throw ArgumentError("min_n must be at least 1");
  if (min_n > max_n) throw ArgumentError("min_n must not exceed max_n");
}

std::vector<Session> segment_user_history(
    std::span<const CheckinRecord> checkins, std::chrono::seconds delta_t) {
  std::vector<Session> sessions;
  const Timestamp limit = delta_t.count();
  for (const auto& rec : checkins) {
    if (sessions.empty() || rec.timestamp - sessions.back().end_time > limit) {
      sessions.push_back({rec.user_id, {}, rec.timestamp, rec.timestamp});
    }
    auto& current = sessions.back();
    current.venue_ids.push_back(rec.venue_id);
    current.end_time = rec.timestamp;
  }
  return sessions;
}

std::map<UserId, std::vector<Session>> segment_dataset(
    const Dataset& ds, std::chrono::seconds delta_t) {
  std::map<UserId, std::vector<Session>> out;
  for (const auto& [user, history] : ds.histories)
    out.emplace(user, segment_user_history(history, delta_t));
  return out;
}

std::vector<SubSequence> extract_ngrams(std::span<const VenueId> venues,
                                        std::size_t min_n, std::size_t max_n) {
  if (min_n > max_n) throw ArgumentError("min_n must not exceed max_n");
  if (min_n == 0) throw ArgumentError("min_n must be at least 1");
  std::vector<SubSequence> out;
  const std::size_t m = venues.size();
  for (std::size_t n = min_n; n <= std::min(max_n, m); ++n)
    for (std::size_t i = 0; i + n <= m; ++i)
      out.emplace_back(venues.begin() + i, venues.begin() + i + n);
  return out;
}

GapStatistics estimate_delta_t(const Dataset& ds) {
  std::vector<double> user_means;
  for (const auto& [user, history] : ds.histories) {
    double total = 0.0;
    std::size_t gaps = 0;
    for (std::size_t i = 1; i < history.size(); ++i) {
      const auto prev = history[i - 1].timestamp;
      const auto cur = history[i].timestamp;
      if (prev / kSecondsPerDay != cur / kSecondsPerDay) continue;
      total += static_cast<double>(cur - prev);
      ++gaps;
    }
    if (gaps > 0) user_means.push_back(total / static_cast<double>(gaps));
  }
  if (user_means.empty())
    throw InsufficientDataError("no user has two check-ins on the same day");

  GapStatistics stats;
  stats.users_measured = user_means.size();
  double sum = 0.0;
  for (double m : user_means) sum += m;
  stats.mean_seconds = sum / static_cast<double>(user_means.size());
  double sq = 0.0;
  for (double m : user_means) sq += (m - stats.mean_seconds) * (m - stats.mean_seconds);
  stats.stddev_seconds = std::sqrt(sq / static_cast<double>(user_means.size()));
  return stats;
}

void write_session_dump(const std::map<UserId, std::vector<Session>>& sessions,
                        std::ostream& out) {
  for (const auto& [user, list] : sessions) {
    for (const auto& s : list) {
      out << user << '\t';
      for (std::size_t i = 0; i < s.venue_ids.size(); ++i)
        out << (i ? "," : "") << s.venue_ids[i];
      out << '\t' << s.start_time << '\t' << s.end_time << '\n';
    }
  }
}

}  // namespace seqrec
