#pragma once

#include <chrono>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "seqrec/ingest.hpp"

namespace seqrec {

// Consecutive check-ins of one user whose gaps are all <= delta_t.
struct Session {
  UserId user_id;
  std::vector<VenueId> venue_ids;
  Timestamp start_time = 0;
  Timestamp end_time = 0;

  friend bool operator==(const Session&, const Session&) = default;
};

// A contiguous slice of a session.
using SubSequence = std::vector<VenueId>;

struct SegmentationConfig {
  std::chrono::seconds delta_t{5 * 3600};
  std::size_t min_n = 1;
  std::size_t max_n = 5;

  void validate() const;
};

std::vector<Session> segment_user_history(
    std::span<const CheckinRecord> checkins, std::chrono::seconds delta_t);

// Segments every user of the dataset, keyed like Dataset::histories.
std::map<UserId, std::vector<Session>> segment_dataset(
    const Dataset& ds, std::chrono::seconds delta_t);

// All contiguous slices of length min_n..min(max_n, size), shortest first,
// left to right within a length. Duplicates are kept.
std::vector<SubSequence> extract_ngrams(std::span<const VenueId> venues,
                                        std::size_t min_n, std::size_t max_n);
inline std::vector<SubSequence> extract_ngrams(const Session& session,
                                               std::size_t min_n,
                                               std::size_t max_n) {
  return extract_ngrams(session.venue_ids, min_n, max_n);
}

struct GapStatistics {
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
  std::size_t users_measured = 0;
};

// Gaps between consecutive same-UTC-day check-ins, averaged per user; the
// result is the mean and population standard deviation of those per-user
// means. Throws InsufficientDataError if no user has a same-day pair.
GapStatistics estimate_delta_t(const Dataset& ds);

// Debug dump: `user<TAB>v1,v2,...<TAB>start<TAB>end` per session.
void write_session_dump(const std::map<UserId, std::vector<Session>>& sessions,
                        std::ostream& out);

}  // namespace seqrec
