#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace seqrec {

using UserId = std::string;
using VenueId = std::string;
using Timestamp = std::int64_t;

struct CheckinRecord {
  UserId user_id;
  VenueId venue_id;
  Timestamp timestamp = 0;

  friend bool operator==(const CheckinRecord&, const CheckinRecord&) = default;
};

// Per-user histories, each sorted ascending by timestamp (stable on ties).
struct Dataset {
  std::map<UserId, std::vector<CheckinRecord>> histories;
  std::map<VenueId, std::size_t> venue_counts;

  std::size_t user_count() const { return histories.size(); }
  std::size_t venue_count() const { return venue_counts.size(); }
  std::size_t checkin_count() const;
  bool empty() const { return histories.empty(); }

  // Rebuilds venue_counts from histories.
  void recount_venues();

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct FilterConfig {
  std::size_t min_venue_visits = 5;
  // Users with at most this many check-ins are dropped.
  std::size_t min_user_checkins_exclusive = 10;
};

struct SplitDataset {
  Dataset train;
  Dataset test;
  double ratio = 0.8;
  std::size_t users_dropped = 0;
};

// Groups records by user and stable-sorts each history by timestamp.
Dataset dataset_from_records(std::vector<CheckinRecord> records);

// Characters a venue id may not contain. Venue sequences are keyed by
// joining ids with ',' and the text export separates fields by whitespace.
bool is_valid_venue_id(const std::string& id);

// Parses `user<TAB>venue<TAB>timestamp` lines. LF or CRLF line endings;
// blank lines are skipped. Throws ParseError with the 1-based line number.
Dataset parse_checkin_stream(std::istream& in);
Dataset parse_checkin_file(const std::string& path);

// Writes every record in user order, then time order.
void write_checkin_stream(const Dataset& ds, std::ostream& out);
void write_checkin_file(const Dataset& ds, const std::string& path);

// Venue filter, then user filter, one pass each.
Dataset filter_dataset(const Dataset& ds, const FilterConfig& cfg);

// First floor(ratio * n) check-ins of each user go to train, the rest to
// test. Users left with an empty side are dropped and counted.
SplitDataset temporal_split(const Dataset& ds, double ratio);

// {"ratio":..., "users_dropped":...}
std::string split_sidecar_json(const SplitDataset& split);

}  // namespace seqrec
