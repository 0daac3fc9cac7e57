#include "seqrec/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "seqrec/errors.hpp"

namespace seqrec {

std::size_t Dataset::checkin_count() const {
  std::size_t n = 0;
  for (const auto& [user, history] : histories) n += history.size();
  return n;
}

void Dataset::recount_venues() {
  venue_counts.clear();
  for (const auto& [user, history] : histories)
    for (const auto& rec : history) ++venue_counts[rec.venue_id];
}

Dataset dataset_from_records(std::vector<CheckinRecord> records) {
  Dataset ds;
  for (auto& rec : records) {
    ++ds.venue_counts[rec.venue_id];
    ds.histories[rec.user_id].push_back(std::move(rec));
  }
  for (auto& [user, history] : ds.histories) {
    std::stable_sort(history.begin(), history.end(),
                     [](const CheckinRecord& a, const CheckinRecord& b) {
                       return a.timestamp < b.timestamp;
                     });
  }
  return ds;
}

bool is_valid_venue_id(const std::string& id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char c) {
    return c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

Dataset parse_checkin_stream(std::istream& in) {
  std::vector<CheckinRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3)
      throw ParseError(line_no, "expected 3 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    if (fields[0].empty()) throw ParseError(line_no, "empty user id");
    if (!is_valid_venue_id(fields[1]))
      throw ParseError(line_no, "invalid venue id '" + fields[1] + "'");

    const std::string& ts = fields[2];
    Timestamp value = 0;
    auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), value);
    if (ts.empty() || ec != std::errc() || ptr != ts.data() + ts.size())
      throw ParseError(line_no, "timestamp is not an integer: '" + ts + "'");
    if (value < 0) throw ParseError(line_no, "negative timestamp");

    records.push_back({fields[0], fields[1], value});
  }
  return dataset_from_records(std::move(records));
}

Dataset parse_checkin_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return parse_checkin_stream(in);
}

void write_checkin_stream(const Dataset& ds, std::ostream& out) {
  for (const auto& [user, history] : ds.histories)
    for (const auto& rec : history)
      out << rec.user_id << '\t' << rec.venue_id << '\t' << rec.timestamp
          << '\n';
}

void write_checkin_file(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_checkin_stream(ds, out);
  if (!out) throw Error("write failed: " + path);
}

Dataset filter_dataset(const Dataset& ds, const FilterConfig& cfg) {
  Dataset out;
  for (const auto& [user, history] : ds.histories) {
    std::vector<CheckinRecord> kept;
    for (const auto& rec : history) {
      auto it = ds.venue_counts.find(rec.venue_id);
      std::size_t count = it == ds.venue_counts.end() ? 0 : it->second;
      if (count >= cfg.min_venue_visits) kept.push_back(rec);
    }
    if (kept.size() > cfg.min_user_checkins_exclusive)
      out.histories.emplace(user, std::move(kept));
  }
  out.recount_venues();
  return out;
}

SplitDataset temporal_split(const Dataset& ds, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw ArgumentError("split ratio must lie in (0, 1)");

  SplitDataset split;
  split.ratio = ratio;
  for (const auto& [user, history] : ds.histories) {
    auto n = history.size();
    // The epsilon keeps products like 0.29 * 100 from flooring one short.
    auto n_train = static_cast<std::size_t>(
        std::floor(ratio * static_cast<double>(n) + 1e-9));
    if (n_train == 0 || n_train == n) {
      ++split.users_dropped;
      continue;
    }
    split.train.histories.emplace(
        user, std::vector<CheckinRecord>(history.begin(),
                                         history.begin() + n_train));
    split.test.histories.emplace(
        user,
        std::vector<CheckinRecord>(history.begin() + n_train, history.end()));
  }
  split.train.recount_venues();
  split.test.recount_venues();
  return split;
}

std::string split_sidecar_json(const SplitDataset& split) {
  nlohmann::json j;
  j["ratio"] = split.ratio;
  j["users_dropped"] = split.users_dropped;
  return j.dump();
}

}  // namespace seqrec
