#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "seqrec/errors.hpp"
#include "seqrec/ingest.hpp"

using namespace seqrec;

namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_checkin_stream(in);
}

Dataset user_with(const std::string& user, std::size_t n,
                  const std::string& venue_prefix = "v") {
  std::vector<CheckinRecord> recs;
  for (std::size_t i = 0; i < n; ++i)
    recs.push_back({user, venue_prefix + std::to_string(i), static_cast<Timestamp>(i * 10)});
  return dataset_from_records(recs);
}

}  // namespace

TEST(Parse, SingleRecord) {
  auto ds = parse("u1\tv1\t1000\n");
  ASSERT_EQ(ds.user_count(), 1u);
  ASSERT_EQ(ds.histories.at("u1").size(), 1u);
  EXPECT_EQ(ds.histories.at("u1")[0], (CheckinRecord{"u1", "v1", 1000}));
  EXPECT_EQ(ds.venue_counts.at("v1"), 1u);
}

TEST(Parse, SortsByTimestamp) {
  auto ds = parse("u1\tv2\t2000\nu1\tv1\t1000\n");
  const auto& h = ds.histories.at("u1");
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].venue_id, "v1");
  EXPECT_EQ(h[1].venue_id, "v2");
}

TEST(Parse, TiesKeepInputOrder) {
  auto ds = parse("u1\tb\t5\nu1\ta\t5\nu1\tc\t1\n");
  const auto& h = ds.histories.at("u1");
  EXPECT_EQ(h[0].venue_id, "c");
  EXPECT_EQ(h[1].venue_id, "b");
  EXPECT_EQ(h[2].venue_id, "a");
}

TEST(Parse, MissingFieldReportsLine) {
  try {
    parse("u1\tv1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Parse, BadTimestampReportsLine) {
  try {
    parse("u1\tv1\t10\nu2\tv2\tabc\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("u1\tv1\t-5\n"), ParseError);
  EXPECT_THROW(parse("u1\tv1\t12x\n"), ParseError);
  EXPECT_THROW(parse("\tv1\t12\n"), ParseError);
  EXPECT_THROW(parse("u1\tv,1\t12\n"), ParseError);
}

TEST(Parse, EmptyInputIsEmptyDataset) {
  EXPECT_TRUE(parse("").empty());
}

TEST(Parse, AcceptsCrlf) {
  auto ds = parse("u1\tv1\t1\r\nu1\tv2\t2\r\n");
  EXPECT_EQ(ds.checkin_count(), 2u);
  EXPECT_EQ(ds.histories.at("u1")[1].venue_id, "v2");
}

TEST(Parse, RoundTripRandomDatasets) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<CheckinRecord> recs;
    const auto n = rng() % 200;
    for (std::size_t i = 0; i < n; ++i)
      recs.push_back({"u" + std::to_string(rng() % 7), "v" + std::to_string(rng() % 13),
                      static_cast<Timestamp>(rng() % 1000)});
    auto ds = dataset_from_records(recs);
    std::ostringstream out;
    write_checkin_stream(ds, out);
    EXPECT_EQ(parse(out.str()), ds);
  }
}

TEST(Filter, DropsRareVenues) {
  std::vector<CheckinRecord> recs;
  for (int i = 0; i < 4; ++i) recs.push_back({"u1", "rare", i});
  for (int i = 0; i < 5; ++i) recs.push_back({"u1", "ok", 10 + i});
  for (int i = 0; i < 20; ++i) recs.push_back({"u1", "common", 100 + i});
  auto out = filter_dataset(dataset_from_records(recs), {5, 10});
  EXPECT_FALSE(out.venue_counts.contains("rare"));
  EXPECT_EQ(out.venue_counts.at("ok"), 5u);
  EXPECT_EQ(out.checkin_count(), 25u);
}

TEST(Filter, UserThresholdIsExclusive) {
  std::vector<CheckinRecord> recs;
  for (int i = 0; i < 10; ++i) recs.push_back({"ten", "v", i});
  for (int i = 0; i < 11; ++i) recs.push_back({"eleven", "v", i});
  auto out = filter_dataset(dataset_from_records(recs), {5, 10});
  EXPECT_FALSE(out.histories.contains("ten"));
  EXPECT_TRUE(out.histories.contains("eleven"));
  EXPECT_EQ(out.venue_counts.at("v"), 11u);
}

TEST(Filter, VenueFilterRunsBeforeUserFilterOnce) {
  // u1 loses its visits to "a" and "rare" and falls to 6 check-ins, so it
  // is dropped. That leaves "shared" with 4 visits; no second venue pass.
  std::vector<CheckinRecord> recs;
  for (int i = 0; i < 6; ++i) recs.push_back({"u1", "shared", i});
  for (int i = 0; i < 4; ++i) recs.push_back({"u1", "a", 10 + i});
  for (int i = 0; i < 2; ++i) recs.push_back({"u1", "rare", 20 + i});
  for (int i = 0; i < 4; ++i) recs.push_back({"u2", "shared", i});
  for (int i = 0; i < 8; ++i) recs.push_back({"u2", "b", 10 + i});
  auto out = filter_dataset(dataset_from_records(recs), {5, 10});
  EXPECT_FALSE(out.histories.contains("u1"));
  ASSERT_TRUE(out.histories.contains("u2"));
  EXPECT_EQ(out.histories.at("u2").size(), 12u);
  EXPECT_EQ(out.venue_counts.at("shared"), 4u);
}

TEST(Filter, EmptyStaysEmpty) {
  EXPECT_TRUE(filter_dataset(Dataset{}, {}).empty());
}

TEST(Filter, PostconditionsOnRandomData) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<CheckinRecord> recs;
    for (int i = 0; i < 600; ++i)
      recs.push_back({"u" + std::to_string(rng() % 30), "v" + std::to_string(rng() % 80),
                      static_cast<Timestamp>(rng() % 100000)});
    auto out = filter_dataset(dataset_from_records(recs), {5, 10});
    for (const auto& [user, h] : out.histories) EXPECT_GT(h.size(), 10u);
    Dataset recount = out;
    recount.recount_venues();
    EXPECT_EQ(recount.venue_counts, out.venue_counts);
  }
}

TEST(Split, TenCheckinsGiveEightAndTwo) {
  auto split = temporal_split(user_with("u", 10), 0.8);
  EXPECT_EQ(split.train.histories.at("u").size(), 8u);
  EXPECT_EQ(split.test.histories.at("u").size(), 2u);
}

TEST(Split, ElevenCheckinsFloorTrain) {
  auto split = temporal_split(user_with("u", 11), 0.8);
  EXPECT_EQ(split.train.histories.at("u").size(), 8u);
  EXPECT_EQ(split.test.histories.at("u").size(), 3u);
}

TEST(Split, SingleCheckinUserDropped) {
  auto split = temporal_split(user_with("u", 1), 0.8);
  EXPECT_TRUE(split.train.empty());
  EXPECT_TRUE(split.test.empty());
  EXPECT_EQ(split.users_dropped, 1u);
}

TEST(Split, RatioOutOfRange) {
  EXPECT_THROW(temporal_split(Dataset{}, 0.0), ArgumentError);
  EXPECT_THROW(temporal_split(Dataset{}, 1.0), ArgumentError);
  EXPECT_THROW(temporal_split(Dataset{}, -0.5), ArgumentError);
}

TEST(Split, PartitionsEachHistoryInOrder) {
  std::mt19937_64 rng(5);
  std::vector<CheckinRecord> recs;
  for (int i = 0; i < 2000; ++i)
    recs.push_back({"u" + std::to_string(rng() % 40), "v" + std::to_string(rng() % 50),
                    static_cast<Timestamp>(rng() % 5000)});
  auto ds = dataset_from_records(recs);
  auto split = temporal_split(ds, 0.8);
  for (const auto& [user, train] : split.train.histories) {
    const auto& test = split.test.histories.at(user);
    EXPECT_LE(train.back().timestamp, test.front().timestamp);
    std::vector<CheckinRecord> joined(train);
    joined.insert(joined.end(), test.begin(), test.end());
    EXPECT_EQ(joined, ds.histories.at(user));
  }
}

TEST(Split, SidecarJson) {
  auto split = temporal_split(user_with("u", 1), 0.8);
  EXPECT_EQ(split_sidecar_json(split), R"({"ratio":0.8,"users_dropped":1})");
}
