#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "seqrec/errors.hpp"
#include "seqrec/similarity.hpp"
#include "toy_model.hpp"

using namespace seqrec;

namespace {

std::vector<std::vector<VenueId>> random_tokens(std::mt19937_64& rng,
                                                std::size_t count) {
  std::vector<std::vector<VenueId>> tokens;
  std::unordered_set<std::string> seen;
  while (tokens.size() < count) {
    std::vector<VenueId> t(1 + rng() % 3);
    for (auto& v : t) v = "v" + std::to_string(rng() % 40);
    if (seen.insert(TokenKey(t).str()).second) tokens.push_back(t);
  }
  return tokens;
}

}  // namespace

TEST(Cosine, KnownValues) {
  std::vector<float> a{1, 0}, b{0, 1}, c{-2, 0}, d{3, 0}, z{0, 0};
  EXPECT_DOUBLE_EQ(cosine_similarity(a, d), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b), 0.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, c), -1.0);
  EXPECT_EQ(cosine_similarity(a, z), 0.0);
  std::vector<float> three{1, 2, 3};
  EXPECT_THROW(cosine_similarity(a, three), ArgumentError);
}

TEST(Cosine, BoundedAndSymmetric) {
  std::mt19937_64 rng(5);
  std::normal_distribution<float> n;
  for (int t = 0; t < 200; ++t) {
    std::vector<float> a(16), b(16);
    for (auto& x : a) x = n(rng);
    for (auto& x : b) x = n(rng);
    const double s = cosine_similarity(a, b);
    EXPECT_LE(std::abs(s), 1.0);
    EXPECT_EQ(s, cosine_similarity(b, a));
  }
}

TEST(Kernels, SerialAndParallelAgree) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<float> u(-1, 1);
  Matrix rows(517, 24);
  for (auto& v : rows.data()) v = u(rng);
  std::vector<double> norms(rows.rows());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    double s = 0;
    for (float x : rows.row(i)) s += double(x) * x;
    norms[i] = std::sqrt(s);
  }
  std::vector<float> q(24);
  for (auto& v : q) v = u(rng);
  std::vector<double> a(rows.rows()), b(rows.rows());
  kernels::cosine_scan_serial(rows, norms, q, a);
  kernels::cosine_scan_parallel(rows, norms, q, b);
  EXPECT_EQ(a, b);
}

TEST(Kernels, TopNOrdersByScoreThenIndex) {
  std::vector<double> s{0.5, 0.9, 0.5, 0.1, 0.9};
  EXPECT_EQ(kernels::top_n(s, 3, {}), (std::vector<std::uint32_t>{1, 4, 0}));
  EXPECT_EQ(kernels::top_n(s, 10, {1, 4}), (std::vector<std::uint32_t>{0, 2, 3}));
}

TEST(NeighborIndex, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const bool subwords = trial % 2 == 0;
    auto model = fixtures::random_model(random_tokens(rng, 5 + rng() % 60),
                                       1 + rng() % 16, subwords, rng());
    NeighborIndex index(model, trial % 3 == 0);
    std::uniform_real_distribution<float> u(-1, 1);
    std::vector<float> q(model.dim());
    for (auto& x : q) x = u(rng);
    const std::size_t n = 1 + rng() % (index.size() + 3);
    auto got = index.most_similar(q, n);

    std::vector<std::pair<double, std::uint32_t>> all;
    for (std::uint32_t i = 0; i < model.vocabulary.session_count(); ++i)
      all.emplace_back(-cosine_similarity(composed_input_vector(model, i), q), i);
    std::sort(all.begin(), all.end());
    ASSERT_EQ(got.size(), std::min(n, all.size()));
    for (std::size_t r = 0; r < got.size(); ++r) {
      EXPECT_EQ(got[r].index, all[r].second);
      EXPECT_NEAR(got[r].score, -all[r].first, 1e-12);
      EXPECT_EQ(got[r].token, model.vocabulary.sessions()[got[r].index].key);
    }
  }
}

TEST(NeighborIndex, ExclusionAndErrors) {
  auto model = fixtures::random_model({{"a"}, {"b"}, {"c"}}, 4, false, 1);
  NeighborIndex index(model);
  auto q = composed_input_vector(model, 0);
  auto with_self = index.most_similar(q, 1);
  ASSERT_EQ(with_self.size(), 1u);
  EXPECT_EQ(with_self[0].index, 0u);
  EXPECT_NEAR(with_self[0].score, 1.0, 1e-6);

  auto without = index.most_similar(q, 5, std::unordered_set<std::uint32_t>{0});
  EXPECT_EQ(without.size(), 2u);
  for (const auto& n : without) EXPECT_NE(n.index, 0u);

  std::unordered_set<TokenKey> by_key{TokenKey(std::vector<VenueId>{"b"})};
  for (const auto& n : index.most_similar(q, 5, by_key)) EXPECT_NE(n.index, 1u);

  EXPECT_THROW(index.most_similar(q, 0), ArgumentError);
  std::vector<float> wrong(3);
  EXPECT_THROW(index.most_similar(wrong, 1), ArgumentError);
}
