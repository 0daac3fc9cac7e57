#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "seqrec/negative_sampling.hpp"

using namespace seqrec;

namespace {

// Loss evaluated directly from the definition, used as the finite-difference
// target.
double reference_loss(const std::vector<double>& h, std::uint32_t target,
                      const std::vector<std::uint32_t>& negs,
                      const BasicMatrix<double>& out) {
  auto dot = [&](std::uint32_t r) {
    double s = 0;
    for (std::size_t d = 0; d < h.size(); ++d) s += h[d] * out.row(r)[d];
    return s;
  };
  auto sig = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };
  double loss = -std::log(sig(dot(target)));
  for (auto n : negs) loss -= std::log(sig(-dot(n)));
  return loss;
}

double rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
  return std::sqrt(diff) / scale;
}

}  // namespace

TEST(NegativeSampling, ZeroVectorsGiveLog2PerTerm) {
  BasicMatrix<double> out(4, 3);
  std::vector<double> h(3, 0.0);
  std::vector<std::uint32_t> negs{1, 2, 3};
  auto r = loss_and_gradient<double>(h, 0, negs, out);
  EXPECT_NEAR(r.loss, 4 * std::log(2.0), 1e-12);
  for (double g : r.grad_hidden) EXPECT_EQ(g, 0.0);
  ASSERT_EQ(r.grad_outputs.size(), 4u);
  for (const auto& [row, g] : r.grad_outputs)
    for (double v : g) EXPECT_TRUE(std::isfinite(v));
}

TEST(NegativeSampling, LargePositiveScoreVanishes) {
  BasicMatrix<double> out(1, 1);
  out.row(0)[0] = 4.0;
  std::vector<double> h{5.0};  // u . v = 20
  auto r = loss_and_gradient<double>(h, 0, {}, out);
  EXPECT_LT(r.loss, 1e-8);
  EXPECT_GT(r.loss, 0.0);
}

TEST(NegativeSampling, LogSigmoidStableAtExtremes) {
  EXPECT_NEAR(log_sigmoid(-800.0), -800.0, 1e-9);
  EXPECT_NEAR(log_sigmoid(800.0), 0.0, 1e-300);
  EXPECT_TRUE(std::isfinite(log_sigmoid(-800.0f)));
}

TEST(NegativeSampling, MatchesCentralDifferences) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double h_step = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + rng() % 32;
    const std::size_t rows = 2 + rng() % 20;
    const std::size_t n_neg = 1 + rng() % 8;
    BasicMatrix<double> out(rows, dim);
    for (auto& v : out.data()) v = unif(rng);
    std::vector<double> hidden(dim);
    for (auto& v : hidden) v = unif(rng);
    const auto target = static_cast<std::uint32_t>(rng() % rows);
    std::vector<std::uint32_t> negs(n_neg);
    for (auto& n : negs) n = static_cast<std::uint32_t>(rng() % rows);

    auto analytic = loss_and_gradient<double>(hidden, target, negs, out);
    EXPECT_NEAR(analytic.loss, reference_loss(hidden, target, negs, out), 1e-10);

    // Gradient wrt hidden.
    std::vector<double> numeric(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      auto plus = hidden, minus = hidden;
      plus[d] += h_step;
      minus[d] -= h_step;
      numeric[d] = (reference_loss(plus, target, negs, out) -
                    reference_loss(minus, target, negs, out)) / (2 * h_step);
    }
    worst = std::max(worst, rel_error(analytic.grad_hidden, numeric));

    // Gradient wrt each touched output row; repeated rows sum their slices.
    std::map<std::uint32_t, std::vector<double>> by_row;
    for (const auto& [row, g] : analytic.grad_outputs) {
      auto& acc = by_row[row];
      acc.resize(dim, 0.0);
      for (std::size_t d = 0; d < dim; ++d) acc[d] += g[d];
    }
    for (const auto& [row, g] : by_row) {
      std::vector<double> num(dim);
      for (std::size_t d = 0; d < dim; ++d) {
        auto plus = out, minus = out;
        plus.row(row)[d] += h_step;
        minus.row(row)[d] -= h_step;
        num[d] = (reference_loss(hidden, target, negs, plus) -
                  reference_loss(hidden, target, negs, minus)) / (2 * h_step);
      }
      worst = std::max(worst, rel_error(g, num));
    }
  }
  EXPECT_LT(worst, 1e-4);
}
