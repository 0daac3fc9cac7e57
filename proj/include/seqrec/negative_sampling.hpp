#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "seqrec/matrix.hpp"

namespace seqrec {

// log(sigmoid(x)) without overflow for large |x|.
template <std::floating_point Real>
Real log_sigmoid(Real x) {
  if (x >= Real(0)) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

template <std::floating_point Real>
Real sigmoid(Real x) {
  if (x >= Real(0)) return Real(1) / (Real(1) + std::exp(-x));
  const Real e = std::exp(x);
  return e / (Real(1) + e);
}

// Negative-sampling objective for one (hidden, target) pair:
//
//   loss = -log s(h . out[target]) - sum_neg log s(-h . out[neg])
//
// Writes d loss / d hidden into grad_hidden and, for the target followed by
// each negative in order, d loss / d out[row] into consecutive slices of
// grad_rows (size (1 + negatives) * dim). Repeated row indices each get
// their own slice. Returns the loss.
template <std::floating_point Real>
Real negative_sampling_step(std::span<const Real> hidden, std::uint32_t target,
                            std::span<const std::uint32_t> negatives,
                            const BasicMatrix<Real>& output,
                            std::span<Real> grad_hidden,
                            std::span<Real> grad_rows) {
  const std::size_t dim = hidden.size();
  for (auto& g : grad_hidden) g = Real(0);

  Real loss = Real(0);
  auto contribute = [&](std::uint32_t row, std::size_t slot, bool positive) {
    auto out_row = output.row(row);
    Real score = Real(0);
    for (std::size_t d = 0; d < dim; ++d) score += hidden[d] * out_row[d];
    // coeff = d loss / d score
    Real coeff;
    if (positive) {
      loss -= log_sigmoid(score);
      coeff = sigmoid(score) - Real(1);
    } else {
      loss -= log_sigmoid(-score);
      coeff = sigmoid(score);
    }
    auto grad_row = grad_rows.subspan(slot * dim, dim);
    for (std::size_t d = 0; d < dim; ++d) {
      grad_hidden[d] += coeff * out_row[d];
      grad_row[d] = coeff * hidden[d];
    }
  };

  contribute(target, 0, true);
  for (std::size_t i = 0; i < negatives.size(); ++i)
    contribute(negatives[i], i + 1, false);
  return loss;
}

template <std::floating_point Real>
struct LossAndGradient {
  Real loss = Real(0);
  std::vector<Real> grad_hidden;
  // (output row, gradient) for the target first, then each negative.
  std::vector<std::pair<std::uint32_t, std::vector<Real>>> grad_outputs;
};

template <std::floating_point Real>
LossAndGradient<Real> loss_and_gradient(std::span<const Real> hidden,
                                        std::uint32_t target,
                                        std::span<const std::uint32_t> negatives,
                                        const BasicMatrix<Real>& output) {
  const std::size_t dim = hidden.size();
  LossAndGradient<Real> result;
  result.grad_hidden.assign(dim, Real(0));
  std::vector<Real> rows((1 + negatives.size()) * dim);
  result.loss = negative_sampling_step<Real>(hidden, target, negatives, output,
                                             result.grad_hidden, rows);
  for (std::size_t i = 0; i <= negatives.size(); ++i) {
    const std::uint32_t row = i == 0 ? target : negatives[i - 1];
    result.grad_outputs.emplace_back(
        row, std::vector<Real>(rows.begin() + i * dim,
                               rows.begin() + (i + 1) * dim));
  }
  return result;
}

}  // namespace seqrec
