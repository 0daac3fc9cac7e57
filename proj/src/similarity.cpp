#include "seqrec/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "seqrec/errors.hpp"

namespace seqrec {

namespace {

double dot(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d)
    s += static_cast<double>(a[d]) * static_cast<double>(b[d]);
  return s;
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size())
    throw ArgumentError("cosine_similarity: dimension mismatch");
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return clamp_unit(dot(a, b) / (na * nb));
}

namespace kernels {

void cosine_scan_serial(const Matrix& rows, std::span<const double> row_norms,
                        std::span<const float> query, std::span<double> scores) {
  const double qn = std::sqrt(dot(query, query));
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const double denom = row_norms[i] * qn;
    scores[i] = denom == 0.0 ? 0.0 : clamp_unit(dot(rows.row(i), query) / denom);
  }
}

void cosine_scan_parallel(const Matrix& rows, std::span<const double> row_norms,
                          std::span<const float> query,
                          std::span<double> scores) {
  const double qn = std::sqrt(dot(query, query));
  const auto n = static_cast<std::ptrdiff_t>(rows.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(i);
    const double denom = row_norms[r] * qn;
    scores[r] = denom == 0.0 ? 0.0 : clamp_unit(dot(rows.row(r), query) / denom);
  }
}

std::vector<std::uint32_t> top_n(std::span<const double> scores, std::size_t n,
                                 const std::unordered_set<std::uint32_t>& exclude) {
  std::vector<std::uint32_t> candidates;
  candidates.reserve(scores.size());
  for (std::uint32_t i = 0; i < scores.size(); ++i)
    if (!exclude.contains(i)) candidates.push_back(i);
  const auto keep = std::min(n, candidates.size());
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end(), better);
  candidates.resize(keep);
  return candidates;
}

}  // namespace kernels

NeighborIndex::NeighborIndex(const EmbeddingModel& model, bool parallel)
    : model_(&model),
      rows_(model.vocabulary.session_count(), model.dim()),
      norms_(model.vocabulary.session_count()),
      parallel_(parallel) {
  for (std::uint32_t i = 0; i < rows_.rows(); ++i) {
    auto v = composed_input_vector(model, i);
    std::copy(v.begin(), v.end(), rows_.row(i).begin());
    norms_[i] = std::sqrt(dot(v, v));
  }
}

std::vector<Neighbor> NeighborIndex::most_similar(
    std::span<const float> query, std::size_t n,
    const std::unordered_set<std::uint32_t>& exclude) const {
  if (size() == 0) throw Error("most_similar: empty vocabulary");
  if (n == 0) throw ArgumentError("most_similar: N must be at least 1");
  if (query.size() != rows_.cols())
    throw ArgumentError("most_similar: dimension mismatch");

  std::vector<double> scores(size());
  if (parallel_)
    kernels::cosine_scan_parallel(rows_, norms_, query, scores);
  else
    kernels::cosine_scan_serial(rows_, norms_, query, scores);

  std::vector<Neighbor> out;
  for (auto i : kernels::top_n(scores, n, exclude))
    out.push_back({i, model_->vocabulary.sessions()[i].key, scores[i]});
  return out;
}

std::vector<Neighbor> NeighborIndex::most_similar(
    std::span<const float> query, std::size_t n,
    const std::unordered_set<TokenKey>& exclude) const {
  std::unordered_set<std::uint32_t> ids;
  for (const auto& key : exclude)
    if (auto id = model_->vocabulary.find_session(key)) ids.insert(*id);
  return most_similar(query, n, ids);
}

}  // namespace seqrec
