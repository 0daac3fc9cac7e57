#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace seqrec {

// Dense row-major matrix.
template <typename Real>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<Real> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const Real> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<Real>& data() noexcept { return data_; }
  const std::vector<Real>& data() const noexcept { return data_; }

  friend bool operator==(const BasicMatrix&, const BasicMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

using Matrix = BasicMatrix<float>;

}  // namespace seqrec
