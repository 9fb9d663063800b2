#pragma once

#include <cstddef>
#include <vector>

namespace gridplan::linalg {

// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void set_identity();

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// LU factorization with partial pivoting, PA = LU. Throws std::runtime_error
// on (numerical) singularity.
class LuFactor {
 public:
  explicit LuFactor(DenseMatrix a);

  std::size_t dim() const { return lu_.rows(); }
  // Solves A x = b in place.
  void solve(std::vector<double>& b) const;
  // Inverts A into `out` (n solves against unit vectors).
  void invert_into(DenseMatrix& out) const;

 private:
  DenseMatrix lu_;
  std::vector<int> perm_;
};

}  // namespace gridplan::linalg
