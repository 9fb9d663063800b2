#include "gridplan/linalg/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gridplan/simd/kernels.hpp"

namespace gridplan::linalg {

void DenseMatrix::set_identity() {
  std::fill(data_.begin(), data_.end(), 0.0);
  const std::size_t n = rows_ < cols_ ? rows_ : cols_;
  for (std::size_t i = 0; i < n; ++i) at(i, i) = 1.0;
}

LuFactor::LuFactor(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw std::invalid_argument("LuFactor: matrix not square");
  for (std::size_t i = 0; i < n; ++i) perm_[i] = static_cast<int>(i);

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::fabs(lu_.at(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::fabs(lu_.at(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < 1e-12)
      throw std::runtime_error("LuFactor: singular matrix (pivot " + std::to_string(k) + ")");
    if (piv != k) {
      std::swap(perm_[k], perm_[piv]);
      double* rk = lu_.row(k);
      double* rp = lu_.row(piv);
      for (std::size_t j = 0; j < n; ++j) std::swap(rk[j], rp[j]);
    }
    const double inv_piv = 1.0 / lu_.at(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double m = lu_.at(i, k) * inv_piv;
      lu_.at(i, k) = m;
      if (m != 0.0)
        simd::axpy(-m, lu_.row(k) + k + 1, lu_.row(i) + k + 1, n - k - 1);
    }
  }
}

void LuFactor::solve(std::vector<double>& b) const {
  const std::size_t n = dim();
  if (b.size() != n) throw std::invalid_argument("LuFactor::solve: size mismatch");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = b[static_cast<std::size_t>(perm_[i])];
  // Forward substitution (unit lower factor).
  for (std::size_t i = 1; i < n; ++i)
    y[i] -= simd::dot(lu_.row(i), y.data(), i);
  // Back substitution.
  for (std::size_t ii = n; ii-- > 0;) {
    const double* r = lu_.row(ii);
    double s = y[ii];
    s -= simd::dot(r + ii + 1, y.data() + ii + 1, n - ii - 1);
    y[ii] = s / r[ii];
  }
  b = std::move(y);
}

void LuFactor::invert_into(DenseMatrix& out) const {
  const std::size_t n = dim();
  out = DenseMatrix(n, n);
  std::vector<double> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    solve(e);
    for (std::size_t i = 0; i < n; ++i) out.at(i, j) = e[i];
  }
}

}  // namespace gridplan::linalg
