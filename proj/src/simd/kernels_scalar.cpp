#include "gridplan/simd/kernels.hpp"

namespace gridplan::simd {
namespace {

// 4-way unrolled so the compiler can auto-vectorize the baseline too; the
// accumulation order is fixed and independent of the build flags.
double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  double s = (s0 + s1) + (s2 + s3);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

const KernelTable kScalar{dot_scalar, axpy_scalar, scale_scalar, "scalar"};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace gridplan::simd
