#pragma once

#include <cstddef>

// Dense double-precision kernels used by the hot loops of the LP engine and
// the flow-sensitivity code: dot products, axpy updates, in-place scaling and
// a fused "eliminate row" update (y -= a*x). A scalar reference version of
// every kernel always exists; an AVX2/FMA version is selected at runtime when
// the CPU supports it. The environment variable GRIDPLAN_SIMD (scalar|avx2)
// overrides the automatic choice.
namespace gridplan::simd {

using DotFn = double (*)(const double*, const double*, std::size_t);
using AxpyFn = void (*)(double, const double*, double*, std::size_t);
using ScaleFn = void (*)(double, double*, std::size_t);

struct KernelTable {
  DotFn dot;
  AxpyFn axpy;    // y += a * x
  ScaleFn scale;  // x *= a
  const char* isa;
};

const KernelTable& scalar_table();
// Null when the CPU (or build) lacks AVX2+FMA.
const KernelTable* avx2_table();

// Active table, bound on first use.
const KernelTable& active();

// Force a specific ISA ("scalar" or "avx2"); returns false if unavailable.
// Intended for the equivalence tests.
bool select(const char* isa);

inline double dot(const double* a, const double* b, std::size_t n) {
  return active().dot(a, b, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline void scale(double a, double* x, std::size_t n) {
  active().scale(a, x, n);
}

}  // namespace gridplan::simd
