#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gridplan/simd/kernels.hpp"

using namespace gridplan;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar and avx2 kernels agree") {
  const simd::KernelTable& sc = simd::scalar_table();
  const simd::KernelTable* vx = simd::avx2_table();
  if (vx == nullptr) {
    MESSAGE("AVX2 unavailable on this host; scalar-only run");
    return;
  }

  std::mt19937 rng(7);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 31u, 64u, 257u, 1000u}) {
    auto a = random_vec(rng, n);
    auto b = random_vec(rng, n);

    const double d_sc = sc.dot(a.data(), b.data(), n);
    const double d_vx = vx->dot(a.data(), b.data(), n);
    CHECK(std::fabs(d_sc - d_vx) <= 1e-11 * (1.0 + std::fabs(d_sc)));

    auto y1 = b, y2 = b;
    sc.axpy(1.7, a.data(), y1.data(), n);
    vx->axpy(1.7, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::fabs(y1[i] - y2[i]) <= 1e-12 * (1.0 + std::fabs(y1[i])));

    auto z1 = a, z2 = a;
    sc.scale(-0.37, z1.data(), n);
    vx->scale(-0.37, z2.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(z1[i] == doctest::Approx(z2[i]).epsilon(1e-14));
  }
}

TEST_CASE("runtime selection honors overrides") {
  REQUIRE(simd::select("scalar"));
  CHECK(std::string(simd::active().isa) == "scalar");
  if (simd::avx2_table() != nullptr) {
    REQUIRE(simd::select("avx2"));
    CHECK(std::string(simd::active().isa) == "avx2");
  }
  CHECK_FALSE(simd::select("sse42-nonexistent"));
}
