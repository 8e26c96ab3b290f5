#include "trajgen/simd/kernels.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "trajgen/rng.hpp"

using namespace trajgen;
using trajgen::simd::Backend;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  Pcg64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = 3.0 * rng.next_normal();
  return v;
}

struct BackendGuard {
  ~BackendGuard() { simd::force_backend(std::nullopt); }
};

}  // namespace

TEST_CASE("backend forcing") {
  BackendGuard guard;
  simd::force_backend(Backend::kScalar);
  CHECK(simd::active_backend() == Backend::kScalar);
  simd::force_backend(std::nullopt);
}

TEST_CASE("projection kernels agree across backends") {
  BackendGuard guard;
  for (std::size_t dim : {std::size_t{2}, std::size_t{5}}) {
    for (std::size_t count : {std::size_t{1}, std::size_t{3}, std::size_t{4},
                              std::size_t{7}, std::size_t{64},
                              std::size_t{1001}}) {
      const auto pts = random_vec(count * dim, 1000 + count * dim);
      const auto dir = random_vec(dim, 77 + dim);
      std::vector<double> ref(count), got(count);
      simd::project_scalar(pts.data(), count, dim, dir.data(), ref.data());
      simd::force_backend(Backend::kAvx2);  // falls back if unsupported
      simd::project(pts.data(), count, dim, dir.data(), got.data());
      for (std::size_t i = 0; i < count; ++i) {
        CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-13));
      }
      simd::force_backend(std::nullopt);
    }
  }
}

TEST_CASE("power-sum kernels agree across backends") {
  BackendGuard guard;
  for (double p : {1.0, 2.0, 2.7}) {
    for (std::size_t n :
         {std::size_t{1}, std::size_t{5}, std::size_t{2048},
          std::size_t{4093}}) {
      const auto a = random_vec(n, 5 + n);
      const auto b = random_vec(n, 9 + n);
      const double ref = simd::abs_diff_pow_mean_scalar(a.data(), b.data(), n, p);
      simd::force_backend(Backend::kAvx2);
      const double got = simd::abs_diff_pow_mean(a.data(), b.data(), n, p);
      simd::force_backend(std::nullopt);
      CHECK(got == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("dispatch entry point matches the scalar reference") {
  // Whatever backend auto-detection picked, results must match scalar.
  const std::size_t n = 513;
  const auto a = random_vec(2 * n, 21);
  const auto dir = random_vec(2, 22);
  std::vector<double> ref(n), got(n);
  simd::project_scalar(a.data(), n, 2, dir.data(), ref.data());
  simd::project(a.data(), n, 2, dir.data(), got.data());
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-13));
  }
}
