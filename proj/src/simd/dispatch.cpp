#include <atomic>
#include <optional>

#include "trajgen/simd/kernels.hpp"

namespace trajgen::simd {

namespace {

bool cpu_has_avx2() {
#if defined(TRAJGEN_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<int> g_forced{-1};  // -1 auto, else Backend value

Backend select() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced == static_cast<int>(Backend::kScalar)) return Backend::kScalar;
  if (forced == static_cast<int>(Backend::kAvx2)) {
    return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
  }
  return cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
}

}  // namespace

Backend active_backend() { return select(); }

void force_backend(std::optional<Backend> backend) {
  g_forced.store(backend ? static_cast<int>(*backend) : -1,
                 std::memory_order_relaxed);
}

void project(const double* points, std::size_t count, std::size_t dim,
             const double* dir, double* out) {
#if defined(TRAJGEN_HAVE_AVX2_TU)
  if (select() == Backend::kAvx2) {
    project_avx2(points, count, dim, dir, out);
    return;
  }
#endif
  project_scalar(points, count, dim, dir, out);
}

double abs_diff_pow_mean(const double* a, const double* b, std::size_t n,
                         double p) {
#if defined(TRAJGEN_HAVE_AVX2_TU)
  if (select() == Backend::kAvx2) return abs_diff_pow_mean_avx2(a, b, n, p);
#endif
  return abs_diff_pow_mean_scalar(a, b, n, p);
}

}  // namespace trajgen::simd
