#pragma once

#include <cstddef>
#include <optional>

// Data-parallel inner loops of the metric pipeline. Scalar reference
// implementations always exist; an AVX2 variant is selected at runtime when
// the CPU supports it. Both variants are equivalence-tested against each
// other (tests/test_simd.cpp). Results may differ between backends by a few
// ulps because of reassociated sums; within one process the backend is fixed,
// so outputs stay reproducible.

namespace trajgen::simd {

enum class Backend { kScalar, kAvx2 };

// Backend currently used by the dispatching entry points.
Backend active_backend();

// Overrides backend selection (tests); nullopt restores auto-detection.
// Requesting kAvx2 on a CPU without AVX2 keeps the scalar backend.
void force_backend(std::optional<Backend> backend);

// out[i] = dot(points[i*dim .. i*dim+dim), dir), i in [0, count).
void project(const double* points, std::size_t count, std::size_t dim,
             const double* dir, double* out);

// mean_i |a[i] - b[i]|^p. Fast paths for p == 1 and p == 2.
double abs_diff_pow_mean(const double* a, const double* b, std::size_t n,
                         double p);

// Reference implementations, exposed for equivalence tests.
void project_scalar(const double* points, std::size_t count, std::size_t dim,
                    const double* dir, double* out);
double abs_diff_pow_mean_scalar(const double* a, const double* b,
                                std::size_t n, double p);

#if defined(TRAJGEN_HAVE_AVX2_TU)
void project_avx2(const double* points, std::size_t count, std::size_t dim,
                  const double* dir, double* out);
double abs_diff_pow_mean_avx2(const double* a, const double* b, std::size_t n,
                              double p);
#endif

}  // namespace trajgen::simd
