// AVX2 variants of the metric inner loops. This file is the only translation
// unit compiled with -mavx2; callers go through the dispatch table.

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "trajgen/simd/kernels.hpp"

namespace trajgen::simd {

namespace {

inline double hsum256(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

void project_avx2(const double* points, std::size_t count, std::size_t dim,
                  const double* dir, double* out) {
  if (dim == 2) {
    // Interleaved xyxy layout: two registers hold four points; pairwise
    // hadd then lane fixup yields four dot products per iteration.
    const __m256d d = _mm256_setr_pd(dir[0], dir[1], dir[0], dir[1]);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
      const __m256d p01 = _mm256_loadu_pd(points + 2 * i);
      const __m256d p23 = _mm256_loadu_pd(points + 2 * i + 4);
      const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(p01, d),
                                       _mm256_mul_pd(p23, d));
      // h = (r0, r2, r1, r3) across 128-bit lanes; restore order.
      _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
    }
    for (; i < count; ++i) {
      out[i] = points[2 * i] * dir[0] + points[2 * i + 1] * dir[1];
    }
    return;
  }
  project_scalar(points, count, dim, dir, out);
}

double abs_diff_pow_mean_avx2(const double* a, const double* b, std::size_t n,
                              double p) {
  std::size_t i = 0;
  double acc = 0.0;
  if (p == 2.0) {
    __m256d vacc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                      _mm256_loadu_pd(b + i));
      vacc = _mm256_add_pd(vacc, _mm256_mul_pd(d, d));
    }
    acc = hsum256(vacc);
    for (; i < n; ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
  } else if (p == 1.0) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d vacc = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                      _mm256_loadu_pd(b + i));
      vacc = _mm256_add_pd(vacc, _mm256_andnot_pd(sign_mask, d));
    }
    acc = hsum256(vacc);
    for (; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  } else {
    return abs_diff_pow_mean_scalar(a, b, n, p);
  }
  return acc / static_cast<double>(n);
}

}  // namespace trajgen::simd
