#include <cmath>
#include <cstddef>

#include "trajgen/simd/kernels.hpp"

namespace trajgen::simd {

void project_scalar(const double* points, std::size_t count, std::size_t dim,
                    const double* dir, double* out) {
  if (dim == 2) {
    const double dx = dir[0], dy = dir[1];
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = points[2 * i] * dx + points[2 * i + 1] * dy;
    }
    return;
  }
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    const double* p = points + i * dim;
    for (std::size_t j = 0; j < dim; ++j) acc += p[j] * dir[j];
    out[i] = acc;
  }
}

double abs_diff_pow_mean_scalar(const double* a, const double* b,
                                std::size_t n, double p) {
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
  } else if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      acc += std::pow(std::fabs(a[i] - b[i]), p);
    }
  }
  return acc / static_cast<double>(n);
}

}  // namespace trajgen::simd
