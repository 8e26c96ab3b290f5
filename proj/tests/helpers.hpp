#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

#include "trajgen/curve.hpp"

namespace trajgen::testing {

inline Eigen::Vector2d v2(double x, double y) { return {x, y}; }

inline Eigen::Matrix2d iso(double var) {
  return var * Eigen::Matrix2d::Identity();
}

inline Eigen::Matrix2d spd(double a, double b, double c) {
  Eigen::Matrix2d m;
  m << a, c, c, b;
  return m;
}

inline GaussianControlPoint cp(double x, double y, const Eigen::Matrix2d& cov) {
  return GaussianControlPoint(v2(x, y), cov);
}

// Single linear segment (0,0) -> (2,0) with identity covariances.
inline CompositeCurve line_curve() {
  return CompositeCurveBuilder(
             CurveSegment({cp(0, 0, iso(1.0)), cp(2, 0, iso(1.0))}))
      .build();
}

// Cubic approximating a unit quarter circle from (1,0) to (0,1).
inline CompositeCurve quarter_circle_curve() {
  const double k = 0.5522847498307936;
  return CompositeCurveBuilder(CurveSegment({cp(1, 0, iso(0.01)),
                                             cp(1, k, iso(0.01)),
                                             cp(k, 1, iso(0.01)),
                                             cp(0, 1, iso(0.01))}))
      .build();
}

// Three cubic segments with non-trivial anisotropic covariances; joints
// declared with the requested class (constrained points collinear, C1 with
// leg ratios 1.4 and 0.7, C2 equidistant).
inline CompositeCurve three_segment_curve(ContinuityClass cls) {
  CompositeCurveBuilder b(CurveSegment({cp(0.0, 0.0, spd(0.040, 0.030, 0.010)),
                                        cp(0.8, 0.45, spd(0.050, 0.035, -0.008)),
                                        cp(1.7, 0.75, spd(0.045, 0.050, 0.012)),
                                        cp(3.0, 0.90, spd(0.060, 0.040, 0.015))}));
  // Joint 1: C = (3.0, 0.9), D = (1.7, 0.75), leg (1.3, 0.15).
  std::vector<GaussianControlPoint> tail1{
      cp(5.6, 0.70, spd(0.055, 0.045, -0.010)),
      cp(6.4, 0.10, spd(0.065, 0.050, 0.020))};
  if (cls == ContinuityClass::C0) {
    std::vector<GaussianControlPoint> full{cp(4.3, 1.30, spd(0.050, 0.040, 0.010))};
    full.insert(full.end(), tail1.begin(), tail1.end());
    b.append_segment(std::move(full));
  } else if (cls == ContinuityClass::C1) {
    b.append_segment(cls, v2(3.0 + 1.4 * 1.3, 0.9 + 1.4 * 0.15),
                     std::move(tail1));
  } else {
    b.append_segment(cls, v2(4.3, 1.05), std::move(tail1));
  }
  // Joint 2: C = (6.4, 0.1), D = (5.6, 0.7), leg (0.8, -0.6).
  std::vector<GaussianControlPoint> tail2{
      cp(8.2, -0.70, spd(0.070, 0.050, -0.015)),
      cp(9.0, -0.40, spd(0.075, 0.060, 0.020))};
  if (cls == ContinuityClass::C0) {
    std::vector<GaussianControlPoint> full{cp(7.2, -0.20, spd(0.060, 0.050, 0.005))};
    full.insert(full.end(), tail2.begin(), tail2.end());
    b.append_segment(std::move(full));
  } else if (cls == ContinuityClass::C1) {
    b.append_segment(cls, v2(6.4 + 0.7 * 0.8, 0.1 - 0.7 * 0.6),
                     std::move(tail2));
  } else {
    b.append_segment(cls, v2(7.2, -0.50), std::move(tail2));
  }
  return std::move(b).build();
}

// Two quadratic segments joined with the requested class (used by the
// kernel unit tests).
inline CompositeCurve two_segment_quadratic(ContinuityClass cls, double s) {
  CompositeCurveBuilder b(CurveSegment({cp(0.0, 0.0, spd(0.09, 0.06, 0.02)),
                                        cp(1.0, 0.8, spd(0.04, 0.05, -0.01)),
                                        cp(2.2, 1.0, spd(0.08, 0.07, 0.015))}));
  // C = (2.2, 1.0), D = (1.0, 0.8), leg (1.2, 0.2).
  std::vector<GaussianControlPoint> tail{cp(4.6, 0.6, spd(0.07, 0.05, 0.01))};
  if (cls == ContinuityClass::C0) {
    std::vector<GaussianControlPoint> full{cp(3.0, 1.6, spd(0.05, 0.06, 0.0))};
    full.insert(full.end(), tail.begin(), tail.end());
    b.append_segment(std::move(full));
  } else {
    b.append_segment(cls, v2(2.2 + s * 1.2, 1.0 + s * 0.2), std::move(tail));
  }
  return std::move(b).build();
}

}  // namespace trajgen::testing
