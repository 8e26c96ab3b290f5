#pragma once

#include <vector>

#include "trajgen/curve.hpp"

namespace trajgen {

enum class VelocityProfile { UniformParam, ConstantSpeed, Custom };

std::string to_string(VelocityProfile p);

// A finite, strictly increasing set of curve parameters spanning [0, 1].
class ParamSchedule {
 public:
  ParamSchedule(std::vector<double> params, VelocityProfile profile);

  const std::vector<double>& params() const { return params_; }
  VelocityProfile profile() const { return profile_; }
  int size() const { return static_cast<int>(params_.size()); }

 private:
  std::vector<double> params_;
  VelocityProfile profile_;
};

// Length of the mean curve between t0 and t1 (piecewise-adaptive polyline
// quadrature, relative tolerance rel_tol). Additive over adjacent intervals.
double arc_length(const CompositeCurve& curve, double t0, double t1,
                  double rel_tol = 1e-8);

// n equally spaced parameters including both endpoints.
ParamSchedule uniform_schedule(int n);

// n parameters with equal chords |mu(t_{i+1}) - mu(t_i)| on the mean curve,
// endpoints pinned to 0 and 1. Fails with DegenerateError on zero-length
// mean curves.
ParamSchedule constant_speed_schedule(const CompositeCurve& curve, int n);

// Wraps a user-supplied parameter list (validated).
ParamSchedule custom_schedule(std::vector<double> params);

}  // namespace trajgen
