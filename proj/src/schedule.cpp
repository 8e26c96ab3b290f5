#include "trajgen/schedule.hpp"

#include <cmath>
#include <utility>

namespace trajgen {

namespace {

Eigen::VectorXd mean_at(const CompositeCurve& curve, double t) {
  const int n = curve.segment_count();
  const CurveSegment& seg = curve.segments()[segment_index(t, n) - 1];
  const double u = local_param(t, n);
  const int degree = seg.degree();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(seg.dim());
  for (int l = 0; l <= degree; ++l) {
    m += bernstein(l, degree, u) * seg.control_points()[l].mean;
  }
  return m;
}

double adaptive_length(const CompositeCurve& curve, double a,
                       const Eigen::VectorXd& pa, double b,
                       const Eigen::VectorXd& pb, double rel_tol, int depth) {
  const double mid = 0.5 * (a + b);
  const Eigen::VectorXd pm = mean_at(curve, mid);
  const double coarse = (pb - pa).norm();
  const double fine = (pm - pa).norm() + (pb - pm).norm();
  if (depth >= 40 || fine - coarse <= rel_tol * fine) return fine;
  return adaptive_length(curve, a, pa, mid, pm, rel_tol, depth + 1) +
         adaptive_length(curve, mid, pm, b, pb, rel_tol, depth + 1);
}

}  // namespace

std::string to_string(VelocityProfile p) {
  switch (p) {
    case VelocityProfile::UniformParam: return "uniform_param";
    case VelocityProfile::ConstantSpeed: return "constant_speed";
    case VelocityProfile::Custom: return "custom";
  }
  return "?";
}

ParamSchedule::ParamSchedule(std::vector<double> params,
                             VelocityProfile profile)
    : params_(std::move(params)), profile_(profile) {
  if (params_.size() < 2) {
    throw DomainError("schedule needs at least 2 parameters");
  }
  if (params_.front() != 0.0 || params_.back() != 1.0) {
    throw DomainError("schedule must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < params_.size(); ++i) {
    if (!(params_[i] > params_[i - 1])) {
      throw DomainError("schedule parameters must be strictly increasing");
    }
  }
}

double arc_length(const CompositeCurve& curve, double t0, double t1,
                  double rel_tol) {
  if (!(t0 >= 0.0 && t1 <= 1.0 && t0 <= t1)) {
    throw DomainError("arc_length: invalid interval [" + std::to_string(t0) +
                      ", " + std::to_string(t1) + "]");
  }
  if (t0 == t1) return 0.0;
  // Split at segment boundaries so each piece is polynomial-smooth.
  std::vector<double> cuts{t0};
  const int n = curve.segment_count();
  for (int j = 1; j < n; ++j) {
    const double tb = static_cast<double>(j) / static_cast<double>(n);
    if (tb > t0 && tb < t1) cuts.push_back(tb);
  }
  cuts.push_back(t1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += adaptive_length(curve, cuts[i], mean_at(curve, cuts[i]),
                             cuts[i + 1], mean_at(curve, cuts[i + 1]), rel_tol,
                             0);
  }
  return total;
}

ParamSchedule uniform_schedule(int n) {
  if (n < 2) throw DomainError("uniform_schedule: n must be >= 2");
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) {
    ts[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  }
  ts.front() = 0.0;
  ts.back() = 1.0;
  return ParamSchedule(std::move(ts), VelocityProfile::UniformParam);
}

ParamSchedule constant_speed_schedule(const CompositeCurve& curve, int n) {
  if (n < 2) throw DomainError("constant_speed_schedule: n must be >= 2");
  if (n == 2) {
    return ParamSchedule({0.0, 1.0}, VelocityProfile::ConstantSpeed);
  }
  const double total = arc_length(curve, 0.0, 1.0);
  if (total <= 0.0) {
    throw DegenerateError(
        "constant_speed_schedule: mean curve has zero arc length");
  }
  const int chords = n - 1;
  const Eigen::VectorXd end_point = mean_at(curve, 1.0);

  // Walks n-1 chords of length c from t = 0; returns the parameters reached
  // and the end position (> 1 encodes running off the end of the curve).
  const auto walk = [&](double c, std::vector<double>* sched) {
    double t = 0.0;
    Eigen::VectorXd p = mean_at(curve, 0.0);
    if (sched) sched->assign(1, 0.0);
    for (int i = 0; i < chords; ++i) {
      if ((end_point - p).norm() < c) {
        return 1.0 + static_cast<double>(chords - i);
      }
      double lo = t, hi = 1.0;
      for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((mean_at(curve, mid) - p).norm() < c) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      t = 0.5 * (lo + hi);
      p = mean_at(curve, t);
      if (sched) sched->push_back(t);
    }
    return t;
  };

  // Arc length bounds the feasible chord; bisect the chord length until the
  // walk ends exactly at t = 1.
  double lo = 0.0;
  double hi = total / static_cast<double>(chords) * (1.0 + 1e-9);
  for (int it = 0; it < 100; ++it) {
    const double c = 0.5 * (lo + hi);
    const double end = walk(c, nullptr);
    if (end > 1.0) {
      hi = c;
    } else {
      lo = c;
      if (1.0 - end < 1e-14) break;
    }
  }
  std::vector<double> sched;
  walk(lo, &sched);
  if (sched.size() != static_cast<std::size_t>(n)) {
    throw NumericalError("constant_speed_schedule: chord walk failed");
  }
  sched.back() = 1.0;
  return ParamSchedule(std::move(sched), VelocityProfile::ConstantSpeed);
}

ParamSchedule custom_schedule(std::vector<double> params) {
  return ParamSchedule(std::move(params), VelocityProfile::Custom);
}

}  // namespace trajgen
