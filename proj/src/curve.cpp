#include "trajgen/curve.hpp"

#include <cmath>
#include <utility>

namespace trajgen {

namespace {

void check_unit_interval(double t, const char* who) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(std::string(who) + ": parameter t = " +
                      std::to_string(t) + " outside [0, 1]");
  }
}

}  // namespace

GaussianControlPoint::GaussianControlPoint(Eigen::VectorXd mean_in,
                                           Eigen::MatrixXd cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (mean.size() == 0) throw DomainError("control point: empty mean");
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw DomainError("control point: covariance shape does not match mean");
  }
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw DomainError("control point: covariance asymmetric (max |S - S^T| = " +
                      std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov,
                                                    Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-10 * scale) {
    throw DomainError("control point: covariance not positive semi-definite");
  }
}

CurveSegment::CurveSegment(std::vector<GaussianControlPoint> control_points)
    : points_(std::move(control_points)) {
  if (points_.size() < 2) {
    throw DomainError("curve segment needs at least 2 control points");
  }
  const int d = points_.front().dim();
  for (const auto& p : points_) {
    if (p.dim() != d) {
      throw DomainError("curve segment: control point dimensions differ");
    }
  }
}

std::string to_string(ContinuityClass c) {
  switch (c) {
    case ContinuityClass::C0: return "c0";
    case ContinuityClass::C1: return "c1";
    case ContinuityClass::C2: return "c2";
  }
  return "?";
}

double bernstein(int l, int degree, double t) {
  if (l < 0 || l > degree) {
    throw DomainError("bernstein: index l = " + std::to_string(l) +
                      " outside [0, " + std::to_string(degree) + "]");
  }
  check_unit_interval(t, "bernstein");
  double binom = 1.0;
  for (int i = 0; i < l; ++i) {
    binom = binom * static_cast<double>(degree - i) / static_cast<double>(i + 1);
  }
  return binom * std::pow(1.0 - t, degree - l) * std::pow(t, l);
}

int segment_index(double t, int n_seg) {
  if (n_seg < 1) throw DomainError("segment_index: n_seg must be >= 1");
  check_unit_interval(t, "segment_index");
  const int j = static_cast<int>(std::ceil(t * static_cast<double>(n_seg)));
  return std::min(std::max(j, 1), n_seg);
}

double local_param(double t, int n_seg) {
  const int j = segment_index(t, n_seg);
  const double u = t * static_cast<double>(n_seg) - static_cast<double>(j - 1);
  return std::min(std::max(u, 0.0), 1.0);
}

CompositeCurveBuilder::CompositeCurveBuilder(CurveSegment first) {
  segments_.push_back(std::move(first));
}

CompositeCurveBuilder& CompositeCurveBuilder::append_segment(
    std::vector<GaussianControlPoint> tail) {
  if (tail.empty()) {
    throw DomainError("append_segment: a segment needs at least one point "
                      "beyond the connecting point");
  }
  std::vector<GaussianControlPoint> pts;
  pts.reserve(tail.size() + 1);
  pts.push_back(segments_.back().control_points().back());
  for (auto& p : tail) pts.push_back(std::move(p));
  segments_.emplace_back(std::move(pts));
  joints_.push_back(ContinuityClass::C0);
  return *this;
}

CompositeCurveBuilder& CompositeCurveBuilder::append_segment(
    ContinuityClass joint, const Eigen::VectorXd& first_interior_mean,
    std::vector<GaussianControlPoint> rest) {
  if (joint == ContinuityClass::C0) {
    throw DomainError("append_segment: C0 joints take fully specified points");
  }
  const auto& prev = segments_.back().control_points();
  const GaussianControlPoint& c = prev.back();
  const GaussianControlPoint& d = prev[prev.size() - 2];
  const double leg_in = (c.mean - d.mean).norm();
  const double leg_out = (first_interior_mean - c.mean).norm();
  if (leg_in == 0.0 || leg_out == 0.0) {
    throw DegenerateError("append_segment: zero-length joint leg at joint " +
                          std::to_string(joints_.size()));
  }
  const double s = leg_out / leg_in;
  const Eigen::MatrixXd derived_cov =
      (1.0 + s) * (1.0 + s) * c.cov + s * s * d.cov;
  std::vector<GaussianControlPoint> pts;
  pts.reserve(rest.size() + 2);
  pts.push_back(c);
  pts.emplace_back(first_interior_mean, derived_cov);
  for (auto& p : rest) pts.push_back(std::move(p));
  segments_.emplace_back(std::move(pts));
  joints_.push_back(joint);
  return *this;
}

CompositeCurve CompositeCurveBuilder::build() && {
  return CompositeCurve(std::move(segments_), std::move(joints_));
}

GaussianCurvePoint eval_point(const CompositeCurve& curve, double t) {
  check_unit_interval(t, "eval_point");
  const int n = curve.segment_count();
  const CurveSegment& seg = curve.segments()[segment_index(t, n) - 1];
  const double u = local_param(t, n);
  const int degree = seg.degree();
  const int d = seg.dim();
  GaussianCurvePoint out;
  out.t = t;
  out.mean = Eigen::VectorXd::Zero(d);
  out.cov = Eigen::MatrixXd::Zero(d, d);
  for (int l = 0; l <= degree; ++l) {
    const double b = bernstein(l, degree, u);
    const auto& p = seg.control_points()[l];
    out.mean += b * p.mean;
    out.cov += b * b * p.cov;
  }
  return out;
}

std::vector<JointViolation> validate_continuity(const CompositeCurve& curve) {
  std::vector<JointViolation> out;
  for (int j = 0; j < curve.segment_count() - 1; ++j) {
    const ContinuityClass cls = curve.joint_continuity()[j];
    if (cls == ContinuityClass::C0) continue;  // structural
    const auto& left = curve.segments()[j].control_points();
    const auto& right = curve.segments()[j + 1].control_points();
    const Eigen::VectorXd v_in = left.back().mean - left[left.size() - 2].mean;
    const Eigen::VectorXd v_out = right[1].mean - right[0].mean;
    const double scale = std::max(v_in.norm(), v_out.norm());
    if (scale == 0.0) {
      out.push_back({j, cls, 1.0, "both joint legs degenerate"});
      continue;
    }
    // Perpendicular distance of the outgoing leg from the tangent line.
    const Eigen::VectorXd perp =
        v_out - (v_out.dot(v_in) / v_in.squaredNorm()) * v_in;
    const double collinearity = perp.norm() / scale;
    if (collinearity > 1e-9) {
      out.push_back({j, cls, collinearity,
                     "means not collinear across joint"});
      continue;
    }
    if (v_out.dot(v_in) <= 0.0) {
      out.push_back({j, cls, 1.0, "tangent direction reverses at joint"});
      continue;
    }
    if (cls == ContinuityClass::C2) {
      const double eq = std::abs(v_out.norm() - v_in.norm()) / scale;
      if (eq > 1e-9) {
        out.push_back({j, cls, eq, "joint legs not equidistant"});
      }
    }
  }
  return out;
}

double s_factor(const CompositeCurve& curve, int joint) {
  if (joint < 0 || joint >= curve.segment_count() - 1) {
    throw DomainError("s_factor: joint index out of range");
  }
  const ContinuityClass cls = curve.joint_continuity()[joint];
  if (cls == ContinuityClass::C0) {
    throw DomainError("s_factor: joint " + std::to_string(joint) +
                      " is declared C0");
  }
  const auto& left = curve.segments()[joint].control_points();
  const auto& right = curve.segments()[joint + 1].control_points();
  const double leg_in = (left.back().mean - left[left.size() - 2].mean).norm();
  const double leg_out = (right[1].mean - right[0].mean).norm();
  if (leg_in == 0.0) {
    throw DegenerateError("s_factor: coincident last two control points at "
                          "joint " + std::to_string(joint));
  }
  return leg_out / leg_in;
}

}  // namespace trajgen
