#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "trajgen/errors.hpp"

namespace trajgen {

// A d-dimensional Gaussian control point. Construction validates symmetry
// (max |S - S^T| <= 1e-12) and positive semi-definiteness (eigenvalues
// >= -1e-10 relative to scale).
struct GaussianControlPoint {
  GaussianControlPoint(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in);

  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

// One Bezier segment: L+1 control points, L >= 1, all of equal dimension.
class CurveSegment {
 public:
  explicit CurveSegment(std::vector<GaussianControlPoint> control_points);

  const std::vector<GaussianControlPoint>& control_points() const {
    return points_;
  }
  int degree() const { return static_cast<int>(points_.size()) - 1; }
  int dim() const { return points_.front().dim(); }

 private:
  std::vector<GaussianControlPoint> points_;
};

enum class ContinuityClass { C0, C1, C2 };

std::string to_string(ContinuityClass c);

// The Gaussian at a fixed curve parameter.
struct GaussianCurvePoint {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double t = 0.0;
};

struct JointViolation {
  int joint = 0;  // 0-based joint index
  ContinuityClass declared = ContinuityClass::C0;
  double residual = 0.0;
  std::string what;
};

// Bernstein basis value b_{l,L}(t) = C(L,l) (1-t)^(L-l) t^l.
double bernstein(int l, int degree, double t);

// 1-based segment index for parameter t of an n_seg-segment composite curve:
// max{1, ceil(t * n_seg)}.
int segment_index(double t, int n_seg);

// Segment-local parameter: (t - (segment_index(t)-1)/n_seg) * n_seg, in [0,1].
double local_param(double t, int n_seg);

class CompositeCurveBuilder;

// An immutable chain of Bezier segments traversed by one parameter t in
// [0,1]. Adjacent segments share their connecting control point; the shared
// point is injected by the builder, never supplied twice, so C0 continuity
// holds by construction. Joint geometry for declared C1/C2 classes is
// checked by validate_continuity(), not enforced here.
class CompositeCurve {
 public:
  const std::vector<CurveSegment>& segments() const { return segments_; }
  const std::vector<ContinuityClass>& joint_continuity() const {
    return joints_;
  }
  int segment_count() const { return static_cast<int>(segments_.size()); }
  int dim() const { return segments_.front().dim(); }

 private:
  friend class CompositeCurveBuilder;
  CompositeCurve(std::vector<CurveSegment> segments,
                 std::vector<ContinuityClass> joints)
      : segments_(std::move(segments)), joints_(std::move(joints)) {}

  std::vector<CurveSegment> segments_;
  std::vector<ContinuityClass> joints_;
};

// Builder assembling a composite curve segment by segment.
//
// For a C0 joint the caller provides the next segment's points 1..L with
// full (mean, covariance) data. For C1/C2 joints the first interior point
// P_1 of the new segment is determined by the substitution
//   P_1 = C + s (C - D),  s = |mu_1 - mu_C| / |mu_C - mu_D|,
// where C is the connecting point and D the one before it; the caller
// provides only its mean (fixing s) and the covariance is derived as
// (1+s)^2 Sigma_C + s^2 Sigma_D.
class CompositeCurveBuilder {
 public:
  explicit CompositeCurveBuilder(CurveSegment first);

  // Appends a segment across a C0 joint. `tail` holds points 1..L.
  CompositeCurveBuilder& append_segment(std::vector<GaussianControlPoint> tail);

  // Appends a segment across a C1 or C2 joint. `first_interior_mean` is the
  // mean of the constrained point P_1; `rest` holds points 2..L.
  CompositeCurveBuilder& append_segment(
      ContinuityClass joint, const Eigen::VectorXd& first_interior_mean,
      std::vector<GaussianControlPoint> rest);

  CompositeCurve build() &&;

 private:
  std::vector<CurveSegment> segments_;
  std::vector<ContinuityClass> joints_;
};

// Gaussian curve point at t: mean = sum_l b_l(u) mu_l,
// cov = sum_l b_l(u)^2 Sigma_l over the containing segment, u = local_param.
GaussianCurvePoint eval_point(const CompositeCurve& curve, double t);

// Checks every joint against its declared class. Residuals are relative to
// the larger of the two joint leg lengths. Empty result means compliant.
std::vector<JointViolation> validate_continuity(const CompositeCurve& curve);

// Length ratio s = |mu^{j+1}_1 - mu^{j+1}_0| / |mu^j_L - mu^j_{L-1}| for a
// 0-based joint index declared C1 or C2. Equals 1 for compliant C2 joints.
double s_factor(const CompositeCurve& curve, int joint);

}  // namespace trajgen
