#include "trajgen/prior.hpp"

#include <cmath>
#include <utility>

namespace trajgen {

int TrajectoryPrior::min_length() const {
  int n = schedules.front().size();
  for (const auto& s : schedules) n = std::min(n, s.size());
  return n;
}

GaussianMixture TrajectoryPrior::as_mixture() const {
  std::vector<MvGaussian> comps;
  comps.reserve(weights.size());
  for (int k = 0; k < component_count(); ++k) comps.push_back(component(k));
  return GaussianMixture(weights, std::move(comps));
}

Eigen::VectorXd mean_vector(const CompositeCurve& curve,
                            const ParamSchedule& schedule) {
  const int d = curve.dim();
  const int n = schedule.size();
  Eigen::VectorXd mu(d * n);
  for (int i = 0; i < n; ++i) {
    mu.segment(i * d, d) = eval_point(curve, schedule.params()[i]).mean;
  }
  return mu;
}

Eigen::MatrixXd kernel_same_segment(const CurveSegment& segment, double u1,
                                    double u2) {
  const int degree = segment.degree();
  const int d = segment.dim();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(d, d);
  for (int l = 0; l <= degree; ++l) {
    k += bernstein(l, degree, u1) * bernstein(l, degree, u2) *
         segment.control_points()[l].cov;
  }
  return k;
}

Eigen::MatrixXd kernel_adjacent_segments(const CompositeCurve& curve,
                                         int joint, double u1, double u2) {
  if (joint < 0 || joint >= curve.segment_count() - 1) {
    throw DomainError("kernel_adjacent_segments: joint out of range");
  }
  const CurveSegment& left = curve.segments()[joint];
  const CurveSegment& right = curve.segments()[joint + 1];
  const int l1 = left.degree();
  const int l2 = right.degree();
  const auto& lp = left.control_points();
  const Eigen::MatrixXd& sig_c = lp.back().cov;

  const double a_last = bernstein(l1, l1, u1);
  const double c0 = bernstein(0, l2, u2);
  Eigen::MatrixXd k = a_last * c0 * sig_c;
  if (curve.joint_continuity()[joint] != ContinuityClass::C0) {
    const double s = s_factor(curve, joint);
    const Eigen::MatrixXd& sig_d = lp[lp.size() - 2].cov;
    const double a_prev = bernstein(l1 - 1, l1, u1);
    const double c1 = bernstein(1, l2, u2);
    k += a_last * c1 * (1.0 + s) * sig_c - a_prev * c1 * s * sig_d;
  }
  return k;
}

Eigen::MatrixXd kernel_disconnected(const CurveSegment& seg1,
                                    const CurveSegment& seg2, double u1,
                                    double u2) {
  if (seg1.dim() != seg2.dim()) {
    throw DomainError("kernel_disconnected: segment dimensions differ");
  }
  if (!(u1 >= 0.0 && u1 <= 1.0 && u2 >= 0.0 && u2 <= 1.0)) {
    throw DomainError("kernel_disconnected: local parameter outside [0, 1]");
  }
  return Eigen::MatrixXd::Zero(seg1.dim(), seg1.dim());
}

Eigen::MatrixXd gram_matrix(const CompositeCurve& curve,
                            const ParamSchedule& schedule) {
  const int d = curve.dim();
  const int n = schedule.size();
  const int n_seg = curve.segment_count();
  Eigen::MatrixXd g(d * n, d * n);
  for (int i1 = 0; i1 < n; ++i1) {
    const double t1 = schedule.params()[i1];
    const int j1 = segment_index(t1, n_seg) - 1;
    const double u1 = local_param(t1, n_seg);
    for (int i2 = i1; i2 < n; ++i2) {
      const double t2 = schedule.params()[i2];
      const int j2 = segment_index(t2, n_seg) - 1;
      const double u2 = local_param(t2, n_seg);
      Eigen::MatrixXd k;
      if (j1 == j2) {
        k = kernel_same_segment(curve.segments()[j1], u1, u2);
      } else if (j2 == j1 + 1) {
        k = kernel_adjacent_segments(curve, j1, u1, u2);
      } else {
        k = kernel_disconnected(curve.segments()[j1], curve.segments()[j2],
                                u1, u2);
      }
      g.block(i1 * d, i2 * d, d, d) = k;
      if (i2 != i1) g.block(i2 * d, i1 * d, d, d) = k.transpose();
    }
  }
  return g;
}

TrajectoryPrior build_prior(std::vector<CompositeCurve> curves,
                            std::vector<double> weights,
                            std::vector<ParamSchedule> schedules) {
  const std::size_t k = curves.size();
  if (k == 0 || weights.size() != k || schedules.size() != k) {
    throw DomainError("build_prior: curves/weights/schedules length mismatch");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DomainError("build_prior: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw SpecError("weights", "mixture weights sum to " +
                                   std::to_string(sum) + ", expected 1");
  }
  const int d = curves.front().dim();
  for (const auto& c : curves) {
    if (c.dim() != d) throw DomainError("build_prior: curve dimensions differ");
  }

  TrajectoryPrior prior;
  prior.dim = d;
  prior.weights = std::move(weights);
  // Exact normalization so downstream mixture invariants hold to 1e-12.
  for (double& w : prior.weights) w /= sum;
  for (std::size_t i = 0; i < k; ++i) {
    prior.means.push_back(mean_vector(curves[i], schedules[i]));
    Eigen::MatrixXd g = gram_matrix(curves[i], schedules[i]);
    // Validates the PSD-after-jitter contract now; the matrix itself stays
    // un-jittered.
    (void)llt_with_jitter(g);
    prior.covariances.push_back(std::move(g));
  }
  prior.schedules = std::move(schedules);
  prior.curves = std::move(curves);
  return prior;
}

}  // namespace trajgen
