#pragma once

#include <Eigen/Dense>
#include <vector>

#include "trajgen/curve.hpp"
#include "trajgen/gaussian.hpp"
#include "trajgen/schedule.hpp"

namespace trajgen {

// Prior over full discretized trajectories: one Gaussian per composite
// curve (stacked means, block Gram covariance) plus mixture weights.
// Covariances are stored exactly as assembled (no jitter baked in); the
// factorization helpers apply the jitter ladder at the point of use.
struct TrajectoryPrior {
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;        // size d * N_k
  std::vector<Eigen::MatrixXd> covariances;  // (d N_k) x (d N_k)
  std::vector<ParamSchedule> schedules;
  std::vector<CompositeCurve> curves;
  int dim = 0;

  int component_count() const { return static_cast<int>(weights.size()); }
  int length(int k) const { return schedules[k].size(); }
  int min_length() const;
  MvGaussian component(int k) const {
    return MvGaussian(means[k], covariances[k]);
  }
  GaussianMixture as_mixture() const;
};

// Stacked mean vector (m(t_1)^T ... m(t_N)^T)^T.
Eigen::VectorXd mean_vector(const CompositeCurve& curve,
                            const ParamSchedule& schedule);

// Cross-covariance of curve points at segment-local parameters u1, u2 on one
// segment with independent control points:
//   K(u1, u2) = sum_l b_l(u1) b_l(u2) Sigma_l,
// the covariance form of the second-moment expansion (mean outer products
// cancel against mu_X mu_Y^T).
Eigen::MatrixXd kernel_same_segment(const CurveSegment& segment, double u1,
                                    double u2);

// Cross-covariance of curve points on segments joint and joint+1 (0-based
// joint index), u1 local on the left segment, u2 on the right one. The
// connecting point C is shared; for C1/C2 joints the right segment's first
// interior point is P_1 = C + s (C - D) with D the point before C, which
// contributes (1+s) Sigma_C and -s Sigma_D cross terms. All remaining point
// pairs are independent and cancel.
Eigen::MatrixXd kernel_adjacent_segments(const CompositeCurve& curve,
                                         int joint, double u1, double u2);

// Cross-covariance across segments separated by at least one intermediate
// segment: no shared or substituted control points remain, so the
// second-moment sum collapses to mean outer products and the covariance is
// exactly zero.
Eigen::MatrixXd kernel_disconnected(const CurveSegment& seg1,
                                    const CurveSegment& seg2, double u1,
                                    double u2);

// Block Gram matrix over the schedule: block (i1, i2) dispatches on the
// segment relation of (t_i1, t_i2); upper triangle computed, mirrored.
Eigen::MatrixXd gram_matrix(const CompositeCurve& curve,
                            const ParamSchedule& schedule);

TrajectoryPrior build_prior(std::vector<CompositeCurve> curves,
                            std::vector<double> weights,
                            std::vector<ParamSchedule> schedules);

}  // namespace trajgen
