#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "trajgen/gaussian.hpp"

namespace trajgen {

// A set of d-dimensional points, optionally weighted (empty weights mean
// uniform). Points are rows.
struct WeightedSamples {
  Eigen::MatrixXd points;
  std::vector<double> weights;
};

// What a predictor emits for one future time step: either a density
// (Gaussian mixture) or a bare sample set.
using StepDistribution = std::variant<GaussianMixture, WeightedSamples>;

// Per-step predicted distributions over the prediction horizon.
struct PredictionDistribution {
  std::vector<StepDistribution> steps;
  int dim = 0;

  int horizon() const { return static_cast<int>(steps.size()); }
};

// Sliced Wasserstein configuration. All sampling inside the metric derives
// from `seed` plus a content hash of each input distribution, which makes
// the metric exactly symmetric and exactly zero on identical inputs.
struct SwConfig {
  int projections = 256;
  int samples = 8192;
  double p_order = 2.0;
  std::uint64_t seed = 0x53ed5eedULL;
};

// Mean over time steps of -log q_t(x_t). Every step of the prediction must
// carry a density (mixture form); sample-set steps raise
// UnsupportedFormError.
double nll_score(const PredictionDistribution& prediction,
                 const std::vector<Eigen::VectorXd>& ground_truth_points);

// p-Wasserstein distance between two equally sized sorted 1-d samples:
// ((1/n) sum |x_(i) - y_(i)|^p)^(1/p).
double wasserstein_1d(std::span<const double> sorted_p,
                      std::span<const double> sorted_q, double p);

// Monte-Carlo sliced Wasserstein distance between two distributions given as
// mixtures or sample sets: averages wasserstein_1d^p over random unit
// directions and takes the p-th root.
double sliced_wasserstein(const StepDistribution& dist_p,
                          const StepDistribution& dist_q,
                          const SwConfig& config);

// Marginalizes the ground-truth joint (over the full horizon) per time step
// and averages the per-step sliced Wasserstein distance to the prediction.
double per_point_swd(const PredictionDistribution& prediction,
                     const GaussianMixture& ground_truth_joint, int dim,
                     const SwConfig& config);

// Content hash used for metric seed derivation (exposed for tests).
std::uint64_t distribution_content_hash(const StepDistribution& dist);

}  // namespace trajgen
