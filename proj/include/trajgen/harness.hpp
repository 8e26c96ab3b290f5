#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "trajgen/dataset_spec.hpp"
#include "trajgen/metrics.hpp"
#include "trajgen/prior.hpp"

namespace trajgen {

struct LabeledTrajectory {
  int component = 0;
  std::vector<Eigen::VectorXd> points;
};

// Predictor contract: given n_obs observed points, produce per-step
// distributions over the next n_pred points. Implementations declare whether
// they may be invoked concurrently; the harness serializes calls otherwise.
class PredictorInterface {
 public:
  virtual ~PredictorInterface() = default;
  // Optional training pass over sampled trajectories; the reference
  // predictors ignore it.
  virtual void fit(const std::vector<LabeledTrajectory>& train) {
    (void)train;
  }
  virtual PredictionDistribution predict(
      const std::vector<Eigen::VectorXd>& observation) const = 0;
  virtual bool safe_for_concurrent_use() const { return true; }
  virtual std::string name() const = 0;
};

struct OffsetPolicy {
  enum class Mode { Uniform, Fixed };
  Mode mode = Mode::Uniform;
  int fixed_offset = 0;
  std::uint64_t seed = 0x0ff5e7ULL;
};

struct EvalConfig {
  int n_obs = 4;
  int n_pred = 6;
  int train_count = 200;
  int test_count = 20;
  std::uint64_t train_seed = 1001;
  std::uint64_t test_seed = 2002;
  OffsetPolicy offset_policy;
  SwConfig sw;
  double cv_sigma = 0.1;
  bool compute_nll = true;
  bool compute_swd = true;
};

struct EvalRecord {
  int trajectory = 0;
  int true_component = 0;
  int offset = 0;
  std::vector<int> matched_offsets;
  double nll = 0.0;
  double swd = 0.0;
};

struct EvalReport {
  std::string spec_name;
  std::string predictor;
  EvalConfig config;
  std::vector<EvalRecord> records;
  double nll_mean = 0.0;
  double swd_mean = 0.0;
  // Wall-clock accounting; lives outside the deterministic serialization.
  double nll_seconds = 0.0;
  double swd_seconds = 0.0;
};

// Draws `count` trajectories: component by weight, then the component's
// Gaussian, truncated to cap_length points. Deterministic per seed.
std::vector<LabeledTrajectory> sample_dataset(const TrajectoryPrior& prior,
                                              int count, std::uint64_t seed,
                                              int cap_length);

// For each component, the offset j minimizing
// sum_i |obs_i - mu^k_{j+i}|^2 over j in [0, max_offset]; ties break to the
// smallest j. max_offset < 0 means N_k - n_obs.
std::vector<int> match_subsequence(const TrajectoryPrior& prior,
                                   const std::vector<Eigen::VectorXd>& obs,
                                   int max_offset = -1);

// Conditional mixture over the n_pred steps following each component's
// matched window, reweighted by the observation's marginal likelihood.
GaussianMixture ground_truth_posterior(const TrajectoryPrior& prior,
                                       const std::vector<Eigen::VectorXd>& obs,
                                       const std::vector<int>& offsets,
                                       int n_pred);

EvalReport run_eval(const DatasetSpec& spec, const EvalConfig& config,
                    PredictorInterface& predictor);

// Reference predictors. The oracle returns the exact conditional mixture
// derived from the prior; the constant-velocity baseline extrapolates the
// last observed displacement with fixed isotropic covariance.
std::unique_ptr<PredictorInterface> make_oracle_predictor(
    const TrajectoryPrior& prior, int n_pred);
std::unique_ptr<PredictorInterface> make_constant_velocity_predictor(
    int n_pred, double sigma);

}  // namespace trajgen
