#include "trajgen/harness.hpp"

namespace trajgen {

namespace {

class OraclePredictor final : public PredictorInterface {
 public:
  OraclePredictor(const TrajectoryPrior& prior, int n_pred)
      : prior_(prior), n_pred_(n_pred) {}

  PredictionDistribution predict(
      const std::vector<Eigen::VectorXd>& observation) const override {
    const int n_obs = static_cast<int>(observation.size());
    const int max_offset = prior_.min_length() - n_obs - n_pred_;
    const auto offsets = match_subsequence(prior_, observation, max_offset);
    const GaussianMixture joint =
        ground_truth_posterior(prior_, observation, offsets, n_pred_);
    const int d = prior_.dim;
    PredictionDistribution out;
    out.dim = d;
    out.steps.reserve(n_pred_);
    for (int i = 0; i < n_pred_; ++i) {
      std::vector<MvGaussian> comps;
      comps.reserve(joint.size());
      const int step[] = {i};
      for (const auto& c : joint.components) {
        comps.push_back(marginalize(c, step, d));
      }
      out.steps.emplace_back(GaussianMixture(joint.weights, std::move(comps)));
    }
    return out;
  }

  std::string name() const override { return "oracle"; }

 private:
  const TrajectoryPrior& prior_;
  int n_pred_;
};

class ConstantVelocityPredictor final : public PredictorInterface {
 public:
  ConstantVelocityPredictor(int n_pred, double sigma)
      : n_pred_(n_pred), sigma_(sigma) {
    if (n_pred_ < 1) throw DomainError("constant velocity: n_pred must be >= 1");
    if (!(sigma_ > 0.0)) throw DomainError("constant velocity: sigma must be > 0");
  }

  PredictionDistribution predict(
      const std::vector<Eigen::VectorXd>& observation) const override {
    if (observation.empty()) {
      throw DomainError("constant velocity: empty observation");
    }
    const int d = static_cast<int>(observation.front().size());
    const Eigen::VectorXd last = observation.back();
    const Eigen::VectorXd step_v =
        observation.size() >= 2
            ? Eigen::VectorXd(last - observation[observation.size() - 2])
            : Eigen::VectorXd(Eigen::VectorXd::Zero(d));
    const Eigen::MatrixXd cov =
        sigma_ * sigma_ * Eigen::MatrixXd::Identity(d, d);
    PredictionDistribution out;
    out.dim = d;
    out.steps.reserve(n_pred_);
    for (int m = 1; m <= n_pred_; ++m) {
      out.steps.emplace_back(GaussianMixture(
          {1.0}, {MvGaussian(last + static_cast<double>(m) * step_v, cov)}));
    }
    return out;
  }

  std::string name() const override { return "cv"; }

 private:
  int n_pred_;
  double sigma_;
};

}  // namespace

std::unique_ptr<PredictorInterface> make_oracle_predictor(
    const TrajectoryPrior& prior, int n_pred) {
  return std::make_unique<OraclePredictor>(prior, n_pred);
}

std::unique_ptr<PredictorInterface> make_constant_velocity_predictor(
    int n_pred, double sigma) {
  return std::make_unique<ConstantVelocityPredictor>(n_pred, sigma);
}

}  // namespace trajgen
