#include "trajgen/harness.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "trajgen/rng.hpp"

namespace trajgen {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Eigen::VectorXd> slice_points(const LabeledTrajectory& traj,
                                          int first, int count) {
  return {traj.points.begin() + first, traj.points.begin() + first + count};
}

}  // namespace

std::vector<LabeledTrajectory> sample_dataset(const TrajectoryPrior& prior,
                                              int count, std::uint64_t seed,
                                              int cap_length) {
  if (count < 1) throw DomainError("sample_dataset: count must be >= 1");
  if (cap_length < 1 || cap_length > prior.min_length()) {
    throw DomainError("sample_dataset: cap_length must be in [1, " +
                      std::to_string(prior.min_length()) + "]");
  }
  const int d = prior.dim;
  const int k_count = prior.component_count();
  std::vector<Eigen::MatrixXd> chol(k_count);
  std::vector<char> have(k_count, 0);
  std::vector<double> cum(k_count);
  double acc = 0.0;
  for (int k = 0; k < k_count; ++k) {
    acc += prior.weights[k];
    cum[k] = acc;
  }
  std::vector<LabeledTrajectory> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Pcg64 rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    const double u = rng.next_uniform() * acc;
    int k = static_cast<int>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    k = std::min(k, k_count - 1);
    if (!have[k]) {
      chol[k] = sampling_factor(prior.covariances[k]);
      have[k] = 1;
    }
    const int n = prior.length(k);
    Eigen::VectorXd z(n * d);
    for (int j = 0; j < n * d; ++j) z[j] = rng.next_normal();
    const Eigen::VectorXd x = prior.means[k] + chol[k] * z;
    LabeledTrajectory traj;
    traj.component = k;
    traj.points.reserve(cap_length);
    for (int s = 0; s < cap_length; ++s) {
      traj.points.push_back(x.segment(s * d, d));
    }
    out.push_back(std::move(traj));
  }
  return out;
}

std::vector<int> match_subsequence(const TrajectoryPrior& prior,
                                   const std::vector<Eigen::VectorXd>& obs,
                                   int max_offset) {
  const int n_obs = static_cast<int>(obs.size());
  if (n_obs < 1) throw DomainError("match_subsequence: empty observation");
  const int d = prior.dim;
  std::vector<int> offsets(prior.component_count(), 0);
  for (int k = 0; k < prior.component_count(); ++k) {
    const int last =
        (max_offset < 0 ? prior.length(k) - n_obs : max_offset);
    if (last < 0 || last > prior.length(k) - n_obs) {
      throw WindowError("match_subsequence: observation of length " +
                        std::to_string(n_obs) +
                        " does not fit component of length " +
                        std::to_string(prior.length(k)));
    }
    double best = std::numeric_limits<double>::infinity();
    int best_j = 0;
    for (int j = 0; j <= last; ++j) {
      double cost = 0.0;
      for (int i = 0; i < n_obs; ++i) {
        cost +=
            (obs[i] - prior.means[k].segment((j + i) * d, d)).squaredNorm();
      }
      if (cost < best) {  // strict: ties keep the smallest offset
        best = cost;
        best_j = j;
      }
    }
    offsets[k] = best_j;
  }
  return offsets;
}

GaussianMixture ground_truth_posterior(const TrajectoryPrior& prior,
                                       const std::vector<Eigen::VectorXd>& obs,
                                       const std::vector<int>& offsets,
                                       int n_pred) {
  const int n_obs = static_cast<int>(obs.size());
  if (n_obs < 1) throw DomainError("ground_truth_posterior: empty observation");
  if (n_pred < 1) throw DomainError("ground_truth_posterior: n_pred must be >= 1");
  if (static_cast<int>(offsets.size()) != prior.component_count()) {
    throw DomainError("ground_truth_posterior: one offset per component "
                      "required");
  }
  const int d = prior.dim;
  Eigen::VectorXd obs_flat(n_obs * d);
  for (int i = 0; i < n_obs; ++i) obs_flat.segment(i * d, d) = obs[i];

  const int window = n_obs + n_pred;
  std::vector<double> log_w(prior.component_count());
  std::vector<MvGaussian> cond(prior.component_count());
  for (int k = 0; k < prior.component_count(); ++k) {
    const int j = offsets[k];
    if (j < 0 || j + window > prior.length(k)) {
      throw WindowError("ground_truth_posterior: window [" +
                        std::to_string(j) + ", " +
                        std::to_string(j + window) +
                        ") exceeds component length " +
                        std::to_string(prior.length(k)));
    }
    std::vector<int> steps(window);
    std::iota(steps.begin(), steps.end(), j);
    const MvGaussian joint = marginalize(prior.component(k), steps, d);
    std::vector<int> observed(n_obs);
    std::iota(observed.begin(), observed.end(), 0);
    const IndexPartition part = IndexPartition::make(window, observed);
    const MvGaussian marg_a = marginalize(joint, observed, d);
    log_w[k] = (prior.weights[k] > 0.0
                    ? std::log(prior.weights[k])
                    : -std::numeric_limits<double>::infinity());
    log_w[k] += log_pdf(marg_a, obs_flat);
    cond[k] = condition(joint, part, obs_flat, d);
  }
  const double max_lw = *std::max_element(log_w.begin(), log_w.end());
  if (!std::isfinite(max_lw)) {
    throw DegenerateError("ground_truth_posterior: observation has zero "
                          "likelihood under every component");
  }
  double denom = 0.0;
  for (double lw : log_w) denom += std::exp(lw - max_lw);
  std::vector<double> weights(prior.component_count());
  for (int k = 0; k < prior.component_count(); ++k) {
    weights[k] = std::exp(log_w[k] - max_lw) / denom;
  }
  return GaussianMixture(std::move(weights), std::move(cond));
}

EvalReport run_eval(const DatasetSpec& spec, const EvalConfig& config,
                    PredictorInterface& predictor) {
  if (config.n_obs < 1 || config.n_pred < 1) {
    throw DomainError("run_eval: n_obs and n_pred must be >= 1");
  }
  const TrajectoryPrior prior = build_prior(spec);
  const int cap = prior.min_length();
  const int window = config.n_obs + config.n_pred;
  if (window > cap) {
    throw DomainError("run_eval: n_obs + n_pred = " + std::to_string(window) +
                      " exceeds the shortest component length " +
                      std::to_string(cap));
  }
  const int d = prior.dim;

  // Train and test sets are independent draws separated by seed.
  const auto train_set =
      sample_dataset(prior, config.train_count, config.train_seed, cap);
  predictor.fit(train_set);
  const auto test_set =
      sample_dataset(prior, config.test_count, config.test_seed, cap);

  EvalReport report;
  report.spec_name = spec.name;
  report.predictor = predictor.name();
  report.config = config;

  const int max_start = cap - window;
  double nll_time = 0.0, swd_time = 0.0;
  for (int ti = 0; ti < static_cast<int>(test_set.size()); ++ti) {
    const auto& traj = test_set[ti];
    int offset = 0;
    if (config.offset_policy.mode == OffsetPolicy::Mode::Fixed) {
      offset = config.offset_policy.fixed_offset;
      if (offset < 0 || offset > max_start) {
        throw DomainError("run_eval: fixed offset " + std::to_string(offset) +
                          " outside [0, " + std::to_string(max_start) + "]");
      }
    } else if (max_start > 0) {
      Pcg64 rng(derive_seed(config.offset_policy.seed,
                            {static_cast<std::uint64_t>(ti)}));
      offset = static_cast<int>(
          rng.next_u64() % static_cast<std::uint64_t>(max_start + 1));
    }

    const auto obs = slice_points(traj, offset, config.n_obs);
    const auto future = slice_points(traj, offset + config.n_obs,
                                     config.n_pred);

    // Match against windows that leave room for the prediction horizon.
    const auto matched = match_subsequence(prior, obs, max_start);
    const GaussianMixture truth =
        ground_truth_posterior(prior, obs, matched, config.n_pred);

    const PredictionDistribution pred = predictor.predict(obs);
    if (pred.horizon() != config.n_pred) {
      throw PredictorError("predictor '" + predictor.name() +
                           "' returned horizon " +
                           std::to_string(pred.horizon()) + ", expected " +
                           std::to_string(config.n_pred));
    }
    if (pred.dim != d) {
      throw PredictorError("predictor '" + predictor.name() +
                           "' returned dimension " + std::to_string(pred.dim) +
                           ", expected " + std::to_string(d));
    }

    EvalRecord rec;
    rec.trajectory = ti;
    rec.true_component = traj.component;
    rec.offset = offset;
    rec.matched_offsets = matched;
    if (config.compute_nll) {
      const auto start = Clock::now();
      rec.nll = nll_score(pred, future);
      nll_time += seconds_since(start);
    }
    if (config.compute_swd) {
      const auto start = Clock::now();
      rec.swd = per_point_swd(pred, truth, d, config.sw);
      swd_time += seconds_since(start);
    }
    report.records.push_back(std::move(rec));
  }

  double nll_sum = 0.0, swd_sum = 0.0;
  for (const auto& r : report.records) {
    nll_sum += r.nll;
    swd_sum += r.swd;
  }
  const double n = static_cast<double>(report.records.size());
  report.nll_mean = (n > 0 ? nll_sum / n : 0.0);
  report.swd_mean = (n > 0 ? swd_sum / n : 0.0);
  report.nll_seconds = nll_time;
  report.swd_seconds = swd_time;
  return report;
}

}  // namespace trajgen
