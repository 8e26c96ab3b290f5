#include "trajgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "trajgen/rng.hpp"
#include "trajgen/simd/kernels.hpp"

namespace trajgen {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void hash_double(std::uint64_t& h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xffULL;
    h *= kFnvPrime;
  }
}

int dim_of(const StepDistribution& dist) {
  if (const auto* g = std::get_if<GaussianMixture>(&dist)) return g->dim();
  return static_cast<int>(std::get<WeightedSamples>(dist).points.cols());
}

// Draws `count` mixture samples into a flat row-major buffer.
void sample_mixture_flat(const GaussianMixture& m, int count,
                         std::uint64_t seed, std::vector<double>& out) {
  const int d = m.dim();
  out.resize(static_cast<std::size_t>(count) * d);
  std::vector<Eigen::MatrixXd> chol(m.size());
  std::vector<char> have(m.size(), 0);
  std::vector<double> cum(m.size());
  double acc = 0.0;
  for (int k = 0; k < m.size(); ++k) {
    acc += m.weights[k];
    cum[k] = acc;
  }
  Eigen::VectorXd z(d);
  for (int i = 0; i < count; ++i) {
    Pcg64 rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    const double u = rng.next_uniform() * acc;
    int k = static_cast<int>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    k = std::min(k, m.size() - 1);
    if (!have[k]) {
      chol[k] = sampling_factor(m.components[k].cov);
      have[k] = 1;
    }
    for (int j = 0; j < d; ++j) z[j] = rng.next_normal();
    Eigen::Map<Eigen::VectorXd>(out.data() + static_cast<std::size_t>(i) * d,
                                d) = m.components[k].mean + chol[k] * z;
  }
}

// Materializes a step distribution as exactly `count` equally weighted
// points (flat row-major buffer).
void materialize(const StepDistribution& dist, int count, std::uint64_t seed,
                 std::vector<double>& out) {
  if (const auto* g = std::get_if<GaussianMixture>(&dist)) {
    sample_mixture_flat(*g, count, seed, out);
    return;
  }
  const auto& ws = std::get<WeightedSamples>(dist);
  const int rows = static_cast<int>(ws.points.rows());
  const int d = static_cast<int>(ws.points.cols());
  out.resize(static_cast<std::size_t>(count) * d);
  if (ws.weights.empty()) {
    if (rows == count) {
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < d; ++j) {
          out[static_cast<std::size_t>(i) * d + j] = ws.points(i, j);
        }
      }
      return;
    }
    // Deterministic subsample without replacement (partial Fisher-Yates).
    std::vector<int> idx(rows);
    for (int i = 0; i < rows; ++i) idx[i] = i;
    Pcg64 rng(derive_seed(seed, {0x50b5e7ULL}));
    for (int i = 0; i < count; ++i) {
      const int j =
          i + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(
                                                    rows - i));
      std::swap(idx[i], idx[j]);
      for (int c = 0; c < d; ++c) {
        out[static_cast<std::size_t>(i) * d + c] = ws.points(idx[i], c);
      }
    }
    return;
  }
  // Weighted set: categorical resample with replacement.
  std::vector<double> cum(ws.weights.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < ws.weights.size(); ++k) {
    if (ws.weights[k] < 0.0) {
      throw DomainError("sample set: negative weight");
    }
    acc += ws.weights[k];
    cum[k] = acc;
  }
  if (acc <= 0.0) throw DomainError("sample set: weights sum to zero");
  Pcg64 rng(derive_seed(seed, {0x31e54ULL}));
  for (int i = 0; i < count; ++i) {
    const double u = rng.next_uniform() * acc;
    int k = static_cast<int>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    k = std::min<int>(k, static_cast<int>(cum.size()) - 1);
    for (int c = 0; c < d; ++c) {
      out[static_cast<std::size_t>(i) * d + c] = ws.points(k, c);
    }
  }
}

int available_count(const StepDistribution& dist, const SwConfig& config) {
  if (const auto* ws = std::get_if<WeightedSamples>(&dist)) {
    if (ws->weights.empty()) {
      return std::min<int>(static_cast<int>(ws->points.rows()),
                           config.samples);
    }
  }
  return config.samples;
}

}  // namespace

std::uint64_t distribution_content_hash(const StepDistribution& dist) {
  std::uint64_t h = kFnvOffset;
  if (const auto* g = std::get_if<GaussianMixture>(&dist)) {
    for (double w : g->weights) hash_double(h, w);
    for (const auto& c : g->components) {
      for (int i = 0; i < c.mean.size(); ++i) hash_double(h, c.mean[i]);
      for (int i = 0; i < c.cov.rows(); ++i) {
        for (int j = 0; j < c.cov.cols(); ++j) hash_double(h, c.cov(i, j));
      }
    }
    return h;
  }
  const auto& ws = std::get<WeightedSamples>(dist);
  for (int i = 0; i < ws.points.rows(); ++i) {
    for (int j = 0; j < ws.points.cols(); ++j) hash_double(h, ws.points(i, j));
  }
  for (double w : ws.weights) hash_double(h, w);
  return h;
}

double nll_score(const PredictionDistribution& prediction,
                 const std::vector<Eigen::VectorXd>& ground_truth_points) {
  if (prediction.horizon() == 0) {
    throw DomainError("nll_score: empty prediction");
  }
  if (prediction.horizon() !=
      static_cast<int>(ground_truth_points.size())) {
    throw DomainError("nll_score: horizon " +
                      std::to_string(prediction.horizon()) +
                      " does not match " +
                      std::to_string(ground_truth_points.size()) +
                      " ground-truth points");
  }
  double acc = 0.0;
  for (int i = 0; i < prediction.horizon(); ++i) {
    const auto* g = std::get_if<GaussianMixture>(&prediction.steps[i]);
    if (g == nullptr) {
      throw UnsupportedFormError(
          "nll_score: step " + std::to_string(i) +
          " is a sample set; NLL requires density-form predictions");
    }
    acc += -mixture_log_pdf(*g, ground_truth_points[i]);
  }
  return acc / static_cast<double>(prediction.horizon());
}

double wasserstein_1d(std::span<const double> sorted_p,
                      std::span<const double> sorted_q, double p) {
  if (sorted_p.empty() || sorted_q.empty()) {
    throw DomainError("wasserstein_1d: empty input");
  }
  if (sorted_p.size() != sorted_q.size()) {
    throw DomainError("wasserstein_1d: sample counts differ");
  }
  if (!(p >= 1.0)) throw DomainError("wasserstein_1d: order p must be >= 1");
  const double mean_pow = simd::abs_diff_pow_mean(
      sorted_p.data(), sorted_q.data(), sorted_p.size(), p);
  return std::pow(mean_pow, 1.0 / p);
}

double sliced_wasserstein(const StepDistribution& dist_p,
                          const StepDistribution& dist_q,
                          const SwConfig& config) {
  const int d = dim_of(dist_p);
  if (d != dim_of(dist_q)) {
    throw DomainError("sliced_wasserstein: dimension mismatch");
  }
  if (config.projections < 1 || config.samples < 2 || !(config.p_order >= 1)) {
    throw DomainError("sliced_wasserstein: invalid configuration");
  }
  const int n = std::min(available_count(dist_p, config),
                         available_count(dist_q, config));
  if (n < 2) throw DomainError("sliced_wasserstein: too few samples");

  // Seeds depend on content, not argument order: symmetric, and identical
  // inputs produce identical sample sets.
  std::vector<double> pts_p, pts_q;
  materialize(dist_p, n,
              derive_seed(config.seed, {distribution_content_hash(dist_p)}),
              pts_p);
  materialize(dist_q, n,
              derive_seed(config.seed, {distribution_content_hash(dist_q)}),
              pts_q);

  Pcg64 dir_rng(derive_seed(config.seed, {0xd12ec7ULL}));
  std::vector<double> dir(d), proj_p(n), proj_q(n);
  double acc = 0.0;
  for (int k = 0; k < config.projections; ++k) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int j = 0; j < d; ++j) {
        dir[j] = dir_rng.next_normal();
        norm2 += dir[j] * dir[j];
      }
    } while (norm2 < 1e-24);
    const double inv = 1.0 / std::sqrt(norm2);
    for (int j = 0; j < d; ++j) dir[j] *= inv;

    simd::project(pts_p.data(), n, d, dir.data(), proj_p.data());
    simd::project(pts_q.data(), n, d, dir.data(), proj_q.data());
    std::sort(proj_p.begin(), proj_p.end());
    std::sort(proj_q.begin(), proj_q.end());
    // abs_diff_pow_mean is W_p^p of the sorted 1-d samples.
    acc += simd::abs_diff_pow_mean(proj_p.data(), proj_q.data(), n,
                                   config.p_order);
  }
  return std::pow(acc / static_cast<double>(config.projections),
                  1.0 / config.p_order);
}

double per_point_swd(const PredictionDistribution& prediction,
                     const GaussianMixture& ground_truth_joint, int dim,
                     const SwConfig& config) {
  const int horizon = prediction.horizon();
  if (horizon == 0) throw DomainError("per_point_swd: empty prediction");
  if (ground_truth_joint.dim() != horizon * dim) {
    throw DomainError("per_point_swd: ground truth covers " +
                      std::to_string(ground_truth_joint.dim() / dim) +
                      " steps, prediction has horizon " +
                      std::to_string(horizon));
  }
  double acc = 0.0;
  for (int i = 0; i < horizon; ++i) {
    std::vector<MvGaussian> comps;
    comps.reserve(ground_truth_joint.size());
    const int step[] = {i};
    for (const auto& c : ground_truth_joint.components) {
      comps.push_back(marginalize(c, step, dim));
    }
    const StepDistribution truth_step =
        GaussianMixture(ground_truth_joint.weights, std::move(comps));
    acc += sliced_wasserstein(prediction.steps[i], truth_step, config);
  }
  return acc / static_cast<double>(horizon);
}

}  // namespace trajgen
