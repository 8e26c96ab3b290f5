#include "trajgen/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "trajgen/rng.hpp"

namespace trajgen {

namespace {

void check_symmetric(const Eigen::MatrixXd& cov, const char* who) {
  if (cov.rows() != cov.cols()) {
    throw DomainError(std::string(who) + ": covariance not square");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw DomainError(std::string(who) + ": covariance not symmetric");
  }
}

Eigen::VectorXd standard_normal(int dim, Pcg64& rng) {
  Eigen::VectorXd z(dim);
  for (int i = 0; i < dim; ++i) z[i] = rng.next_normal();
  return z;
}

std::vector<int> expand_steps(std::span<const int> steps, int block_size,
                              int total_coords) {
  std::vector<int> idx;
  idx.reserve(steps.size() * block_size);
  for (int s : steps) {
    if (s < 0 || (s + 1) * block_size > total_coords) {
      throw DomainError("step index " + std::to_string(s) +
                        " out of range for dimension " +
                        std::to_string(total_coords));
    }
    for (int k = 0; k < block_size; ++k) idx.push_back(s * block_size + k);
  }
  return idx;
}

Eigen::MatrixXd pick(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                     const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(i, j) = m(rows[i], cols[j]);
    }
  }
  return out;
}

Eigen::VectorXd pick(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

}  // namespace

MvGaussian::MvGaussian(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (cov.rows() != mean.size() || cov.cols() != mean.size()) {
    throw DomainError("MvGaussian: covariance shape does not match mean");
  }
  check_symmetric(cov, "MvGaussian");
}

GaussianMixture::GaussianMixture(std::vector<double> weights_in,
                                 std::vector<MvGaussian> components_in)
    : weights(std::move(weights_in)), components(std::move(components_in)) {
  if (weights.size() != components.size() || components.empty()) {
    throw DomainError("GaussianMixture: weights/components mismatch");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DomainError("GaussianMixture: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DomainError("GaussianMixture: weights sum to " +
                      std::to_string(sum) + ", expected 1");
  }
  const int d = components.front().dim();
  for (const auto& c : components) {
    if (c.dim() != d) {
      throw DomainError("GaussianMixture: component dimensions differ");
    }
  }
}

IndexPartition IndexPartition::make(int n_steps,
                                    std::span<const int> observed_steps) {
  std::vector<char> seen(n_steps, 0);
  IndexPartition p;
  for (int s : observed_steps) {
    if (s < 0 || s >= n_steps) {
      throw DomainError("IndexPartition: observed step out of range");
    }
    if (seen[s]) throw DomainError("IndexPartition: duplicate observed step");
    seen[s] = 1;
  }
  for (int s = 0; s < n_steps; ++s) {
    (seen[s] ? p.observed : p.hidden).push_back(s);
  }
  return p;
}

JitteredLlt llt_with_jitter(const Eigen::MatrixXd& cov) {
  const int n = static_cast<int>(cov.rows());
  const double scale = std::max(cov.diagonal().cwiseAbs().mean(), 1e-300);
  JitteredLlt out;
  out.llt.compute(cov);
  if (out.llt.info() == Eigen::Success) return out;
  for (double eps = 1e-12; eps <= 1e-8 * 1.0000001; eps *= 10.0) {
    out.llt.compute(cov + eps * scale * Eigen::MatrixXd::Identity(n, n));
    if (out.llt.info() == Eigen::Success) {
      out.jitter = eps * scale;
      return out;
    }
  }
  throw NumericalError(
      "covariance not positive definite within the jitter cap (1e-8)");
}

Eigen::MatrixXd sampling_factor(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) {
    throw NumericalError("sampling_factor: eigendecomposition failed");
  }
  const double scale =
      std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  if (es.eigenvalues().minCoeff() < -1e-8 * scale) {
    throw NumericalError(
        "sampling_factor: covariance indefinite beyond tolerance");
  }
  return es.eigenvectors() *
         es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

std::vector<Eigen::VectorXd> sample(const MvGaussian& g, int count,
                                    std::uint64_t seed) {
  if (count < 1) throw DomainError("sample: count must be >= 1");
  const int d = g.dim();
  const Eigen::MatrixXd chol = sampling_factor(g.cov);
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Pcg64 rng(derive_seed(seed, {static_cast<std::uint64_t>(i)}));
    out.push_back(g.mean + chol * standard_normal(d, rng));
  }
  return out;
}

double log_pdf(const MvGaussian& g, const Eigen::VectorXd& x) {
  if (x.size() != g.mean.size()) {
    throw DomainError("log_pdf: dimension mismatch");
  }
  const auto fac = llt_with_jitter(g.cov);
  const Eigen::MatrixXd& l = fac.llt.matrixLLT();
  double log_det = 0.0;
  for (int i = 0; i < l.rows(); ++i) log_det += std::log(l(i, i));
  const Eigen::VectorXd z = fac.llt.matrixL().solve(x - g.mean);
  constexpr double kLog2Pi = 1.8378770664093454836;
  return -0.5 * z.squaredNorm() - log_det -
         0.5 * static_cast<double>(g.dim()) * kLog2Pi;
}

MvGaussian marginalize(const MvGaussian& g, std::span<const int> steps,
                       int block_size) {
  if (block_size < 1) throw DomainError("marginalize: block_size must be >= 1");
  const auto idx = expand_steps(steps, block_size, g.dim());
  return MvGaussian(pick(g.mean, idx), pick(g.cov, idx, idx));
}

MvGaussian condition(const MvGaussian& g, const IndexPartition& partition,
                     const Eigen::VectorXd& observed_values, int block_size) {
  if (block_size < 1) throw DomainError("condition: block_size must be >= 1");
  const auto a = expand_steps(partition.observed, block_size, g.dim());
  const auto b = expand_steps(partition.hidden, block_size, g.dim());
  if (static_cast<int>(a.size() + b.size()) != g.dim()) {
    throw DomainError("condition: partition does not cover the distribution");
  }
  if (observed_values.size() != static_cast<Eigen::Index>(a.size())) {
    throw DomainError("condition: observed values have dimension " +
                      std::to_string(observed_values.size()) + ", expected " +
                      std::to_string(a.size()));
  }
  if (a.empty()) return g;
  if (b.empty()) {
    return MvGaussian(Eigen::VectorXd(0), Eigen::MatrixXd(0, 0));
  }
  const Eigen::MatrixXd s_aa = pick(g.cov, a, a);
  const Eigen::MatrixXd s_ba = pick(g.cov, b, a);
  const Eigen::VectorXd mu_a = pick(g.mean, a);
  const Eigen::VectorXd mu_b = pick(g.mean, b);
  const auto fac = llt_with_jitter(s_aa);
  const Eigen::VectorXd mean =
      mu_b + s_ba * fac.llt.solve(observed_values - mu_a);
  Eigen::MatrixXd cov =
      pick(g.cov, b, b) - s_ba * fac.llt.solve(s_ba.transpose());
  cov = 0.5 * (cov + cov.transpose()).eval();
  return MvGaussian(mean, std::move(cov));
}

GaussianMixture mixture_condition(const GaussianMixture& m,
                                  const IndexPartition& partition,
                                  const Eigen::VectorXd& observed_values,
                                  int block_size) {
  if (partition.observed.empty()) return m;
  std::vector<double> log_w(m.size());
  std::vector<MvGaussian> cond(m.size());
  for (int k = 0; k < m.size(); ++k) {
    const MvGaussian marg_a =
        marginalize(m.components[k], partition.observed, block_size);
    log_w[k] = (m.weights[k] > 0.0 ? std::log(m.weights[k])
                                   : -std::numeric_limits<double>::infinity());
    log_w[k] += log_pdf(marg_a, observed_values);
    cond[k] = condition(m.components[k], partition, observed_values,
                        block_size);
  }
  const double max_lw = *std::max_element(log_w.begin(), log_w.end());
  if (!std::isfinite(max_lw)) {
    throw DegenerateError(
        "mixture_condition: observation has zero likelihood under every "
        "component");
  }
  double denom = 0.0;
  for (double lw : log_w) denom += std::exp(lw - max_lw);
  std::vector<double> weights(m.size());
  for (int k = 0; k < m.size(); ++k) {
    weights[k] = std::exp(log_w[k] - max_lw) / denom;
  }
  return GaussianMixture(std::move(weights), std::move(cond));
}

std::vector<Eigen::VectorXd> mixture_sample(const GaussianMixture& m,
                                            int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("mixture_sample: count must be >= 1");
  const int d = m.dim();
  // One factorization per component, resolved lazily.
  std::vector<Eigen::MatrixXd> chol(m.size());
  std::vector<char> have(m.size(), 0);
  std::vector<double> cum(m.size());
  double acc = 0.0;
  for (int k = 0; k < m.size(); ++k) {
    acc += m.weights[k];
    cum[k] = acc;
  }
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
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
    out.push_back(m.components[k].mean + chol[k] * standard_normal(d, rng));
  }
  return out;
}

double mixture_log_pdf(const GaussianMixture& m, const Eigen::VectorXd& x) {
  double max_lw = -std::numeric_limits<double>::infinity();
  std::vector<double> lw(m.size());
  for (int k = 0; k < m.size(); ++k) {
    lw[k] = (m.weights[k] > 0.0 ? std::log(m.weights[k])
                                : -std::numeric_limits<double>::infinity());
    lw[k] += log_pdf(m.components[k], x);
    max_lw = std::max(max_lw, lw[k]);
  }
  if (!std::isfinite(max_lw)) return max_lw;
  double acc = 0.0;
  for (double v : lw) acc += std::exp(v - max_lw);
  return max_lw + std::log(acc);
}

}  // namespace trajgen
