#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "trajgen/errors.hpp"

namespace trajgen {

struct MvGaussian {
  MvGaussian() = default;
  MvGaussian(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in);

  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  int dim() const { return static_cast<int>(mean.size()); }
};

struct GaussianMixture {
  GaussianMixture() = default;
  GaussianMixture(std::vector<double> weights_in,
                  std::vector<MvGaussian> components_in);

  std::vector<double> weights;
  std::vector<MvGaussian> components;

  int size() const { return static_cast<int>(components.size()); }
  int dim() const { return components.front().dim(); }
};

// Partition of the time steps {0..n_steps-1} into an observed set A and its
// complement B (both kept in increasing order).
struct IndexPartition {
  static IndexPartition make(int n_steps, std::span<const int> observed);

  std::vector<int> observed;
  std::vector<int> hidden;
};

// Cholesky with the escalating diagonal jitter policy: try eps = 0, then
// 1e-12, 1e-11, ..., 1e-8 (relative to mean diagonal magnitude); failing all
// raises NumericalError.
struct JitteredLlt {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};
JitteredLlt llt_with_jitter(const Eigen::MatrixXd& cov);

// Factor A with A A^T = cov via the spectral decomposition, eigenvalues
// clipped at zero. Exact for rank-deficient and zero covariances, which the
// Cholesky path cannot factor; used by every sampling routine. Eigenvalues
// below -1e-8 * scale raise NumericalError.
Eigen::MatrixXd sampling_factor(const Eigen::MatrixXd& cov);

// Draws `count` samples; deterministic in (seed, count-independent per-sample
// streams), so sample i is the same regardless of how many are drawn.
std::vector<Eigen::VectorXd> sample(const MvGaussian& g, int count,
                                    std::uint64_t seed);

double log_pdf(const MvGaussian& g, const Eigen::VectorXd& x);

// Keeps the given time steps (block_size coordinates each).
MvGaussian marginalize(const MvGaussian& g, std::span<const int> steps,
                       int block_size);

// Gaussian conditioning on X_A = observed_values:
//   N(mu_B + S_BA S_AA^-1 (x_A - mu_A),  S_BB - S_BA S_AA^-1 S_AB).
MvGaussian condition(const MvGaussian& g, const IndexPartition& partition,
                     const Eigen::VectorXd& observed_values, int block_size);

// Conditions every component and reweights by the marginal likelihood of the
// observation (log-space, log-sum-exp normalization).
GaussianMixture mixture_condition(const GaussianMixture& m,
                                  const IndexPartition& partition,
                                  const Eigen::VectorXd& observed_values,
                                  int block_size);

std::vector<Eigen::VectorXd> mixture_sample(const GaussianMixture& m,
                                            int count, std::uint64_t seed);

double mixture_log_pdf(const GaussianMixture& m, const Eigen::VectorXd& x);

}  // namespace trajgen
