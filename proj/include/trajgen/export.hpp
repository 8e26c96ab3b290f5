#pragma once

#include <string>
#include <vector>

#include "trajgen/harness.hpp"

namespace trajgen {

// All writers emit deterministic text; floating-point values use 17
// significant digits so files round-trip exactly.

std::string format_prior(const TrajectoryPrior& prior);

// A Gaussian mixture over `steps` stacked d-dimensional points (posterior
// export; `dim` is the per-point dimension).
std::string format_mixture(const GaussianMixture& mixture, int dim,
                           const std::string& kind);

// Deterministic report serialization (no wall-clock content).
std::string format_report(const EvalReport& report);

void write_text_file(const std::string& path, const std::string& content);

// Plot-data exports: per-point mean locations plus 2-sigma covariance
// ellipses (full axis lengths 2*sqrt(eigenvalue), angle of the major axis),
// and sampled trajectories. Returns the written file paths.
std::vector<std::string> export_prior_plot_data(const TrajectoryPrior& prior,
                                                const std::string& out_dir,
                                                int sample_count,
                                                std::uint64_t seed);
std::vector<std::string> export_posterior_plot_data(
    const GaussianMixture& posterior, int dim, const std::string& out_dir);

}  // namespace trajgen
