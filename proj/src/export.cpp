#include "trajgen/export.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace trajgen {

namespace {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_vector(std::ostringstream& out, const Eigen::VectorXd& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (i) out << ' ';
    out << g17(v[i]);
  }
  out << '\n';
}

void append_matrix_rows(std::ostringstream& out, const Eigen::MatrixXd& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << g17(m(i, j));
    }
    out << '\n';
  }
}

// 2-sigma ellipse of a 2x2 covariance: full axis lengths 2*sqrt(lambda),
// major axis first, angle of the major axis in radians.
struct Ellipse {
  double axis_major = 0.0;
  double axis_minor = 0.0;
  double angle = 0.0;
};

Ellipse ellipse_of(const Eigen::Matrix2d& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  const double l0 = std::max(es.eigenvalues()[0], 0.0);
  const double l1 = std::max(es.eigenvalues()[1], 0.0);
  Ellipse e;
  e.axis_major = 2.0 * std::sqrt(l1);  // eigenvalues sorted ascending
  e.axis_minor = 2.0 * std::sqrt(l0);
  e.angle = std::atan2(es.eigenvectors()(1, 1), es.eigenvectors()(0, 1));
  // An ellipse is symmetric under half-turns; canonicalize to [0, pi).
  constexpr double kPi = 3.14159265358979323846;
  if (e.angle < 0.0) e.angle += kPi;
  if (e.angle >= kPi) e.angle -= kPi;
  return e;
}

}  // namespace

std::string format_prior(const TrajectoryPrior& prior) {
  std::ostringstream out;
  out << "trajgen prior format_version 1\n";
  out << "components " << prior.component_count() << '\n';
  out << "dim " << prior.dim << '\n';
  for (int k = 0; k < prior.component_count(); ++k) {
    out << "component " << k << '\n';
    out << "weight " << g17(prior.weights[k]) << '\n';
    out << "length " << prior.length(k) << '\n';
    out << "mean\n";
    append_vector(out, prior.means[k]);
    out << "covariance " << prior.covariances[k].rows() << ' '
        << prior.covariances[k].cols() << '\n';
    append_matrix_rows(out, prior.covariances[k]);
  }
  return out.str();
}

std::string format_mixture(const GaussianMixture& mixture, int dim,
                           const std::string& kind) {
  std::ostringstream out;
  out << "trajgen " << kind << " format_version 1\n";
  out << "components " << mixture.size() << '\n';
  out << "dim " << dim << '\n';
  out << "steps " << mixture.dim() / dim << '\n';
  for (int k = 0; k < mixture.size(); ++k) {
    out << "component " << k << '\n';
    out << "weight " << g17(mixture.weights[k]) << '\n';
    out << "mean\n";
    append_vector(out, mixture.components[k].mean);
    out << "covariance " << mixture.components[k].cov.rows() << ' '
        << mixture.components[k].cov.cols() << '\n';
    append_matrix_rows(out, mixture.components[k].cov);
  }
  return out.str();
}

std::string format_report(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["spec_name"] = report.spec_name;
  j["predictor"] = report.predictor;
  nlohmann::ordered_json cfg;
  cfg["n_obs"] = report.config.n_obs;
  cfg["n_pred"] = report.config.n_pred;
  cfg["train_count"] = report.config.train_count;
  cfg["test_count"] = report.config.test_count;
  cfg["train_seed"] = report.config.train_seed;
  cfg["test_seed"] = report.config.test_seed;
  nlohmann::ordered_json off;
  off["mode"] = report.config.offset_policy.mode == OffsetPolicy::Mode::Uniform
                    ? "uniform"
                    : "fixed";
  if (report.config.offset_policy.mode == OffsetPolicy::Mode::Uniform) {
    off["seed"] = report.config.offset_policy.seed;
  } else {
    off["offset"] = report.config.offset_policy.fixed_offset;
  }
  cfg["offset_policy"] = off;
  nlohmann::ordered_json sw;
  sw["projections"] = report.config.sw.projections;
  sw["samples"] = report.config.sw.samples;
  sw["p_order"] = report.config.sw.p_order;
  sw["seed"] = report.config.sw.seed;
  cfg["sliced_wasserstein"] = sw;
  cfg["cv_sigma"] = report.config.cv_sigma;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::array();
  if (report.config.compute_nll) metrics.push_back("nll");
  if (report.config.compute_swd) metrics.push_back("swd");
  cfg["metrics"] = metrics;
  j["config"] = cfg;

  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json rec;
    rec["trajectory"] = r.trajectory;
    rec["true_component"] = r.true_component;
    rec["offset"] = r.offset;
    rec["matched_offsets"] = r.matched_offsets;
    if (report.config.compute_nll) rec["nll"] = r.nll;
    if (report.config.compute_swd) rec["swd"] = r.swd;
    records.push_back(rec);
  }
  j["records"] = records;
  nlohmann::ordered_json agg;
  if (report.config.compute_nll) agg["nll_mean"] = report.nll_mean;
  if (report.config.compute_swd) agg["swd_mean"] = report.swd_mean;
  j["aggregate"] = agg;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::vector<std::string> export_prior_plot_data(const TrajectoryPrior& prior,
                                                const std::string& out_dir,
                                                int sample_count,
                                                std::uint64_t seed) {
  if (prior.dim != 2) {
    throw DomainError("plot-data export supports 2-d scenes only");
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (int k = 0; k < prior.component_count(); ++k) {
    std::ostringstream out;
    out << "step,mean_x,mean_y,axis_major,axis_minor,angle_rad\n";
    for (int i = 0; i < prior.length(k); ++i) {
      const Eigen::Vector2d mu = prior.means[k].segment(2 * i, 2);
      const Ellipse e =
          ellipse_of(prior.covariances[k].block(2 * i, 2 * i, 2, 2));
      out << i << ',' << g17(mu[0]) << ',' << g17(mu[1]) << ','
          << g17(e.axis_major) << ',' << g17(e.axis_minor) << ','
          << g17(e.angle) << '\n';
    }
    const std::string path =
        out_dir + "/prior_component_" + std::to_string(k) + ".csv";
    write_text_file(path, out.str());
    written.push_back(path);
  }
  if (sample_count > 0) {
    const auto trajs =
        sample_dataset(prior, sample_count, seed, prior.min_length());
    std::ostringstream out;
    out << "trajectory,component,step,x,y\n";
    for (std::size_t ti = 0; ti < trajs.size(); ++ti) {
      for (std::size_t s = 0; s < trajs[ti].points.size(); ++s) {
        out << ti << ',' << trajs[ti].component << ',' << s << ','
            << g17(trajs[ti].points[s][0]) << ','
            << g17(trajs[ti].points[s][1]) << '\n';
      }
    }
    const std::string path = out_dir + "/samples.csv";
    write_text_file(path, out.str());
    written.push_back(path);
  }
  return written;
}

std::vector<std::string> export_posterior_plot_data(
    const GaussianMixture& posterior, int dim, const std::string& out_dir) {
  if (dim != 2) {
    throw DomainError("plot-data export supports 2-d scenes only");
  }
  std::filesystem::create_directories(out_dir);
  const int steps = posterior.dim() / dim;
  std::ostringstream out;
  out << "component,weight,step,mean_x,mean_y,axis_major,axis_minor,"
         "angle_rad\n";
  for (int k = 0; k < posterior.size(); ++k) {
    for (int i = 0; i < steps; ++i) {
      const Eigen::Vector2d mu =
          posterior.components[k].mean.segment(2 * i, 2);
      const Ellipse e = ellipse_of(
          posterior.components[k].cov.block(2 * i, 2 * i, 2, 2));
      out << k << ',' << g17(posterior.weights[k]) << ',' << i << ','
          << g17(mu[0]) << ',' << g17(mu[1]) << ',' << g17(e.axis_major)
          << ',' << g17(e.axis_minor) << ',' << g17(e.angle) << '\n';
    }
  }
  const std::string path = out_dir + "/posterior.csv";
  write_text_file(path, out.str());
  return {path};
}

}  // namespace trajgen
