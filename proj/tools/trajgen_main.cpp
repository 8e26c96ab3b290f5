// trajgen command line: scene specs in, trajectory data / distributions /
// evaluation reports out.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "trajgen/export.hpp"
#include "trajgen/harness.hpp"
#include "trajgen/rng.hpp"
#include "trajgen/simd/kernels.hpp"

namespace {

using trajgen::DatasetSpec;
using trajgen::EvalConfig;
using trajgen::OffsetPolicy;

std::vector<Eigen::VectorXd> load_observation(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw trajgen::IoError("cannot open observation file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("points") ||
      !j["points"].is_array() || j["points"].empty()) {
    throw trajgen::IoError("observation file must be {\"points\": [[..], ..]}: " +
                           path);
  }
  std::vector<Eigen::VectorXd> points;
  for (const auto& row : j["points"]) {
    if (!row.is_array() || row.empty()) {
      throw trajgen::IoError("observation points must be coordinate arrays");
    }
    Eigen::VectorXd p(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) p[i] = row[i].get<double>();
    points.push_back(std::move(p));
  }
  return points;
}

EvalConfig load_eval_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw trajgen::IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw trajgen::IoError("config file is not a JSON object: " + path);
  }
  EvalConfig cfg;
  cfg.n_obs = j.value("n_obs", cfg.n_obs);
  cfg.n_pred = j.value("n_pred", cfg.n_pred);
  cfg.train_count = j.value("train_count", cfg.train_count);
  cfg.test_count = j.value("test_count", cfg.test_count);
  cfg.train_seed = j.value("train_seed", cfg.train_seed);
  cfg.test_seed = j.value("test_seed", cfg.test_seed);
  cfg.cv_sigma = j.value("cv_sigma", cfg.cv_sigma);
  if (j.contains("offset_policy")) {
    const auto& op = j["offset_policy"];
    const std::string mode = op.value("mode", "uniform");
    if (mode == "fixed") {
      cfg.offset_policy.mode = OffsetPolicy::Mode::Fixed;
      cfg.offset_policy.fixed_offset = op.value("offset", 0);
    } else if (mode == "uniform") {
      cfg.offset_policy.mode = OffsetPolicy::Mode::Uniform;
      cfg.offset_policy.seed = op.value("seed", cfg.offset_policy.seed);
    } else {
      throw trajgen::IoError("offset_policy.mode must be uniform or fixed");
    }
  }
  if (j.contains("metrics")) {
    const auto& m = j["metrics"];
    cfg.sw.projections = m.value("projections", cfg.sw.projections);
    cfg.sw.samples = m.value("samples", cfg.sw.samples);
    cfg.sw.p_order = m.value("p_order", cfg.sw.p_order);
    cfg.sw.seed = m.value("seed", cfg.sw.seed);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajgen: probabilistic Bezier scene datasets, exact "
               "conditional distributions, and predictor evaluation"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate",
                                 "Sample labeled trajectories from a scene");
  std::string gen_spec, gen_out;
  int gen_count = 200;
  int gen_cap = -1;
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  gen->add_option("--spec", gen_spec, "Scene spec file")->required();
  gen->add_option("--out", gen_out, "Output CSV path")->required();
  gen->add_option("--count", gen_count, "Number of trajectories");
  gen->add_option("--cap", gen_cap,
                  "Cap trajectory length (default: shortest component)");
  gen->add_option("--seed", gen_seed, "Sampling seed (default: spec seed)")
      ->each([&](const std::string&) { gen_seed_set = true; });

  // prior
  auto* pri = app.add_subcommand("prior", "Export the scene prior");
  std::string pri_spec, pri_out;
  pri->add_option("--spec", pri_spec, "Scene spec file")->required();
  pri->add_option("--out", pri_out, "Output path")->required();

  // posterior
  auto* post = app.add_subcommand(
      "posterior", "Condition the prior on an observed sub-trajectory");
  std::string post_spec, post_obs, post_out;
  int post_npred = 6;
  post->add_option("--spec", post_spec, "Scene spec file")->required();
  post->add_option("--obs", post_obs, "Observation JSON file")->required();
  post->add_option("--out", post_out, "Output path")->required();
  post->add_option("--n-pred", post_npred, "Prediction horizon");

  // evaluate
  auto* ev = app.add_subcommand("evaluate",
                                "Score a predictor against the scene");
  std::string ev_spec, ev_cfg_path, ev_out, ev_timing_out;
  std::string ev_predictor = "oracle";
  std::string ev_metric = "both";
  std::uint64_t ev_seed = 0;
  bool ev_seed_set = false;
  int ev_proj = -1, ev_samples = -1;
  double ev_p = -1.0;
  ev->add_option("--spec", ev_spec, "Scene spec file")->required();
  ev->add_option("--config", ev_cfg_path, "Evaluation config JSON");
  ev->add_option("--out", ev_out, "Report output path")->required();
  ev->add_option("--predictor", ev_predictor, "Predictor")
      ->check(CLI::IsMember({"oracle", "cv"}));
  ev->add_option("--metric", ev_metric, "Metrics to compute")
      ->check(CLI::IsMember({"nll", "swd", "both"}));
  ev->add_option("--seed", ev_seed,
                 "Base seed; derives train/test/offset/metric seeds")
      ->each([&](const std::string&) { ev_seed_set = true; });
  ev->add_option("--projections", ev_proj, "SWD projection count");
  ev->add_option("--samples", ev_samples, "SWD samples per distribution");
  ev->add_option("--p-order", ev_p, "Wasserstein order p");
  ev->add_option("--timing-out", ev_timing_out,
                 "Write wall-clock timing to this file (non-deterministic)");

  // export-plot-data
  auto* plot = app.add_subcommand("export-plot-data",
                                  "Write mean/ellipse/sample CSV files");
  std::string plot_spec, plot_out, plot_obs;
  int plot_samples = 50;
  int plot_npred = 6;
  std::uint64_t plot_seed = 0;
  bool plot_seed_set = false;
  plot->add_option("--spec", plot_spec, "Scene spec file")->required();
  plot->add_option("--out", plot_out, "Output directory")->required();
  plot->add_option("--samples-count", plot_samples,
                   "Sampled trajectories to export");
  plot->add_option("--obs", plot_obs,
                   "Observation JSON; adds a posterior export");
  plot->add_option("--n-pred", plot_npred, "Posterior horizon with --obs");
  plot->add_option("--seed", plot_seed, "Sampling seed (default: spec seed)")
      ->each([&](const std::string&) { plot_seed_set = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) {
      const DatasetSpec spec = trajgen::load_spec_file(gen_spec);
      const auto prior = trajgen::build_prior(spec);
      const int cap = gen_cap > 0 ? gen_cap : prior.min_length();
      const std::uint64_t seed = gen_seed_set ? gen_seed : spec.seed;
      const auto trajs = trajgen::sample_dataset(prior, gen_count, seed, cap);
      std::ostringstream out;
      out << "trajectory,component,step";
      for (int c = 0; c < prior.dim; ++c) out << ",x" << c;
      out << '\n';
      char buf[64];
      for (std::size_t ti = 0; ti < trajs.size(); ++ti) {
        for (std::size_t s = 0; s < trajs[ti].points.size(); ++s) {
          out << ti << ',' << trajs[ti].component << ',' << s;
          for (int c = 0; c < prior.dim; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", trajs[ti].points[s][c]);
            out << ',' << buf;
          }
          out << '\n';
        }
      }
      trajgen::write_text_file(gen_out, out.str());
      std::cout << "wrote " << trajs.size() << " trajectories to " << gen_out
                << "\n";
    } else if (*pri) {
      const DatasetSpec spec = trajgen::load_spec_file(pri_spec);
      const auto prior = trajgen::build_prior(spec);
      trajgen::write_text_file(pri_out, trajgen::format_prior(prior));
      std::cout << "wrote prior (" << prior.component_count()
                << " components) to " << pri_out << "\n";
    } else if (*post) {
      const DatasetSpec spec = trajgen::load_spec_file(post_spec);
      const auto prior = trajgen::build_prior(spec);
      const auto obs = load_observation(post_obs);
      const int n_obs = static_cast<int>(obs.size());
      const int max_offset = prior.min_length() - n_obs - post_npred;
      if (max_offset < 0) {
        throw trajgen::WindowError(
            "observation plus horizon exceeds the shortest component");
      }
      const auto offsets = trajgen::match_subsequence(prior, obs, max_offset);
      const auto posterior =
          trajgen::ground_truth_posterior(prior, obs, offsets, post_npred);
      trajgen::write_text_file(
          post_out,
          trajgen::format_mixture(posterior, prior.dim, "posterior"));
      std::cout << "wrote posterior over " << post_npred << " steps to "
                << post_out << "\n";
    } else if (*ev) {
      const DatasetSpec spec = trajgen::load_spec_file(ev_spec);
      EvalConfig cfg;
      if (!ev_cfg_path.empty()) cfg = load_eval_config(ev_cfg_path);
      if (ev_seed_set) {
        cfg.train_seed = trajgen::derive_seed(ev_seed, {1});
        cfg.test_seed = trajgen::derive_seed(ev_seed, {2});
        cfg.offset_policy.seed = trajgen::derive_seed(ev_seed, {3});
        cfg.sw.seed = trajgen::derive_seed(ev_seed, {4});
      }
      if (ev_proj > 0) cfg.sw.projections = ev_proj;
      if (ev_samples > 0) cfg.sw.samples = ev_samples;
      if (ev_p > 0) cfg.sw.p_order = ev_p;
      cfg.compute_nll = (ev_metric == "nll" || ev_metric == "both");
      cfg.compute_swd = (ev_metric == "swd" || ev_metric == "both");

      const auto prior = trajgen::build_prior(spec);
      std::unique_ptr<trajgen::PredictorInterface> predictor;
      if (ev_predictor == "oracle") {
        predictor = trajgen::make_oracle_predictor(prior, cfg.n_pred);
      } else {
        predictor =
            trajgen::make_constant_velocity_predictor(cfg.n_pred, cfg.cv_sigma);
      }
      const auto report = trajgen::run_eval(spec, cfg, *predictor);
      trajgen::write_text_file(ev_out, trajgen::format_report(report));
      std::ostringstream timing;
      timing << "nll_seconds=" << report.nll_seconds
             << " swd_seconds=" << report.swd_seconds << " ratio="
             << (report.nll_seconds > 0.0
                     ? report.swd_seconds / report.nll_seconds
                     : 0.0)
             << " simd_backend="
             << (trajgen::simd::active_backend() ==
                         trajgen::simd::Backend::kAvx2
                     ? "avx2"
                     : "scalar");
      if (!ev_timing_out.empty()) {
        trajgen::write_text_file(ev_timing_out, timing.str() + "\n");
      }
      std::cout << "report written to " << ev_out << "\n";
      if (cfg.compute_nll) std::cout << "aggregate nll " << report.nll_mean << "\n";
      if (cfg.compute_swd) std::cout << "aggregate swd " << report.swd_mean << "\n";
      std::cout << "timing: " << timing.str() << "\n";
    } else if (*plot) {
      const DatasetSpec spec = trajgen::load_spec_file(plot_spec);
      const auto prior = trajgen::build_prior(spec);
      const std::uint64_t seed = plot_seed_set ? plot_seed : spec.seed;
      auto written = trajgen::export_prior_plot_data(prior, plot_out,
                                                     plot_samples, seed);
      if (!plot_obs.empty()) {
        const auto obs = load_observation(plot_obs);
        const int max_offset = prior.min_length() -
                               static_cast<int>(obs.size()) - plot_npred;
        if (max_offset < 0) {
          throw trajgen::WindowError(
              "observation plus horizon exceeds the shortest component");
        }
        const auto offsets =
            trajgen::match_subsequence(prior, obs, max_offset);
        const auto posterior =
            trajgen::ground_truth_posterior(prior, obs, offsets, plot_npred);
        auto more = trajgen::export_posterior_plot_data(posterior, prior.dim,
                                                        plot_out);
        written.insert(written.end(), more.begin(), more.end());
      }
      for (const auto& p : written) std::cout << "wrote " << p << "\n";
    }
  } catch (const trajgen::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
