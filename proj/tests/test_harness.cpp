#include "trajgen/harness.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "trajgen/export.hpp"
#include "trajgen/rng.hpp"

using namespace trajgen;
using namespace trajgen::testing;

namespace {

std::string data_path(const std::string& name) {
  return std::string(TRAJGEN_DATA_DIR) + "/" + name;
}

DatasetSpec reference_spec() {
  return load_spec_file(data_path("reference_scene.json"));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Minimal one-component spec document used to exercise parse errors.
std::string tiny_spec(const std::string& weight, const std::string& joint,
                      const std::string& first_interior) {
  return std::string(R"({
    "format_version": 1,
    "name": "tiny",
    "dimension": 2,
    "seed": 7,
    "components": [
      {
        "weight": )") + weight + R"(,
        "profile": "uniform_param",
        "length": 6,
        "segments": [
          {"control_points": [
            {"mean": [0, 0], "cov": [[0.01, 0], [0, 0.01]]},
            {"mean": [1, 0], "cov": [[0.01, 0], [0, 0.01]]},
            {"mean": [2, 0], "cov": [[0.01, 0], [0, 0.01]]}
          ]},
          {"joint": ")" + joint + R"(", "control_points": [
            )" + first_interior + R"(,
            {"mean": [4, 0], "cov": [[0.01, 0], [0, 0.01]]}
          ]}
        ]
      }
    ]
  })";
}

SwConfig fast_sw() {
  SwConfig cfg;
  cfg.samples = 512;
  cfg.projections = 32;
  return cfg;
}

class BrokenPredictor final : public PredictorInterface {
 public:
  PredictionDistribution predict(
      const std::vector<Eigen::VectorXd>&) const override {
    PredictionDistribution out;
    out.dim = 2;
    out.steps.emplace_back(GaussianMixture(
        {1.0}, {MvGaussian(Eigen::Vector2d::Zero(),
                           Eigen::Matrix2d::Identity())}));
    return out;  // horizon 1 regardless of the configured n_pred
  }
  std::string name() const override { return "broken"; }
};

}  // namespace

TEST_CASE("reference scene parses") {
  const auto spec = reference_spec();
  CHECK(spec.component_count() == 3);
  CHECK(spec.dim == 2);
  CHECK(spec.name == "three_paths");
  double sum = 0.0;
  for (const auto& c : spec.components) {
    CHECK(c.length == 19);
    CHECK(c.profile == VelocityProfile::ConstantSpeed);
    sum += c.weight;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spec parse errors carry locations") {
  const std::string good_first =
      R"({"mean": [3, 0], "cov": [[0.01, 0], [0, 0.01]]})";
  SUBCASE("bad weight sum") {
    CHECK_THROWS_WITH_AS(parse_spec(tiny_spec("0.9", "c0", good_first)),
                         doctest::Contains("weights sum"), SpecError);
  }
  SUBCASE("non-collinear c1 joint names the joint") {
    const auto doc = tiny_spec("1.0", "c1", R"({"mean": [3, 0.4]})");
    CHECK_THROWS_WITH_AS(parse_spec(doc),
                         doctest::Contains("segments[1].joint"), SpecError);
  }
  SUBCASE("constrained point must not carry a covariance") {
    const auto doc = tiny_spec("1.0", "c1", good_first);
    CHECK_THROWS_WITH_AS(parse_spec(doc), doctest::Contains("derived"),
                         SpecError);
  }
  SUBCASE("unknown profile") {
    auto doc = tiny_spec("1.0", "c0", good_first);
    doc.replace(doc.find("uniform_param"), 13, "warp_speed999");
    CHECK_THROWS_AS(parse_spec(doc), SpecError);
  }
  SUBCASE("not json") {
    CHECK_THROWS_AS(parse_spec("not json at all"), SpecError);
  }
}

TEST_CASE("collinear c1 joint parses and derives the constrained covariance") {
  const auto doc = tiny_spec("1.0", "c1", R"({"mean": [3, 0]})");
  const auto spec = parse_spec(doc);
  const auto& seg2 = spec.components[0].curve.segments()[1];
  // s = 1: derived covariance (1+s)^2 Sigma_C + s^2 Sigma_D = 5 * 0.01 I.
  CHECK(seg2.control_points()[1].cov.isApprox(
      0.05 * Eigen::Matrix2d::Identity(), 1e-12));
}

TEST_CASE("prior built from the reference scene") {
  const auto prior = build_prior(reference_spec());
  CHECK(prior.component_count() == 3);
  CHECK(prior.min_length() == 19);
  for (int k = 0; k < 3; ++k) {
    CHECK(prior.length(k) == 19);
    CHECK(prior.means[k].size() == 38);
    CHECK(prior.covariances[k].rows() == 38);
  }
}

TEST_CASE("sample_dataset shapes, labels and determinism") {
  const auto prior = build_prior(reference_spec());
  const auto trajs = sample_dataset(prior, 25, 999, 19);
  REQUIRE(trajs.size() == 25);
  for (const auto& t : trajs) {
    CHECK(t.points.size() == 19);
    CHECK(t.component >= 0);
    CHECK(t.component < 3);
  }
  const auto again = sample_dataset(prior, 25, 999, 19);
  for (int i = 0; i < 25; ++i) {
    CHECK(again[i].component == trajs[i].component);
    CHECK(again[i].points[7] == trajs[i].points[7]);
  }
  CHECK_THROWS_AS(sample_dataset(prior, 5, 1, 25), DomainError);
}

TEST_CASE("sample_dataset frequencies follow the weights") {
  const auto prior = build_prior(reference_spec());
  const auto trajs = sample_dataset(prior, 10000, 31337, 19);
  std::vector<int> counts(3, 0);
  for (const auto& t : trajs) counts[t.component]++;
  const double weights[] = {0.40, 0.35, 0.25};
  for (int k = 0; k < 3; ++k) {
    const double freq = counts[k] / 1e4;
    const double sigma = std::sqrt(weights[k] * (1 - weights[k]) / 1e4);
    CHECK(std::abs(freq - weights[k]) < 3.0 * sigma);
  }
}

TEST_CASE("zero-covariance prior samples its mean trajectory") {
  CompositeCurveBuilder b(CurveSegment({cp(0, 0, iso(0.0)), cp(1, 0, iso(0.0)),
                                        cp(2, 0, iso(0.0))}));
  const auto curve = std::move(b).build();
  const auto prior =
      build_prior({curve}, {1.0}, {uniform_schedule(5)});
  const auto trajs = sample_dataset(prior, 1, 42, 5);
  for (int s = 0; s < 5; ++s) {
    CHECK(trajs[0].points[s] ==
          Eigen::VectorXd(prior.means[0].segment(2 * s, 2)));
  }
}

TEST_CASE("match_subsequence recovers mean windows") {
  const auto prior = build_prior(reference_spec());
  const int k = 1, offset = 3, n_obs = 4;
  std::vector<Eigen::VectorXd> obs;
  for (int i = 0; i < n_obs; ++i) {
    obs.push_back(prior.means[k].segment(2 * (offset + i), 2));
  }
  const auto offsets = match_subsequence(prior, obs);
  CHECK(offsets[k] == offset);
}

TEST_CASE("constant observation matches offset zero on a straight path") {
  CompositeCurveBuilder b(CurveSegment({cp(0, 0, iso(0.01)), cp(1, 0, iso(0.01)),
                                        cp(3, 0, iso(0.01))}));
  const auto curve = std::move(b).build();
  const auto prior =
      build_prior({curve}, {1.0}, {constant_speed_schedule(curve, 10)});
  std::vector<Eigen::VectorXd> obs(4, prior.means[0].segment(0, 2));
  CHECK(match_subsequence(prior, obs)[0] == 0);
}

TEST_CASE("noisy windows are recovered almost always") {
  const auto prior = build_prior(reference_spec());
  Pcg64 rng(0xacc);
  int hits = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const int k = static_cast<int>(rng.next_u64() % 3);
    const int offset = static_cast<int>(rng.next_u64() % (19 - 4 + 1));
    std::vector<Eigen::VectorXd> obs;
    for (int i = 0; i < 4; ++i) {
      Eigen::VectorXd p = prior.means[k].segment(2 * (offset + i), 2);
      p[0] += 0.01 * rng.next_normal();
      p[1] += 0.01 * rng.next_normal();
      obs.push_back(p);
    }
    hits += (match_subsequence(prior, obs)[k] == offset);
  }
  CHECK(hits >= 990);
}

TEST_CASE("ground_truth_posterior single component equals direct conditioning") {
  const auto spec = reference_spec();
  DatasetSpec single = spec;
  single.components.erase(single.components.begin() + 1,
                          single.components.end());
  single.components[0].weight = 1.0;
  const auto prior = build_prior(single);
  const int offset = 2, n_obs = 4, n_pred = 6;
  std::vector<Eigen::VectorXd> obs;
  for (int i = 0; i < n_obs; ++i) {
    Eigen::VectorXd p = prior.means[0].segment(2 * (offset + i), 2);
    p[0] += 0.05;
    obs.push_back(p);
  }
  const auto post = ground_truth_posterior(prior, obs, {offset}, n_pred);
  REQUIRE(post.size() == 1);
  CHECK(post.weights[0] == 1.0);
  CHECK(post.dim() == 12);

  // Independent route: window marginal + condition.
  std::vector<int> steps;
  for (int i = 0; i < n_obs + n_pred; ++i) steps.push_back(offset + i);
  const auto window = marginalize(prior.component(0), steps, 2);
  std::vector<int> observed{0, 1, 2, 3};
  Eigen::VectorXd flat(8);
  for (int i = 0; i < 4; ++i) flat.segment(2 * i, 2) = obs[i];
  const auto direct = condition(
      window, IndexPartition::make(n_obs + n_pred, observed), flat, 2);
  CHECK((post.components[0].mean - direct.mean).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((post.components[0].cov - direct.cov).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("corridor observations concentrate the posterior weight") {
  const auto prior = build_prior(reference_spec());
  // Bundled example observation lies in the second path's corridor.
  std::vector<Eigen::VectorXd> obs{v2(2.70354, 0.091828),
                                   v2(3.181915, -0.056552),
                                   v2(3.638296, -0.262888),
                                   v2(4.06628, -0.523057)};
  const auto offsets = match_subsequence(prior, obs, 19 - 4 - 6);
  const auto post = ground_truth_posterior(prior, obs, offsets, 6);
  CHECK(post.weights[1] > 0.99);
}

TEST_CASE("window overflow is rejected") {
  const auto prior = build_prior(reference_spec());
  std::vector<Eigen::VectorXd> obs(4, v2(0, 0));
  CHECK_THROWS_AS(ground_truth_posterior(prior, obs, {16, 0, 0}, 6),
                  WindowError);
}

TEST_CASE("run_eval produces records and the oracle wins") {
  const auto spec = reference_spec();
  EvalConfig cfg;
  cfg.train_count = 20;
  cfg.test_count = 8;
  cfg.sw = fast_sw();
  const auto prior = build_prior(spec);
  auto oracle = make_oracle_predictor(prior, cfg.n_pred);
  auto cv = make_constant_velocity_predictor(cfg.n_pred, cfg.cv_sigma);
  const auto r_oracle = run_eval(spec, cfg, *oracle);
  const auto r_cv = run_eval(spec, cfg, *cv);
  REQUIRE(r_oracle.records.size() == 8);
  CHECK(r_oracle.swd_mean == 0.0);  // content-identical to the ground truth
  CHECK(r_oracle.swd_mean < r_cv.swd_mean);
  CHECK(r_oracle.nll_mean < r_cv.nll_mean);
  for (const auto& rec : r_oracle.records) {
    CHECK(rec.offset >= 0);
    CHECK(rec.offset <= 19 - 10);
    REQUIRE(rec.matched_offsets.size() == 3);
    for (int off : rec.matched_offsets) {
      CHECK(off >= 0);
      CHECK(off <= 19 - 10);
    }
  }
}

TEST_CASE("run_eval is deterministic") {
  const auto spec = reference_spec();
  EvalConfig cfg;
  cfg.train_count = 5;
  cfg.test_count = 3;
  cfg.sw = fast_sw();
  auto cv = make_constant_velocity_predictor(cfg.n_pred, cfg.cv_sigma);
  const auto a = format_report(run_eval(spec, cfg, *cv));
  const auto b = format_report(run_eval(spec, cfg, *cv));
  CHECK(a == b);
}

TEST_CASE("fixed offset policy and window safety") {
  const auto spec = reference_spec();
  auto cv = make_constant_velocity_predictor(6, 0.1);
  for (int fixed : {0, 4, 9}) {
    EvalConfig cfg;
    cfg.train_count = 2;
    cfg.test_count = 2;
    cfg.sw = fast_sw();
    cfg.offset_policy.mode = OffsetPolicy::Mode::Fixed;
    cfg.offset_policy.fixed_offset = fixed;
    const auto rep = run_eval(spec, cfg, *cv);
    for (const auto& rec : rep.records) CHECK(rec.offset == fixed);
  }
  EvalConfig bad;
  bad.offset_policy.mode = OffsetPolicy::Mode::Fixed;
  bad.offset_policy.fixed_offset = 10;  // needs 10 more steps, max is 9
  bad.sw = fast_sw();
  CHECK_THROWS_AS(run_eval(spec, bad, *cv), DomainError);

  // Random configurations never index out of range.
  Pcg64 rng(0x5afe);
  auto cv2 = make_constant_velocity_predictor(1, 0.1);
  for (int trial = 0; trial < 5; ++trial) {
    EvalConfig cfg;
    cfg.n_obs = 1 + static_cast<int>(rng.next_u64() % 6);
    cfg.n_pred = 1 + static_cast<int>(rng.next_u64() % 6);
    cfg.train_count = 1;
    cfg.test_count = 3;
    cfg.sw = fast_sw();
    cfg.offset_policy.seed = rng.next_u64();
    auto pred = make_constant_velocity_predictor(cfg.n_pred, 0.1);
    const auto rep = run_eval(spec, cfg, *pred);
    for (const auto& rec : rep.records) {
      CHECK(rec.offset + cfg.n_obs + cfg.n_pred <= 19);
    }
  }
}

TEST_CASE("run_eval rejects predictor contract violations") {
  const auto spec = reference_spec();
  EvalConfig cfg;
  cfg.train_count = 1;
  cfg.test_count = 1;
  cfg.sw = fast_sw();
  BrokenPredictor broken;
  CHECK_THROWS_WITH_AS(run_eval(spec, cfg, broken),
                       doctest::Contains("horizon"), PredictorError);
}

TEST_CASE("run_eval validates the window against the shortest component") {
  const auto spec = reference_spec();
  EvalConfig cfg;
  cfg.n_obs = 10;
  cfg.n_pred = 10;
  auto cv = make_constant_velocity_predictor(cfg.n_pred, 0.1);
  CHECK_THROWS_AS(run_eval(spec, cfg, *cv), DomainError);
}

TEST_CASE("plot-data exports") {
  const auto prior = build_prior(reference_spec());
  const std::string dir = "/tmp/trajgen_test_plot";
  const auto files = export_prior_plot_data(prior, dir, 4, 11);
  REQUIRE(files.size() == 4);  // 3 component files + samples
  const auto first = slurp(files[0]);
  CHECK(first.rfind("step,mean_x,mean_y,axis_major,axis_minor,angle_rad\n",
                    0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 20);  // header + 19

  // Posterior export: one row per component per step.
  std::vector<Eigen::VectorXd> obs;
  for (int i = 0; i < 4; ++i) {
    obs.push_back(prior.means[0].segment(2 * (2 + i), 2));
  }
  const auto offsets = match_subsequence(prior, obs, 9);
  const auto post = ground_truth_posterior(prior, obs, offsets, 6);
  const auto pfiles = export_posterior_plot_data(post, 2, dir);
  const auto ptext = slurp(pfiles[0]);
  CHECK(std::count(ptext.begin(), ptext.end(), '\n') == 1 + 3 * 6);
}

TEST_CASE("ellipse parameters from a diagonal covariance") {
  GaussianMixture one_step(
      {1.0}, {MvGaussian(v2(0, 0), spd(4.0, 1.0, 0.0))});
  const auto files =
      export_posterior_plot_data(one_step, 2, "/tmp/trajgen_test_plot2");
  const auto text = slurp(files[0]);
  // axis lengths 2*sqrt(4) = 4 and 2*sqrt(1) = 2, major axis along x.
  CHECK(text.find(",4,2,0\n") != std::string::npos);
}

TEST_CASE("prior and report serializations use 17 significant digits") {
  const auto prior = build_prior(reference_spec());
  const auto text = format_prior(prior);
  CHECK(text.rfind("trajgen prior format_version 1\n", 0) == 0);
  CHECK(text.find("weight 0.40000000000000002") != std::string::npos);
}
