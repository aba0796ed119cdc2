#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "spoly/experiments.hpp"

using namespace spoly;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream is(path);
  REQUIRE(bool(is));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

// Strips the trailing wall-time field from a records.csv data row.
std::string drop_wall(const std::string& row) {
  std::size_t comma = row.find_last_of(',');
  REQUIRE(comma != std::string::npos);
  return row.substr(0, comma);
}

double summary_value(const std::vector<std::string>& lines, const std::string& prefix) {
  for (const auto& l : lines)
    if (l.rfind(prefix, 0) == 0) return std::stod(l.substr(l.find_last_of(',') + 1));
  FAIL("summary row not found: ", prefix);
  return 0.0;
}

}  // namespace

TEST_CASE("fit_exponent recovers exact power laws") {
  std::vector<std::pair<double, double>> pow_half;
  for (double m : {100.0, 400.0, 900.0, 1600.0}) pow_half.emplace_back(m, 7.0 * std::sqrt(m));
  FitResult fit = fit_exponent(pow_half);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<std::pair<double, double>> constant = {
      {10.0, 3.0}, {20.0, 3.0}, {40.0, 3.0}, {80.0, 3.0}};
  FitResult flat = fit_exponent(constant);
  CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.r2 == doctest::Approx(1.0));

  // repeated m values aggregate to per-m means first
  std::vector<std::pair<double, double>> repeated = {
      {10.0, 1.0}, {10.0, 3.0}, {100.0, 2.0}, {100.0, 2.0}, {1000.0, 2.0}};
  FitResult agg = fit_exponent(repeated);
  CHECK(agg.slope == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_exponent({{10.0, 1.0}, {20.0, 2.0}}), InsufficientDataError);
  CHECK_THROWS_AS(fit_exponent({{10.0, 1.0}, {20.0, 0.0}, {40.0, 2.0}}),
                  InsufficientDataError);
  CHECK_THROWS_AS(fit_exponent({{-1.0, 1.0}, {20.0, 1.0}, {40.0, 1.0}}), DomainError);
}

TEST_CASE("config parsing, overrides and validation") {
  ExperimentConfig config;
  apply_config_kv(config, "experiment", "shadow-scaling");
  apply_config_kv(config, " m ", " 250, 500 ,1000 ");
  apply_config_kv(config, "trials", "4");
  apply_config_kv(config, "svg", "true");
  apply_config_kv(config, "seed", "99");
  CHECK(config.kind == ExperimentKind::kShadowScaling);
  CHECK(config.m_list == std::vector<double>{250.0, 500.0, 1000.0});
  CHECK(config.trials == 4);
  CHECK(config.svg);
  CHECK(config.seed == 99);
  config.validate();

  CHECK_THROWS_AS(apply_config_kv(config, "bogus", "1"), DomainError);
  CHECK_THROWS_AS(apply_config_kv(config, "p", "fast"), DomainError);
  CHECK_THROWS_AS(apply_config_kv(config, "svg", "maybe"), DomainError);
  CHECK_THROWS_AS(experiment_from_name("volume"), DomainError);

  ExperimentConfig bad = config;
  bad.m_list = {500.0, 250.0};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.m_list = {};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = config;
  bad.trials = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = config;
  bad.p = 1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = config;
  bad.n = 9;
  CHECK_THROWS_AS(bad.validate(), DomainError);

  fs::path dir = fs::temp_directory_path() / "spoly_cfg_test";
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "exp.cfg");
    os << "# scaling sweep\n[experiment]\nexperiment = lb-certify\nn = 3\n";
    os << "m = 900,1200\ntrials = 2\nseed = 7\nc6 = 6.0\nout = " << (dir / "out").string()
       << "\n";
  }
  ExperimentConfig loaded = load_config_file((dir / "exp.cfg").string());
  CHECK(loaded.kind == ExperimentKind::kLbCertify);
  CHECK(loaded.m_list == std::vector<double>{900.0, 1200.0});
  CHECK(loaded.trials == 2);
  CHECK(loaded.c6 == 6.0);
  CHECK_THROWS_AS(load_config_file((dir / "missing.cfg").string()), IoError);
  {
    std::ofstream os(dir / "broken.cfg");
    os << "experiment lb-certify\n";
  }
  CHECK_THROWS_AS(load_config_file((dir / "broken.cfg").string()), DomainError);
}

TEST_CASE("hull-validate experiment emits one clean row per trial") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kHullValidate;
  config.n = 3;
  config.m_list = {100.0};
  config.trials = 1;
  config.seed = 11;
  ExperimentResult result = run_experiment(config);
  REQUIRE(result.records.size() == 1);
  REQUIRE(result.columns.size() == result.records[0].values.size());
  CHECK(result.failures == 0);
  CHECK(result.violations == 0);
  const ExperimentRecord& rec = result.records[0];
  CHECK(rec.m == 100.0);
  CHECK(rec.trial == 0);
  auto col = [&](const char* name) {
    return metric_samples(result, name)[0].second;
  };
  CHECK(col("euler_defect") == 0.0);
  CHECK(col("ridge_defect") == 0.0);
  CHECK(col("outside_points") == 0.0);
  CHECK(col("origin_ok") == 1.0);
  CHECK(col("M") > 50.0);
  CHECK_THROWS_AS(metric_samples(result, "no_such"), DomainError);
}

TEST_CASE("experiment reruns reproduce records byte-for-byte modulo wall time") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kShadowScaling;
  config.n = 3;
  config.m_list = {60.0, 90.0};
  config.trials = 3;
  config.seed = 321;
  config.jobs = 3;

  fs::path dir = fs::temp_directory_path() / "spoly_repro_test";
  fs::remove_all(dir);

  config.out_dir = (dir / "run1").string();
  ExperimentResult r1 = run_experiment(config);
  CHECK(write_experiment_outputs(r1) == 0);
  config.out_dir = (dir / "run2").string();
  config.jobs = 1;
  ExperimentResult r2 = run_experiment(config);
  CHECK(write_experiment_outputs(r2) == 0);

  auto l1 = read_lines((dir / "run1" / "records.csv").string());
  auto l2 = read_lines((dir / "run2" / "records.csv").string());
  REQUIRE(l1.size() == l2.size());
  REQUIRE(l1.size() >= 3 + 6);  // two header comments + column line + 6 rows
  // header comments embed the config, including out_dir-independent fields only
  CHECK(l1[0] == "# spoly-records v1");
  CHECK(l1[2].rfind("m,trial,seed,", 0) == 0);
  for (std::size_t i = 3; i < l1.size(); ++i) CHECK(drop_wall(l1[i]) == drop_wall(l2[i]));

  // records are sorted by (m, trial)
  REQUIRE(r1.records.size() == 6);
  for (std::size_t i = 1; i < r1.records.size(); ++i) {
    bool ordered = r1.records[i - 1].m < r1.records[i].m ||
                   (r1.records[i - 1].m == r1.records[i].m &&
                    r1.records[i - 1].trial < r1.records[i].trial);
    CHECK(ordered);
  }

  auto summary = read_lines((dir / "run1" / "summary.csv").string());
  CHECK(summary[0] == "# spoly-summary v1");
  CHECK(summary[2] == "section,metric,m,value");
  CHECK(summary_value(summary, "count,violations") == 0.0);
  double mean60 = summary_value(summary, "mean,shadow_size,60");
  CHECK(mean60 > 3.0);
}

TEST_CASE("tails experiment rows all dominate and fits flag thin sweeps") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kTails;
  config.seed = 5;
  fs::path dir = fs::temp_directory_path() / "spoly_tails_test";
  config.out_dir = dir.string();
  ExperimentResult result = run_experiment(config);
  CHECK(result.violations == 0);
  CHECK(result.failures == 0);
  REQUIRE(result.records.size() > 20);
  auto dominated = metric_samples(result, "dominated");
  for (auto [family, ok] : dominated) {
    CHECK(ok == 1.0);
    CHECK(family >= 0.0);
    CHECK(family <= 2.0);
  }
  // empirical frequencies and the analytic bounds stay in [0, ~2]
  for (auto [family, v] : metric_samples(result, "empirical")) CHECK(v >= 0.0);

  CHECK(write_experiment_outputs(result) == 0);
  CHECK(fs::exists(dir / "records.csv"));
  CHECK(fs::exists(dir / "summary.csv"));
}

TEST_CASE("stitch experiment produces covered diameters and an svg") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kStitch;
  config.n = 3;
  config.m_list = {800.0};
  config.trials = 1;
  config.seed = 4040;
  config.objectives = 5;
  config.svg = true;
  fs::path dir = fs::temp_directory_path() / "spoly_stitch_exp";
  fs::remove_all(dir);
  config.out_dir = dir.string();

  ExperimentResult result = run_experiment(config);
  REQUIRE(result.records.size() == 1);
  CHECK(result.violations == 0);
  auto diam = metric_samples(result, "diam_polar")[0].second;
  auto max_len = metric_samples(result, "max_stitched")[0].second;
  CHECK(metric_samples(result, "objectives_done")[0].second == 5.0);
  CHECK(metric_samples(result, "bound_ok")[0].second == 1.0);
  CHECK(diam <= 2.0 * max_len);
  CHECK(fs::exists(dir / "stitch.svg"));
  auto svg = read_lines((dir / "stitch.svg").string());
  CHECK(svg.front().rfind("<svg", 0) == 0);
  CHECK(svg.back() == "</svg>");
}

TEST_CASE("lb-certify experiment records sound certificates") {
  ExperimentConfig config;
  config.kind = ExperimentKind::kLbCertify;
  config.n = 3;
  config.m_list = {900.0};
  config.trials = 2;
  config.seed = 9090;
  config.c6 = 6.0;
  config.svg = true;
  fs::path dir = fs::temp_directory_path() / "spoly_lb_exp";
  fs::remove_all(dir);
  config.out_dir = dir.string();

  ExperimentResult result = run_experiment(config);
  CHECK(result.violations == 0);
  REQUIRE(result.records.size() + result.failures == 2);
  for (auto [m, sound] : metric_samples(result, "sound")) CHECK(sound == 1.0);
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    auto lb = metric_samples(result, "certified_lb")[i].second;
    auto dist = metric_samples(result, "exact_distance")[i].second;
    CHECK(lb <= dist);
  }
  CHECK(fs::exists(dir / "lb-certify.svg"));
}
