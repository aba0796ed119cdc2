// Command line driver: one subcommand per experiment kind, optional key=value
// config file, flag overrides, CSV + SVG emission.

#include <exception>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "spoly/experiments.hpp"

namespace {

struct CliState {
  std::string config_file;
  int n = 0;
  std::string m;
  int trials = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
  double c1 = 0.0, c2 = 0.0, c6 = 0.0;
  double tolerance = 0.0;
  int objectives = 0;
  int jobs = 0;
  bool svg = false;
  std::string out;

  CLI::Option *o_n = nullptr, *o_m = nullptr, *o_trials = nullptr, *o_p = nullptr,
              *o_seed = nullptr, *o_c1 = nullptr, *o_c2 = nullptr, *o_c6 = nullptr,
              *o_tol = nullptr, *o_obj = nullptr, *o_jobs = nullptr, *o_svg = nullptr,
              *o_out = nullptr;
};

void add_common_flags(CLI::App* sub, CliState& st) {
  sub->add_option("--config", st.config_file, "key = value config file, flags override");
  st.o_n = sub->add_option("--n", st.n, "ambient dimension");
  st.o_m = sub->add_option("--m", st.m, "comma-separated intensity list, ascending");
  st.o_trials = sub->add_option("--trials", st.trials, "trials per m value");
  st.o_p = sub->add_option("--p", st.p, "failure probability budget");
  st.o_seed = sub->add_option("--seed", st.seed, "master seed");
  st.o_c1 = sub->add_option("--c1", st.c1, "deviation-scale variance multiplier");
  st.o_c2 = sub->add_option("--c2", st.c2, "deviation-scale linear multiplier");
  st.o_c6 = sub->add_option("--c6", st.c6, "certificate cap scale");
  st.o_tol = sub->add_option("--tolerance", st.tolerance, "geometric check slack");
  st.o_obj = sub->add_option("--objectives", st.objectives, "stitched objectives per instance");
  st.o_jobs = sub->add_option("--jobs", st.jobs, "worker pool size");
  st.o_svg = sub->add_flag("--svg", st.svg, "emit figures for the largest m");
  st.o_out = sub->add_option("--out", st.out, "output directory");
}

int run_kind(spoly::ExperimentKind kind, const CliState& st) {
  spoly::ExperimentConfig config;
  if (!st.config_file.empty()) config = spoly::load_config_file(st.config_file);
  config.kind = kind;
  if (st.o_n->count()) config.n = st.n;
  if (st.o_m->count()) spoly::apply_config_kv(config, "m", st.m);
  if (st.o_trials->count()) config.trials = st.trials;
  if (st.o_p->count()) config.p = st.p;
  if (st.o_seed->count()) config.seed = st.seed;
  if (st.o_c1->count()) config.c1 = st.c1;
  if (st.o_c2->count()) config.c2 = st.c2;
  if (st.o_c6->count()) config.c6 = st.c6;
  if (st.o_tol->count()) config.tolerance = st.tolerance;
  if (st.o_obj->count()) config.objectives = st.objectives;
  if (st.o_jobs->count()) config.jobs = st.jobs;
  if (st.o_svg->count()) config.svg = st.svg;
  if (st.o_out->count()) config.out_dir = st.out;

  spoly::ExperimentResult result = spoly::run_experiment(config);
  int code = spoly::write_experiment_outputs(result);
  for (const auto& line : result.failure_log) std::cerr << "trial failed: " << line << "\n";
  std::cout << spoly::experiment_name(kind) << ": " << result.records.size() << " records, "
            << result.failures << " failures, " << result.violations << " violations -> "
            << config.out_dir << "/records.csv\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random spherical polytope experiments"};
  app.require_subcommand(1);

  const std::pair<const char*, const char*> kinds[] = {
      {"hull-validate", "convex hull structural invariants per instance"},
      {"shadow-scaling", "shadow size on a fixed plane across the m list"},
      {"diameter-relation", "polar vs hull diameter relation and dual walks"},
      {"density", "epsilon-density and cap occupancy of the sample"},
      {"lb-certify", "lower-bound certificates and antipodal distances"},
      {"stitch", "two-segment stitched diameter paths vs exact diameter"},
      {"tails", "analytic tail bounds vs exact and empirical tails"},
  };

  int exit_code = 0;
  std::vector<std::unique_ptr<CliState>> states;
  for (const auto& [name, help] : kinds) {
    CLI::App* sub = app.add_subcommand(name, help);
    states.push_back(std::make_unique<CliState>());
    CliState* st = states.back().get();
    add_common_flags(sub, *st);
    spoly::ExperimentKind kind = spoly::experiment_from_name(name);
    sub->callback([kind, st, &exit_code]() { exit_code = run_kind(kind, *st); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
