#pragma once
// Batch experiment driver: named experiment kinds run over an m-list x trials
// grid with derived per-trial seeds, a trial-level worker pool, versioned CSV
// records/summary emission, optional figures and log-log scaling fits.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spoly/common.hpp"

namespace spoly {

enum class ExperimentKind {
  kHullValidate,     // hull structural invariants per instance
  kShadowScaling,    // |S| for a fixed coordinate plane
  kDiameterRelation, // diam(P) vs (n-1)(diam(Q)-2) and dual-walk length
  kDensity,          // eps-density and sup-occupancy of the sample
  kLbCertify,        // lower-bound certificates and antipodal distances
  kStitch,           // stitched two-segment diameter paths vs exact diameter
  kTails,            // analytic tail bounds vs exact/empirical tails
};

ExperimentKind experiment_from_name(const std::string& name);  // DomainError
const char* experiment_name(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kHullValidate;
  int n = 3;
  std::vector<double> m_list{100.0};  // nonempty, strictly ascending
  int trials = 1;
  double p = 1e-3;
  std::uint64_t seed = 1;
  double c1 = 1.0;          // deviation-scale variance multiplier
  double c2 = 1.0;          // deviation-scale linear multiplier
  double c6 = 6.0;          // certificate cap scale, eps = c6 m^{-1/(n-1)}
  double tolerance = 1e-9;  // slack for exact-arithmetic style checks
  int objectives = 50;      // stitched objectives per instance
  int jobs = 1;
  bool svg = false;
  std::string out_dir = "out";

  void validate() const;  // DomainError when any invariant fails
};

// One `key = value` assignment (key `m` takes a comma-separated list);
// unknown keys raise DomainError.
void apply_config_kv(ExperimentConfig& config, const std::string& key,
                     const std::string& value);

// key = value file with #-comments and optional [section] headers.
ExperimentConfig load_config_file(const std::string& path);  // IoError

struct ExperimentRecord {
  double m = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;      // derived per-trial seed
  std::vector<double> values;  // one entry per schema column
  double wall_ms = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;  // log y = slope log m + intercept
  double r2 = 1.0;         // 1 when the per-m means are constant
};

// Ordinary least squares in log-log space on the per-m means of (m, y)
// samples. Requires >= 3 distinct m values and positive means
// (InsufficientDataError), positive m (DomainError).
FitResult fit_exponent(const std::vector<std::pair<double, double>>& samples);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> columns;       // schema between seed and wall_ms
  std::vector<ExperimentRecord> records;  // sorted by (m, trial)
  std::size_t failures = 0;               // trials dropped by exceptions
  std::size_t violations = 0;             // hard invariant violations
  std::vector<std::string> failure_log;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// (m, column) samples over all records; DomainError for unknown columns.
std::vector<std::pair<double, double>> metric_samples(const ExperimentResult& result,
                                                      const std::string& column);

// records.csv and summary.csv under config.out_dir. Returns the process exit
// code: 0 iff no hard invariant was violated. Throws IoError on write errors.
int write_experiment_outputs(const ExperimentResult& result);

}  // namespace spoly
