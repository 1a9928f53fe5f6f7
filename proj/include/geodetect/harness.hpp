// Copyright 2026 geodetect authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GEODETECT_HARNESS_HPP_
#define GEODETECT_HARNESS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geodetect/divergence.hpp"
#include "geodetect/spectrum.hpp"

namespace geodetect {

enum class ExperimentKind {
  power_curve,
  phase_diagram,
  null_calibration,
  chi2_scan,
  wishart_vs_gaussian,
};

std::string to_string(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::power_curve;
  std::string spectrum_spec;       // power_curve / wishart / null_calibration
  std::vector<long> n_grid;
  double p = 0.5;
  long replicates = 100;
  double false_positive_rate = 0.05;
  std::uint64_t master_seed = 0;
  std::string output_path;         // empty -> in-memory only

  // Sampling channel for geometric graphs: "direct" draws the graph from
  // raw latent inner products, "matrix" thresholds the Wishart sample (the
  // same law by the coupling identity), "auto" switches to matrix at
  // d >= 1e5. Points with d > 1e7 are skipped as over desk-scale budget.
  std::string channel = "auto";
  long threshold_samples = 200000;

  // phase_diagram: family power:<family_d>:<gamma> over gamma_grid.
  long family_d = 0;
  std::vector<double> gamma_grid;

  // chi2_scan.
  std::vector<double> u_grid;
  double chi2_a = 0.0;  // 0 -> default (u^2 n)^{-1/4} clamped to >= 1
  bool allow_unguarded = false;

  void validate() const;
};

ExperimentConfig parse_config(const std::map<std::string, std::string>& kv);
ExperimentConfig parse_config_file(const std::string& path);
std::string config_hash(const ExperimentConfig& cfg);

struct ExperimentRecord {
  std::string config_hash;
  long point = 0;
  long n = 0;
  std::optional<double> gamma;  // family parameter when applicable
  double d_eff = 0.0;
  double signal = 0.0;  // n^3 / d_eff
  long replicate = 0;
  std::string hypothesis;  // "alt" | "null" | "skipped"
  double statistic = 0.0;
  bool reject = false;
  long wall_time_ms = 0;
};

struct Chi2ScanRow {
  std::string config_hash;
  long point = 0;
  long n = 0;
  double u = 0.0;
  double a = 0.0;
  double chi2 = 0.0;
  double chi2_stderr = 0.0;
  double tv_bound = 0.0;
  bool unguarded = false;
  std::int64_t replicates = 0;
  long wall_time_ms = 0;
};

// Per-point aggregate of an experiment's records.
struct PointSummary {
  long point = 0;
  long n = 0;
  std::optional<double> gamma;
  double d_eff = 0.0;
  double signal = 0.0;
  long alt_count = 0;
  long null_count = 0;
  double power = 0.0;
  double power_stderr = 0.0;
  double fpr_hat = 0.0;
  double fpr_stderr = 0.0;
  double null_stat_mean = 0.0;
  double null_stat_variance = 0.0;
  double cdf_gap_tv = 0.0;     // lower bound between alt/null statistic samples
  double cdf_gap_stderr = 0.0;
  bool skipped = false;
};

std::vector<PointSummary> summarize(const std::vector<ExperimentRecord>& records);

// Logistic regression of reject on log(signal); the fitted 50% location is
// the transition-band summary.
struct LogisticFit {
  double intercept = 0.0;
  double slope = 0.0;
  double crossing_signal = 0.0;  // signal with fitted power 1/2
  bool converged = false;
};

LogisticFit fit_power_transition(const std::vector<ExperimentRecord>& records,
                                 std::optional<double> gamma = std::nullopt);

// Experiment runners. Each returns all records for the config (previously
// persisted rows included); completed (point, replicate, hypothesis) keys
// are skipped on rerun. Replicates execute on a worker pool; every record
// is a pure function of (config, point, replicate, hypothesis).
std::vector<ExperimentRecord> run_power_curve(const ExperimentConfig& cfg);
std::vector<ExperimentRecord> run_phase_diagram(const ExperimentConfig& cfg);
std::vector<ExperimentRecord> run_null_calibration(const ExperimentConfig& cfg);
std::vector<ExperimentRecord> run_wishart_vs_gaussian(const ExperimentConfig& cfg);
std::vector<Chi2ScanRow> run_chi2_scan(const ExperimentConfig& cfg);

struct PeelDiagnosticsRow {
  long n = 0;
  double n_cubed = 0.0;
  double sum_term = 0.0;
  double l3_term = 0.0;
  bool below_threshold = false;  // n^3 < d_eff
};

struct PeelDiagnostics {
  bool degenerate = false;
  std::size_t r = 0;
  std::vector<double> u_sequence;
  double d_eff = 0.0;
  double minus_comparison_dim = 0.0;
  std::vector<PeelDiagnosticsRow> rows;
};

// Deterministic tabulation of the peel-bound ingredients over an n grid.
// A degenerate split is reported, not fatal.
PeelDiagnostics run_peel_diagnostics(const Spectrum& s, const std::vector<long>& n_grid);

// Deterministic stream id for a work item; exposed so records can be
// reproduced in isolation.
std::uint64_t record_stream_id(long point, long replicate, const std::string& hypothesis);

}  // namespace geodetect

#endif  // GEODETECT_HARNESS_HPP_
