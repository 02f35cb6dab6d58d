// Copyright 2026 The wavica Authors
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

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wavica/optimizer.hpp"
#include "wavica/sources.hpp"

namespace wavica {

/// Everything needed to rerun an experiment. Serializes to flat
/// `key = value` text; see apply_setting() for the keys.
struct ExperimentConfig {
  std::string command;
  int dim = 2;
  std::size_t nobs = 10000;
  int j = 3;
  bool j_auto = false;
  double smoothness = kInfinity;  // s for the automatic rule
  double besov_p = 2.0;
  int j_min = 0;
  int j_max = 8;
  int genus = 2;
  int precision = 10;
  /// One entry per experiment row; an entry holds either one density for
  /// every coordinate or one per coordinate ("uniform+exponential").
  std::vector<std::vector<Density>> densities{{Density::make(DensityKind::uniform)}};
  std::string density_params;
  /// Empty picks the command default: rotation:0.5 for `table`, random
  /// otherwise.
  std::string mix;
  std::uint64_t seed = 1;
  int runs = 1;
  OptimizerConfig optimizer;
  std::string out;
  double margin = 0.0;
  RescaleMode rescale = RescaleMode::once;
  std::string input;
  std::size_t cell_budget = std::size_t{1} << 27;
  std::string method = "gradient";
  int sweep_points = 180;
  unsigned threads = 1;
  bool corrupt_filter = false;
  std::string dump_phi;
  std::string dump_sample;
  std::string dump_coeffs;

  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  /// Resolution to use: j, or select_resolution(nobs, dim, s, p) if j_auto.
  int resolution() const;
  MixingSpec mixing_spec() const;
  void validate() const;
};

/// Sets one field from its textual key (dashes or underscores) and value.
/// Throws InvalidArgument for unknown keys or malformed values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Applies every `key = value` line; '#' starts a comment.
void parse_config_text(ExperimentConfig& cfg, std::string_view text);
void load_config_file(ExperimentConfig& cfg, const std::string& path);
std::string to_config_text(const ExperimentConfig& cfg);

std::string density_set_name(const std::vector<Density>& set);

struct TableRow {
  std::string density;
  int j = 0;
  double indep = 0.0;
  double mixed = 0.0;
  double project_seconds = 0.0;
  double contrast_seconds = 0.0;
};

/// Contrast of an unmixed and a mixed sample over j_min..j_max.
std::vector<TableRow> run_table(const ExperimentConfig& cfg, std::ostream& csv);

struct SweepRow {
  std::string density;
  double angle = 0.0;
  double contrast = 0.0;
  double amari = 0.0;
};

/// d = 2: contrast and Amari error d(A, W N) over rotation angles in [0, pi/2).
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, std::ostream& csv);

struct DemixRun {
  std::string density;
  int replicate = 0;
  bool failed = false;
  std::string error;
  bool truth_known = true;
  double amari_start = 0.0;
  double amari_end = 0.0;
  double contrast_start = 0.0;
  double contrast_end = 0.0;
  int iterations = 0;
  StopReason reason = StopReason::max_iterations;
  std::vector<double> contrast_trace;
  std::vector<double> amari_trace;
  std::vector<Eigen::MatrixXd> w_trace;
  Eigen::MatrixXd demixing;  // W N
};

struct DemixSummary {
  std::string density;
  int runs = 0;
  int failed = 0;
  double amari_start = 0.0;
  double amari_end = 0.0;
  double contrast_start = 0.0;
  double contrast_end = 0.0;
  double iterations = 0.0;
};

struct DemixResult {
  std::vector<DemixRun> runs;
  std::vector<DemixSummary> summaries;
};

/// One replicate: generate (or read) X, whiten, minimize, score.
DemixRun run_demix_replicate(const ExperimentConfig& cfg,
                             const std::vector<Density>& densities, int replicate);

/// `runs` replicates per density set. Writes the per-iteration trace to
/// `trace` and the averaged table to `summary`.
DemixResult run_demix(const ExperimentConfig& cfg, std::ostream& trace,
                      std::ostream& summary);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
};

/// Invariant suites, oracle equivalences and slope checks.
ValidationReport run_validate(const ExperimentConfig& cfg, std::ostream& csv);

}  // namespace wavica
