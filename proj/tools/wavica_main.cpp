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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wavica/error.hpp"
#include "wavica/experiment.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

// Flags are collected as text and replayed through apply_setting() after the
// config file, so command-line values override file values.
struct FlagSet {
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::string, std::string> values;

  void add(CLI::App& app, const std::string& name, const std::string& key,
           const std::string& help) {
    order.emplace_back(name, key);
    app.add_option(name, values[key], help);
  }
};

void add_common(CLI::App& app, FlagSet& flags, std::string& config, std::string& out) {
  app.add_option("--config", config, "key = value config file (flags override it)");
  app.add_option("--out", out, "output CSV path (default: stdout)");
  flags.add(app, "--dim", "dim", "dimension d");
  flags.add(app, "--nobs", "nobs", "number of observations n");
  flags.add(app, "--j", "j", "resolution j, or 'auto'");
  flags.add(app, "--smoothness", "smoothness", "Besov smoothness s for --j auto (number or inf)");
  flags.add(app, "--besov-p", "besov-p", "Besov p for --j auto");
  flags.add(app, "--wavelet", "wavelet", "D2|D4|D6|D8");
  flags.add(app, "--precision", "precision", "dyadic precision L");
  flags.add(app, "--density", "density",
            "comma-separated densities; '+' gives one per coordinate");
  flags.add(app, "--density-params", "density-params", "e.g. nu=5,shape=2");
  flags.add(app, "--mix", "mix", "identity | random | rotation:<deg>[:a:b] | file:<csv>");
  flags.add(app, "--seed", "seed", "base seed");
  flags.add(app, "--margin", "margin", "unit cube margin in [0, 0.5)");
  flags.add(app, "--threads", "threads", "worker threads");
  flags.add(app, "--cell-budget", "cell-budget", "maximum number of joint cells");
  flags.add(app, "--dump-phi", "dump-phi", "write the phi table as CSV");
  flags.add(app, "--dump-sample", "dump-sample", "write the generated sample as CSV");
}

void add_optimizer(CLI::App& app, FlagSet& flags) {
  flags.add(app, "--max-iter", "max-iter", "maximum iterations");
  flags.add(app, "--tol-contrast", "tol-contrast", "stop when the contrast drops below this");
  flags.add(app, "--tol-grad", "tol-grad", "stop when the gradient norm drops below this");
  flags.add(app, "--fd-step", "fd-step", "finite-difference step");
  flags.add(app, "--rescale", "rescale", "once | per-step");
}

wavica::ExperimentConfig build_config(const std::string& command, const FlagSet& flags,
                                      const std::string& config_path) {
  wavica::ExperimentConfig cfg;
  if (!config_path.empty()) wavica::load_config_file(cfg, config_path);
  cfg.command = command;
  for (const auto& [name, key] : flags.order) {
    const auto it = flags.values.find(key);
    if (it != flags.values.end() && !it->second.empty()) {
      wavica::apply_setting(cfg, key, it->second);
    }
  }
  return cfg;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw wavica::InvalidArgument("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet-contrast independent component analysis"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::string trace_path;

  FlagSet table_flags;
  auto* table = app.add_subcommand("table", "contrast of unmixed and mixed samples over j");
  add_common(*table, table_flags, config, out);
  table_flags.add(*table, "--j-min", "j-min", "first resolution");
  table_flags.add(*table, "--j-max", "j-max", "last resolution");
  table_flags.add(*table, "--dump-coeffs", "dump-coeffs", "write mixed coefficients at j-min");

  FlagSet sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "contrast and Amari error over rotation angles");
  add_common(*sweep, sweep_flags, config, out);
  sweep_flags.add(*sweep, "--sweep-points", "sweep-points", "number of angles");
  sweep_flags.add(*sweep, "--rescale", "rescale", "once | per-step");

  FlagSet demix_flags;
  auto* demix = app.add_subcommand("demix", "minimize the contrast over SO(d)");
  add_common(*demix, demix_flags, config, out);
  add_optimizer(*demix, demix_flags);
  demix_flags.add(*demix, "--runs", "runs", "independent replicates");
  demix_flags.add(*demix, "--input", "input", "demix an external CSV instead");
  demix_flags.add(*demix, "--method", "method", "gradient | sweep");
  demix_flags.add(*demix, "--sweep-points", "sweep-points", "angles for --method sweep");
  demix->add_option("--trace", trace_path, "per-iteration trace CSV path");

  FlagSet validate_flags;
  auto* validate = app.add_subcommand("validate", "run the built-in validation suite");
  add_common(*validate, validate_flags, config, out);
  validate_flags.add(*validate, "--corrupt-filter", "corrupt-filter",
                     "perturb one filter tap (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (table->parsed()) {
      const auto cfg = build_config("table", table_flags, config);
      Output os(out);
      wavica::run_table(cfg, os.stream());
    } else if (sweep->parsed()) {
      const auto cfg = build_config("sweep", sweep_flags, config);
      Output os(out);
      wavica::run_sweep(cfg, os.stream());
    } else if (demix->parsed()) {
      const auto cfg = build_config("demix", demix_flags, config);
      Output summary(out);
      std::ostringstream discard;
      std::unique_ptr<std::ofstream> trace;
      if (!trace_path.empty()) {
        trace = std::make_unique<std::ofstream>(trace_path);
        if (!*trace) throw wavica::InvalidArgument("cannot write '" + trace_path + "'");
      }
      const auto result = wavica::run_demix(
          cfg, trace ? static_cast<std::ostream&>(*trace) : discard, summary.stream());
      for (const auto& run : result.runs) {
        if (run.failed) {
          std::cerr << "replicate " << run.replicate << " failed: " << run.error << '\n';
        }
      }
      for (const auto& s : result.summaries) {
        if (s.runs == 0) return kExitFailure;
      }
    } else if (validate->parsed()) {
      const auto cfg = build_config("validate", validate_flags, config);
      Output os(out);
      const auto report = wavica::run_validate(cfg, os.stream());
      for (const auto& check : report.checks) {
        if (!check.passed) std::cerr << "FAIL " << check.name << ": " << check.detail << '\n';
      }
      if (!report.all_passed()) return kExitFailure;
    }
  } catch (const wavica::InvalidArgument& e) {
    std::cerr << "wavica: " << e.what() << '\n';
    return kExitUsage;
  } catch (const wavica::Error& e) {
    std::cerr << "wavica: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
