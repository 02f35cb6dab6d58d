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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wavica/projection.hpp"
#include "wavica/wavelet.hpp"

namespace wavica {

using Objective = std::function<double(const Eigen::MatrixXd&)>;

struct OptimizerConfig {
  double fd_step = 1e-2;
  int max_iterations = 20;
  /// Exit on entry below this contrast.
  double contrast_tol = 1e-5;
  /// Stop when ||grad||_F falls below this.
  double grad_tol = 1e-6;
  /// Line search: first trial step, bracket growth, max growth steps,
  /// golden-section shrinks.
  double eta0 = 1e-2;
  double bracket_growth = 2.0;
  int max_bracket_steps = 40;
  int golden_shrinks = 20;
  /// An accepted step must lower the contrast by more than this to continue.
  double min_improvement = 1e-12;
  /// Objective evaluations inside fd_gradient run on this many threads.
  unsigned workers = 1;

  void validate() const;
};

enum class StopReason {
  contrast_on_entry,
  gradient_on_entry,
  gradient_small,
  max_iterations,
  converged,
  stalled,
};

std::string to_string(StopReason reason);

/// One exposed iterate. `grad` and `skew` are the gradients evaluated at
/// `w`; they are empty when the run ended before computing them.
struct DemixState {
  Eigen::MatrixXd w;
  double contrast = 0.0;
  Eigen::MatrixXd grad;
  Eigen::MatrixXd skew;
  int iteration = 0;
  double eta = 0.0;  // step that produced this iterate
};

struct DemixTrace {
  std::vector<DemixState> states;
  StopReason reason = StopReason::max_iterations;
  std::size_t evaluations = 0;

  const DemixState& final_state() const { return states.back(); }
  /// Number of accepted steps.
  int iterations() const { return static_cast<int>(states.size()) - 1; }
};

/// Forward differences [J(W + eps E_ab) - J(W)] / eps over all entries of W,
/// without re-orthogonalizing the perturbed matrix. `base` is J(W) when
/// already known.
Eigen::MatrixXd fd_gradient(const Objective& objective, const Eigen::MatrixXd& w,
                            double eps, std::optional<double> base = std::nullopt,
                            unsigned workers = 1);

/// grad W^T - W grad^T, antisymmetric by construction.
Eigen::MatrixXd skew_project(const Eigen::MatrixXd& grad, const Eigen::MatrixXd& w);

/// Matrix exponential of an antisymmetric matrix by scaling and squaring of
/// the [6/6] Pade approximant. Throws InvalidArgument if
/// ||B + B^T||_F > 1e-10 max(1, ||B||_F).
Eigen::MatrixXd exp_skew(const Eigen::MatrixXd& b);

/// Steepest descent on SO(d) along geodesics W' = exp(-eta grad_B) W with a
/// bracketing + golden-section line search on eta.
DemixTrace minimize(const Objective& objective, const Eigen::MatrixXd& w0,
                    const OptimizerConfig& config);

enum class RescaleMode {
  /// Fit a min-max cube map to every candidate W Y.
  per_step,
  /// One isotropic map chosen so every rotation of Y stays in the cube.
  once,
};

RescaleMode parse_rescale_mode(const std::string& text);
std::string to_string(RescaleMode mode);

/// W -> contrast of the cube-mapped rotated sample W Y.
class ContrastObjective {
 public:
  ContrastObjective(Eigen::MatrixXd whitened,
                    std::shared_ptr<const PhiTable> table, int j,
                    RescaleMode mode = RescaleMode::once, double margin = 0.0,
                    ProjectionOptions projection = {});

  double operator()(const Eigen::MatrixXd& w) const;
  /// The sample handed to the projection for a given W.
  Sample transform(const Eigen::MatrixXd& w) const;

  int dim() const { return static_cast<int>(whitened_.cols()); }
  int resolution() const { return j_; }
  const PhiTable& table() const { return *table_; }

 private:
  Eigen::MatrixXd whitened_;
  std::shared_ptr<const PhiTable> table_;
  int j_;
  RescaleMode mode_;
  double margin_;
  ProjectionOptions projection_;
  double radius_ = 1.0;
};

/// Describes the problem when eps is too small to move points across one
/// dyadic step of the table at resolution j, i.e. eps < 2^-(L+j).
std::optional<std::string> fd_step_warning(double eps, int precision, int j);

struct SweepPoint {
  double angle = 0.0;  // radians in [0, pi/2)
  double contrast = 0.0;
  Eigen::MatrixXd w;
};

/// d = 2 only: contrast of planar rotations over `points` equally spaced
/// angles of [0, pi/2).
std::vector<SweepPoint> angle_sweep(const Objective& objective, int points);

}  // namespace wavica
