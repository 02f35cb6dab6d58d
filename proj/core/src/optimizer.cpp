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

#include "wavica/optimizer.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "wavica/error.hpp"
#include "wavica/linalg.hpp"
#include "wavica/preprocessing.hpp"

namespace wavica {
namespace {

constexpr double kGolden = 0.6180339887498948482;
constexpr double kDriftTolerance = 1e-12;

struct LineSearchResult {
  double eta = 0.0;
  double value = 0.0;
  Eigen::MatrixXd w;
};

class LineSearch {
 public:
  LineSearch(const Objective& objective, const Eigen::MatrixXd& w,
             const Eigen::MatrixXd& skew, double start_value,
             std::size_t& evaluations)
      : objective_(objective), w_(w), skew_(skew), evaluations_(evaluations) {
    best_.eta = 0.0;
    best_.value = start_value;
    best_.w = w;
  }

  double at(double eta) {
    Eigen::MatrixXd candidate = exp_skew(-eta * skew_) * w_;
    if (orthogonality_defect(candidate) > kDriftTolerance) {
      candidate = polar_orthonormalize(candidate);
    }
    const double value = objective_(candidate);
    ++evaluations_;
    if (value < best_.value) {
      best_ = {eta, value, std::move(candidate)};
    }
    return value;
  }

  LineSearchResult run(const OptimizerConfig& cfg) {
    const double f0 = best_.value;
    double lo = 0.0;
    double hi = cfg.eta0;
    double f_hi = at(hi);
    if (f_hi < f0) {
      // Grow until the contrast rises again.
      double mid = hi;
      double f_mid = f_hi;
      lo = 0.0;
      for (int step = 0; step < cfg.max_bracket_steps; ++step) {
        const double next = mid * cfg.bracket_growth;
        const double f_next = at(next);
        if (f_next > f_mid) {
          hi = next;
          break;
        }
        lo = mid;
        mid = next;
        f_mid = f_next;
        hi = next;
      }
    }

    double a = lo;
    double b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = at(x1);
    double f2 = at(x2);
    for (int shrink = 0; shrink < cfg.golden_shrinks; ++shrink) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = at(x2);
      }
    }
    return best_;
  }

 private:
  const Objective& objective_;
  const Eigen::MatrixXd& w_;
  const Eigen::MatrixXd& skew_;
  std::size_t& evaluations_;
  LineSearchResult best_;
};

}  // namespace

void OptimizerConfig::validate() const {
  if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
  if (max_iterations < 0) throw InvalidArgument("max_iterations must be >= 0");
  if (!(contrast_tol > 0.0)) throw InvalidArgument("contrast_tol must be positive");
  if (!(grad_tol > 0.0)) throw InvalidArgument("grad_tol must be positive");
  if (!(eta0 > 0.0)) throw InvalidArgument("eta0 must be positive");
  if (!(bracket_growth > 1.0)) throw InvalidArgument("bracket_growth must exceed 1");
  if (max_bracket_steps < 0 || golden_shrinks < 0) {
    throw InvalidArgument("line search budgets must be >= 0");
  }
  if (!(min_improvement > 0.0)) throw InvalidArgument("min_improvement must be positive");
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::contrast_on_entry: return "contrast-on-entry";
    case StopReason::gradient_on_entry: return "gradient-on-entry";
    case StopReason::gradient_small: return "gradient-small";
    case StopReason::max_iterations: return "max-iterations";
    case StopReason::converged: return "converged";
    case StopReason::stalled: return "stalled";
  }
  return "unknown";
}

Eigen::MatrixXd fd_gradient(const Objective& objective, const Eigen::MatrixXd& w,
                            double eps, std::optional<double> base,
                            unsigned workers) {
  if (!(eps > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  const double f0 = base ? *base : objective(w);
  const Eigen::Index rows = w.rows();
  const Eigen::Index total = w.size();
  Eigen::MatrixXd grad(rows, w.cols());

  auto entry = [&](Eigen::Index flat) {
    Eigen::MatrixXd moved = w;
    moved(flat % rows, flat / rows) += eps;
    grad(flat % rows, flat / rows) = (objective(moved) - f0) / eps;
  };

  if (workers <= 1 || total < 2) {
    for (Eigen::Index f = 0; f < total; ++f) entry(f);
  } else {
    std::vector<std::thread> pool;
    const auto count = std::min<Eigen::Index>(workers, total);
    for (Eigen::Index t = 0; t < count; ++t) {
      pool.emplace_back([&, t] {
        for (Eigen::Index f = t; f < total; f += count) entry(f);
      });
    }
    for (auto& th : pool) th.join();
  }
  return grad;
}

Eigen::MatrixXd skew_project(const Eigen::MatrixXd& grad, const Eigen::MatrixXd& w) {
  if (grad.rows() != w.rows() || grad.cols() != w.cols() || w.rows() != w.cols()) {
    throw InvalidArgument("skew_project: shape mismatch");
  }
  // (grad W^T)^T = W grad^T, so forming one product keeps the result
  // exactly antisymmetric.
  const Eigen::MatrixXd m = grad * w.transpose();
  return m - m.transpose();
}

Eigen::MatrixXd exp_skew(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols()) throw InvalidArgument("exp_skew: matrix is not square");
  const double asym = (b + b.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, b.norm())) {
    throw InvalidArgument("exp_skew: matrix is not antisymmetric");
  }
  const Eigen::Index d = b.rows();
  const double norm1 = d == 0 ? 0.0 : b.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  }
  const Eigen::MatrixXd a = b / std::ldexp(1.0, squarings);

  // [6/6] Pade coefficients c_k = (12-k)! 6! / (12! k! (6-k)!).
  constexpr double c[7] = {1.0,
                           1.0 / 2.0,
                           5.0 / 44.0,
                           1.0 / 66.0,
                           1.0 / 792.0,
                           1.0 / 15840.0,
                           1.0 / 665280.0};
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd power = eye;
  Eigen::MatrixXd even = c[0] * eye;
  Eigen::MatrixXd odd = Eigen::MatrixXd::Zero(d, d);
  for (int k = 1; k <= 6; ++k) {
    power = power * a;
    if (k % 2 == 0) {
      even += c[k] * power;
    } else {
      odd += c[k] * power;
    }
  }
  Eigen::MatrixXd r = (even - odd).partialPivLu().solve(even + odd);
  for (int s = 0; s < squarings; ++s) r = r * r;
  return r;
}

DemixTrace minimize(const Objective& objective, const Eigen::MatrixXd& w0,
                    const OptimizerConfig& config) {
  config.validate();
  if (w0.rows() != w0.cols()) throw InvalidArgument("minimize: W0 not square");

  DemixTrace trace;
  DemixState current;
  current.w = w0;
  if (orthogonality_defect(current.w) > kDriftTolerance) {
    current.w = polar_orthonormalize(current.w);
  }
  current.contrast = objective(current.w);
  trace.evaluations = 1;

  if (current.contrast < config.contrast_tol) {
    trace.states.push_back(current);
    trace.reason = StopReason::contrast_on_entry;
    return trace;
  }

  for (int it = 1;; ++it) {
    if (it > config.max_iterations) {
      trace.states.push_back(current);
      trace.reason = StopReason::max_iterations;
      return trace;
    }
    current.grad = fd_gradient(objective, current.w, config.fd_step,
                               current.contrast, config.workers);
    trace.evaluations += static_cast<std::size_t>(current.w.size());
    current.skew = skew_project(current.grad, current.w);

    if (current.grad.norm() < config.grad_tol) {
      trace.states.push_back(current);
      trace.reason = it == 1 ? StopReason::gradient_on_entry
                             : StopReason::gradient_small;
      return trace;
    }

    LineSearch search(objective, current.w, current.skew, current.contrast,
                      trace.evaluations);
    LineSearchResult step = search.run(config);
    if (!(step.value < current.contrast)) {
      trace.states.push_back(current);
      trace.reason = StopReason::stalled;
      return trace;
    }

    const double gain = current.contrast - step.value;
    trace.states.push_back(current);
    current = DemixState{};
    current.w = std::move(step.w);
    current.contrast = step.value;
    current.iteration = it;
    current.eta = step.eta;

    if (gain <= config.min_improvement) {
      trace.states.push_back(current);
      trace.reason = StopReason::converged;
      return trace;
    }
  }
}

RescaleMode parse_rescale_mode(const std::string& text) {
  if (text == "per-step" || text == "per_step") return RescaleMode::per_step;
  if (text == "once") return RescaleMode::once;
  throw InvalidArgument("rescale mode must be 'once' or 'per-step', got '" + text + "'");
}

std::string to_string(RescaleMode mode) {
  return mode == RescaleMode::once ? "once" : "per-step";
}

ContrastObjective::ContrastObjective(Eigen::MatrixXd whitened,
                                     std::shared_ptr<const PhiTable> table, int j,
                                     RescaleMode mode, double margin,
                                     ProjectionOptions projection)
    : whitened_(std::move(whitened)),
      table_(std::move(table)),
      j_(j),
      mode_(mode),
      margin_(margin),
      projection_(projection) {
  if (!table_) throw InvalidArgument("ContrastObjective: null phi table");
  if (j_ < 0) throw InvalidArgument("resolution j must be >= 0");
  if (!(margin_ >= 0.0 && margin_ < 0.5)) {
    throw InvalidArgument("cube margin must lie in [0, 0.5)");
  }
  if (mode_ == RescaleMode::once) {
    radius_ = whitened_.rowwise().norm().maxCoeff();
    if (!(radius_ > 0.0)) throw InvalidArgument("ContrastObjective: degenerate sample");
  }
}

Sample ContrastObjective::transform(const Eigen::MatrixXd& w) const {
  if (w.rows() != whitened_.cols() || w.cols() != whitened_.cols()) {
    throw InvalidArgument("ContrastObjective: W has wrong shape");
  }
  const Eigen::MatrixXd z = whitened_ * w.transpose();
  if (mode_ == RescaleMode::per_step) return to_unit_cube(z, margin_);

  const double scale = (0.5 - margin_) / radius_;
  Eigen::MatrixXd out = (z.array() * scale + 0.5).cwiseMax(0.0).cwiseMin(1.0);
  return Sample(std::move(out));
}

double ContrastObjective::operator()(const Eigen::MatrixXd& w) const {
  return contrast_of(transform(w), *table_, j_, projection_);
}

std::optional<std::string> fd_step_warning(double eps, int precision, int j) {
  const double step = std::ldexp(1.0, -(precision + j));
  if (eps >= step) return std::nullopt;
  return "finite-difference step " + std::to_string(eps) +
         " is below the dyadic resolution 2^-(L+j) = " + std::to_string(step) +
         "; the gradient may vanish. Raise --fd-step or --precision.";
}

std::vector<SweepPoint> angle_sweep(const Objective& objective, int points) {
  if (points < 1) throw InvalidArgument("angle sweep needs at least one point");
  std::vector<SweepPoint> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double angle = 0.5 * std::numbers::pi * i / points;
    Eigen::MatrixXd w(2, 2);
    w << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    out.push_back({angle, objective(w), w});
  }
  return out;
}

}  // namespace wavica
