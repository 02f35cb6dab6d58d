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

#include "wavica/metrics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <string>

#include "wavica/error.hpp"
#include "wavica/preprocessing.hpp"

namespace wavica {
namespace {

// Per-observation factor values of one kernel slot.
std::vector<double> kernel_factor(const Sample& sample, const PhiTable& table,
                                  int j, const std::vector<std::int64_t>& k,
                                  int axis /* -1: joint Phi_jk */) {
  const auto n = static_cast<std::size_t>(sample.size());
  const int dim = static_cast<int>(sample.dim());
  std::vector<double> out(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    if (axis < 0) {
      double prod = 1.0;
      for (int l = 0; l < dim; ++l) {
        prod *= eval_phi_periodized(table, j, k[static_cast<std::size_t>(l)],
                                    sample.data()(row, l));
      }
      out[i] = prod;
    } else {
      out[i] = eval_phi_periodized(table, j, k[static_cast<std::size_t>(axis)],
                                   sample.data()(row, axis));
    }
  }
  return out;
}

struct TupleSums {
  double all = 0.0;
  double distinct = 0.0;
};

void enumerate(const std::vector<std::vector<double>>& factors, std::size_t slot,
               std::vector<std::size_t>& chosen, double prefix, TupleSums& sums) {
  const std::size_t n = factors.front().size();
  if (slot == factors.size()) {
    sums.all += prefix;
    bool distinct = true;
    for (std::size_t a = 0; a < chosen.size() && distinct; ++a) {
      for (std::size_t b = a + 1; b < chosen.size(); ++b) {
        if (chosen[a] == chosen[b]) {
          distinct = false;
          break;
        }
      }
    }
    if (distinct) sums.distinct += prefix;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    chosen[slot] = i;
    enumerate(factors, slot + 1, chosen, prefix * factors[slot][i], sums);
  }
}

}  // namespace

AmariScale amari_index(const Eigen::MatrixXd& p) {
  const Eigen::Index d = p.rows();
  if (d != p.cols() || d < 2) {
    throw InvalidArgument("amari_index needs a square matrix with d >= 2");
  }
  const Eigen::MatrixXd a = p.cwiseAbs();
  double total = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double top = a.row(i).maxCoeff();
    if (!(top > 0.0)) throw InvalidArgument("amari_index: zero row");
    total += a.row(i).sum() / top - 1.0;
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    const double top = a.col(j).maxCoeff();
    if (!(top > 0.0)) throw InvalidArgument("amari_index: zero column");
    total += a.col(j).sum() / top - 1.0;
  }
  return AmariScale{total / (2.0 * static_cast<double>(d) * static_cast<double>(d - 1))};
}

double amari_error(const Eigen::MatrixXd& a_true, const Eigen::MatrixXd& w_est,
                   const Eigen::MatrixXd& n_whiten) {
  for (const Eigen::MatrixXd* m : {&a_true, &w_est, &n_whiten}) {
    if (m->rows() != a_true.rows() || m->cols() != a_true.rows()) {
      throw InvalidArgument("amari_error: shape mismatch");
    }
    if (!Eigen::FullPivLU<Eigen::MatrixXd>(*m).isInvertible()) {
      throw InvalidArgument("amari_error: singular matrix");
    }
  }
  return amari_index(w_est * n_whiten * a_true).scaled();
}

double haar_contrast_oracle(const Sample& sample, int j) {
  if (j < 0) throw InvalidArgument("resolution j must be >= 0");
  const auto dim = static_cast<std::size_t>(sample.dim());
  const std::size_t bins = std::size_t{1} << j;
  std::size_t total = 1;
  for (std::size_t l = 0; l < dim; ++l) {
    if (total > (std::size_t{1} << 27) / bins) {
      throw BudgetError("haar_contrast_oracle: too many cells");
    }
    total *= bins;
  }
  std::vector<double> joint(total, 0.0);
  std::vector<std::vector<double>> marginal(dim, std::vector<double>(bins, 0.0));
  const auto& data = sample.data();
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    std::size_t flat = 0;
    for (std::size_t l = 0; l < dim; ++l) {
      const double x = data(i, static_cast<Eigen::Index>(l));
      const auto bin = std::min(static_cast<std::size_t>(std::floor(std::ldexp(x, j))),
                                bins - 1);
      marginal[l][bin] += 1.0;
      flat = flat * bins + bin;
    }
    joint[flat] += 1.0;
  }
  const double n = static_cast<double>(sample.size());
  double sum = 0.0;
  std::vector<std::size_t> k(dim, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double product = 1.0;
    for (std::size_t l = 0; l < dim; ++l) product *= marginal[l][k[l]] / n;
    const double delta = joint[flat] / n - product;
    sum += delta * delta;
    for (std::size_t l = dim; l-- > 0;) {
      if (++k[l] < bins) break;
      k[l] = 0;
    }
  }
  return std::ldexp(sum, j * static_cast<int>(dim));
}

UVPair u_v_statistics(const Sample& sample, const PhiTable& table, int j,
                      const KernelSpec& kernel, double max_terms) {
  const int m = kernel.arity();
  const auto n = static_cast<std::size_t>(sample.size());
  if (kernel.rho < 0 || m < 1) throw InvalidArgument("kernel arity must be >= 1");
  if (m > 3) throw InvalidArgument("kernel arity " + std::to_string(m) + " exceeds 3");
  if (n < static_cast<std::size_t>(m)) {
    throw InvalidArgument("need n >= m for the U-statistic");
  }
  if (std::pow(static_cast<double>(n), m) > max_terms) {
    throw BudgetError("n^m = " + std::to_string(std::pow(static_cast<double>(n), m)) +
                      " kernel terms exceed the enumeration budget");
  }
  if (kernel.k.size() != static_cast<std::size_t>(sample.dim())) {
    throw InvalidArgument("kernel index tuple has wrong dimension");
  }
  for (int axis : kernel.marginal_axes) {
    if (axis < 0 || axis >= sample.dim()) {
      throw InvalidArgument("kernel marginal axis out of range");
    }
  }

  std::vector<std::vector<double>> factors;
  for (int r = 0; r < kernel.rho; ++r) {
    factors.push_back(kernel_factor(sample, table, j, kernel.k, -1));
  }
  for (int axis : kernel.marginal_axes) {
    factors.push_back(kernel_factor(sample, table, j, kernel.k, axis));
  }

  TupleSums sums;
  std::vector<std::size_t> chosen(static_cast<std::size_t>(m));
  enumerate(factors, 0, chosen, 1.0, sums);

  double distinct_count = 1.0;
  for (int a = 0; a < m; ++a) distinct_count *= static_cast<double>(n - static_cast<std::size_t>(a));
  return UVPair{m, sums.distinct / distinct_count,
                sums.all / std::pow(static_cast<double>(n), m)};
}

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidArgument("fit_line needs at least two paired points");
  }
  const double count = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / count;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_line: x values are constant");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (xs.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - fit.intercept - fit.slope * xs[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / (count - 2.0) / sxx);
  }
  return fit;
}

RiskCurve risk_curve(const Density& density, int d, std::span<const int> js,
                     std::size_t n, int replicates, std::uint64_t seed,
                     const PhiTable& table, unsigned workers) {
  if (js.empty()) throw InvalidArgument("risk_curve needs at least one resolution");
  if (replicates < 2) throw InvalidArgument("risk_curve needs at least two replicates");

  const std::size_t reps = static_cast<std::size_t>(replicates);
  std::vector<std::vector<double>> values(reps, std::vector<double>(js.size()));
  const Density one[] = {density};
  parallel_for(reps, workers, [&](std::size_t r) {
    const Eigen::MatrixXd raw = sample_sources(one, d, n, seed, r);
    // Constant columns (n = 1) cannot be min-max fitted; any point of the
    // cube is as good as another there.
    const bool as_drawn = density.kind == DensityKind::uniform || n < 2;
    const Sample sample = as_drawn ? Sample(raw.cwiseMax(0.0).cwiseMin(1.0))
                                   : to_unit_cube(raw);
    for (std::size_t q = 0; q < js.size(); ++q) {
      values[r][q] = contrast_of(sample, table, js[q]);
    }
  });

  RiskCurve curve;
  curve.n = n;
  curve.d = d;
  curve.replicates = replicates;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t q = 0; q < js.size(); ++q) {
    double mean = 0.0;
    for (std::size_t r = 0; r < reps; ++r) mean += values[r][q];
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      var += (values[r][q] - mean) * (values[r][q] - mean);
    }
    var /= static_cast<double>(reps - 1);
    // Unmixed sources: the joint coefficients factor, so C_j = 0.
    RiskRow row{js[q], mean, 0.0, mean, var};
    curve.rows.push_back(row);
    if (var > 0.0) {
      xs.push_back(js[q] * d * std::log(2.0));
      ys.push_back(std::log(var));
    }
  }
  if (xs.size() >= 2 && xs.size() == js.size()) {
    curve.variance_fit = fit_line(xs, ys);
  } else {
    curve.variance_fit.slope = std::numeric_limits<double>::quiet_NaN();
  }
  return curve;
}

UVCurve uv_gap_curve(const Density& density, int d, int j,
                     const KernelSpec& kernel, std::span<const std::size_t> ns,
                     int replicates, std::uint64_t seed, const PhiTable& table,
                     unsigned workers) {
  if (ns.size() < 2) throw InvalidArgument("uv_gap_curve needs at least two sizes");
  if (replicates < 1) throw InvalidArgument("uv_gap_curve needs replicates >= 1");
  UVCurve curve;
  const Density one[] = {density};
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t q = 0; q < ns.size(); ++q) {
    std::vector<double> gaps(static_cast<std::size_t>(replicates));
    parallel_for(gaps.size(), workers, [&](std::size_t r) {
      const Eigen::MatrixXd raw =
          sample_sources(one, d, ns[q], seed, q * 1000003 + r);
      const Sample sample = density.kind == DensityKind::uniform
                                ? Sample(raw)
                                : to_unit_cube(raw);
      const UVPair uv = u_v_statistics(sample, table, j, kernel);
      gaps[r] = std::abs(uv.u_stat - uv.v_stat);
    });
    const double mean =
        std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    curve.ns.push_back(ns[q]);
    curve.mean_gap.push_back(mean);
    xs.push_back(std::log(static_cast<double>(ns[q])));
    ys.push_back(std::log(mean));
  }
  curve.fit = fit_line(xs, ys);
  return curve;
}

int select_resolution(double n, int d, double s, double p) {
  if (!(n >= 1.0)) throw InvalidArgument("select_resolution: n must be >= 1");
  if (d < 1) throw InvalidArgument("select_resolution: d must be >= 1");
  if (!(s > 0.0)) throw InvalidArgument("select_resolution: s must be positive");
  if (!(p >= 1.0)) throw InvalidArgument("select_resolution: p must be >= 1");
  if (std::isinf(s)) return 0;
  const double effective = p <= 2.0 ? s + d / 2.0 - d / p : s;
  const double denom = 4.0 * effective + d;
  if (!(denom > 0.0)) {
    throw InvalidArgument("select_resolution: 4s' + d must be positive");
  }
  const double j = std::round(std::log2(n) / denom);
  return std::max(0, static_cast<int>(j));
}

}  // namespace wavica
