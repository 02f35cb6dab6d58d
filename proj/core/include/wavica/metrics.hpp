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
#include <limits>
#include <span>
#include <vector>

#include "wavica/projection.hpp"
#include "wavica/sources.hpp"
#include "wavica/wavelet.hpp"

namespace wavica {

/// Amari index of a demixing product, raw in [0,1] and scaled to [0,100].
struct AmariScale {
  double raw = 0.0;
  double scaled() const { return 100.0 * raw; }
};

/// Row and column terms of P, normalized by 2d(d-1). Zero iff P is a
/// scaled permutation.
AmariScale amari_index(const Eigen::MatrixXd& p);

/// 100 * amari_index(W N A) for true mixing A, demixing W and whitener N.
double amari_error(const Eigen::MatrixXd& a_true, const Eigen::MatrixXd& w_est,
                   const Eigen::MatrixXd& n_whiten);

/// Histogram form of the Haar contrast: 2^{jd} sum_k (p_k - prod p^l_{k^l})^2
/// with cell index min(floor(2^j x), 2^j - 1).
double haar_contrast_oracle(const Sample& sample, int j);

/// Product kernel of the U/V lemma: `rho` copies of the joint function
/// Phi_{jk}, then one marginal factor phi_{jk^l} per entry of
/// `marginal_axes` (sigma = marginal_axes.size()).
struct KernelSpec {
  std::vector<std::int64_t> k;
  int rho = 1;
  std::vector<int> marginal_axes;

  int arity() const { return rho + static_cast<int>(marginal_axes.size()); }
};

struct UVPair {
  int m = 0;
  double u_stat = 0.0;
  double v_stat = 0.0;
};

/// U-statistic over distinct index tuples and V-statistic over all n^m
/// tuples, both by direct enumeration. Requires m <= 3, n >= m and
/// n^m <= max_terms.
UVPair u_v_statistics(const Sample& sample, const PhiTable& table, int j,
                      const KernelSpec& kernel,
                      double max_terms = 1e10);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  /// Half-width of the 95% normal-approximation interval on the slope.
  double slope_ci95() const { return 1.96 * slope_stderr; }
};

/// Ordinary least squares of ys on xs; needs at least two points.
LinearFit fit_line(std::span<const double> xs, std::span<const double> ys);

struct RiskRow {
  int j = 0;
  double mean = 0.0;
  double truth = 0.0;
  double bias = 0.0;
  double variance = 0.0;
};

struct RiskCurve {
  std::size_t n = 0;
  int d = 0;
  int replicates = 0;
  std::vector<RiskRow> rows;
  /// log(variance) against j d log 2.
  LinearFit variance_fit;
};

/// Monte Carlo mean, bias and variance of the contrast estimator over
/// `replicates` independent unmixed samples, for each j. Uniform sources are
/// used as drawn; other densities are cube-mapped first.
RiskCurve risk_curve(const Density& density, int d, std::span<const int> js,
                     std::size_t n, int replicates, std::uint64_t seed,
                     const PhiTable& table, unsigned workers = 1);

struct UVCurve {
  std::vector<std::size_t> ns;
  std::vector<double> mean_gap;  // mean |U - V|
  LinearFit fit;                 // log mean_gap against log n
};

/// Mean |U - V| across replicates of independent samples at each n.
UVCurve uv_gap_curve(const Density& density, int d, int j,
                     const KernelSpec& kernel, std::span<const std::size_t> ns,
                     int replicates, std::uint64_t seed, const PhiTable& table,
                     unsigned workers = 1);

/// Linear resolution rule 2^j ~ n^{1/(4s'+d)}, with s' = s + d/2 - d/p for
/// 1 <= p <= 2 and s' = s otherwise. s = infinity gives j = 0.
int select_resolution(double n, int d, double s, double p);

inline constexpr double kInfiniteSmoothness = std::numeric_limits<double>::infinity();

/// Runs fn(0..count-1) on up to `workers` threads. Each index is handled by
/// exactly one call, so writing into a slot per index keeps results in
/// index order.
template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn);

}  // namespace wavica

#include "wavica/detail/parallel.hpp"
