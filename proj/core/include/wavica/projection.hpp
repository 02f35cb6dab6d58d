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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wavica/wavelet.hpp"

namespace wavica {

/// n observations of a d-dimensional signal, every entry in [0,1].
class Sample {
 public:
  /// Throws InvalidArgument naming the first row with an entry outside
  /// [0,1] (or non-finite).
  explicit Sample(Eigen::MatrixXd data);

  Eigen::Index size() const { return data_.rows(); }
  Eigen::Index dim() const { return data_.cols(); }
  const Eigen::MatrixXd& data() const { return data_; }

 private:
  Eigen::MatrixXd data_;
};

struct ProjectionOptions {
  /// Upper bound on the number of joint cells 2^{jd}.
  std::size_t cell_budget = std::size_t{1} << 27;
  /// Observation shards; each gets a private accumulator, merged in shard
  /// order. 1 is sequential and bit-deterministic.
  unsigned workers = 1;
};

/// Empirical scaling coefficients at resolution j: the joint array over
/// k in {0..2^j-1}^d (mixed radix, first coordinate most significant) and
/// one marginal vector of length 2^j per coordinate.
class CoefficientSet {
 public:
  CoefficientSet(int j, int dim, std::size_t n);

  int resolution() const { return j_; }
  int dim() const { return dim_; }
  std::size_t observations() const { return n_; }
  std::int64_t cells_per_axis() const { return std::int64_t{1} << j_; }

  std::span<const double> joint() const { return joint_; }
  std::span<const double> marginal(int axis) const {
    return marginals_[static_cast<std::size_t>(axis)];
  }

  /// Flat joint index of the tuple k.
  std::size_t flat_index(std::span<const std::int64_t> k) const;
  /// Inverse of flat_index.
  std::vector<std::int64_t> tuple_of(std::size_t flat) const;

 private:
  friend CoefficientSet project(const Sample&, const PhiTable&, int,
                                const ProjectionOptions&);

  int j_;
  int dim_;
  std::size_t n_;
  std::vector<double> joint_;
  std::vector<std::vector<double>> marginals_;
};

/// Joint and marginal coefficient estimates; each observation touches at
/// most (2N-1)^d wrapped cells. Throws BudgetError when 2^{jd} exceeds
/// options.cell_budget.
CoefficientSet project(const Sample& sample, const PhiTable& table, int j,
                       const ProjectionOptions& options = {});

/// Sum over all 2^{jd} cells of (joint - product of marginals)^2.
double contrast(const CoefficientSet& coeffs);

/// contrast(project(sample, table, j, options)).
double contrast_of(const Sample& sample, const PhiTable& table, int j,
                   const ProjectionOptions& options = {});

/// CSV with columns k0..k{d-1},alpha followed by marginal rows.
void write_coefficients_csv(const CoefficientSet& coeffs, std::ostream& os);

}  // namespace wavica
