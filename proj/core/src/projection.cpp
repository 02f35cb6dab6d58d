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

#include "wavica/projection.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <thread>

#include "wavica/error.hpp"

namespace wavica {
namespace {

struct Accumulator {
  std::vector<double> joint;
  std::vector<std::vector<double>> marginals;
};

void accumulate(const Sample& sample, const PhiTable& table, int j,
                Eigen::Index first, Eigen::Index last, Accumulator& acc) {
  const auto dim = static_cast<std::size_t>(sample.dim());
  const std::size_t width = static_cast<std::size_t>(table.spec().support_len()) + 1;
  const std::size_t cells = std::size_t{1} << j;
  const auto& data = sample.data();

  // touched[l * width + t] holds the t-th touched cell of coordinate l.
  std::vector<CellValue> touched(dim * width);
  std::vector<std::size_t> counts(dim);
  std::vector<std::size_t> cursor(dim);
  std::vector<double> prefix(dim + 1);
  std::vector<std::size_t> offset(dim + 1);

  for (Eigen::Index i = first; i < last; ++i) {
    bool empty = false;
    for (std::size_t l = 0; l < dim; ++l) {
      const std::span<CellValue> slot(touched.data() + l * width, width);
      counts[l] = periodized_cells(table, j, data(i, static_cast<Eigen::Index>(l)), slot);
      for (std::size_t t = 0; t < counts[l]; ++t) {
        acc.marginals[l][static_cast<std::size_t>(slot[t].cell)] += slot[t].value;
      }
      empty = empty || counts[l] == 0;
    }
    if (empty) continue;

    // Odometer over the tensor product of touched cells.
    std::fill(cursor.begin(), cursor.end(), 0);
    prefix[0] = 1.0;
    offset[0] = 0;
    std::size_t level = 0;
    bool more = true;
    while (more) {
      for (; level < dim; ++level) {
        const CellValue& cv = touched[level * width + cursor[level]];
        prefix[level + 1] = prefix[level] * cv.value;
        offset[level + 1] = offset[level] * cells + static_cast<std::size_t>(cv.cell);
      }
      acc.joint[offset[dim]] += prefix[dim];
      more = false;
      for (std::size_t l = dim; l-- > 0;) {
        if (++cursor[l] < counts[l]) {
          level = l;
          more = true;
          break;
        }
        cursor[l] = 0;
      }
    }
  }
}

}  // namespace

Sample::Sample(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.cols() < 1) throw InvalidArgument("sample needs at least one column");
  if (data_.rows() < 1) throw InvalidArgument("sample needs at least one row");
  for (Eigen::Index i = 0; i < data_.rows(); ++i) {
    for (Eigen::Index l = 0; l < data_.cols(); ++l) {
      const double v = data_(i, l);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("sample row " + std::to_string(i) +
                              " has entry " + std::to_string(v) +
                              " outside [0,1] in column " + std::to_string(l));
      }
    }
  }
}

CoefficientSet::CoefficientSet(int j, int dim, std::size_t n)
    : j_(j), dim_(dim), n_(n) {
  const std::size_t cells = std::size_t{1} << j;
  std::size_t total = 1;
  for (int l = 0; l < dim; ++l) total *= cells;
  joint_.assign(total, 0.0);
  marginals_.assign(static_cast<std::size_t>(dim), std::vector<double>(cells, 0.0));
}

std::size_t CoefficientSet::flat_index(std::span<const std::int64_t> k) const {
  if (k.size() != static_cast<std::size_t>(dim_)) {
    throw InvalidArgument("index tuple has wrong dimension");
  }
  const auto cells = cells_per_axis();
  std::size_t flat = 0;
  for (auto v : k) {
    if (v < 0 || v >= cells) throw InvalidArgument("index tuple out of range");
    flat = flat * static_cast<std::size_t>(cells) + static_cast<std::size_t>(v);
  }
  return flat;
}

std::vector<std::int64_t> CoefficientSet::tuple_of(std::size_t flat) const {
  const auto cells = static_cast<std::size_t>(cells_per_axis());
  std::vector<std::int64_t> k(static_cast<std::size_t>(dim_));
  for (int l = dim_ - 1; l >= 0; --l) {
    k[static_cast<std::size_t>(l)] = static_cast<std::int64_t>(flat % cells);
    flat /= cells;
  }
  return k;
}

CoefficientSet project(const Sample& sample, const PhiTable& table, int j,
                       const ProjectionOptions& options) {
  if (j < 0) throw InvalidArgument("resolution j must be >= 0");
  const int dim = static_cast<int>(sample.dim());
  // 2^{jd} against the budget, without overflow.
  if (static_cast<double>(j) * dim > 62.0 ||
      (std::size_t{1} << (j * dim)) > options.cell_budget) {
    throw BudgetError("2^(j*d) = 2^" + std::to_string(j * dim) +
                      " joint cells exceed the cell budget of " +
                      std::to_string(options.cell_budget));
  }

  CoefficientSet out(j, dim, static_cast<std::size_t>(sample.size()));
  const Eigen::Index n = sample.size();
  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(n)));

  if (workers == 1) {
    Accumulator acc{std::move(out.joint_), std::move(out.marginals_)};
    accumulate(sample, table, j, 0, n, acc);
    out.joint_ = std::move(acc.joint);
    out.marginals_ = std::move(acc.marginals);
  } else {
    std::vector<Accumulator> shards(workers,
                                    Accumulator{out.joint_, out.marginals_});
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const Eigen::Index first = n * w / workers;
      const Eigen::Index last = n * (w + 1) / workers;
      pool.emplace_back([&, w, first, last] {
        accumulate(sample, table, j, first, last, shards[w]);
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& shard : shards) {
      for (std::size_t c = 0; c < out.joint_.size(); ++c) out.joint_[c] += shard.joint[c];
      for (std::size_t l = 0; l < out.marginals_.size(); ++l) {
        for (std::size_t c = 0; c < out.marginals_[l].size(); ++c) {
          out.marginals_[l][c] += shard.marginals[l][c];
        }
      }
    }
  }

  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : out.joint_) v *= inv;
  for (auto& m : out.marginals_) {
    for (double& v : m) v *= inv;
  }
  return out;
}

double contrast(const CoefficientSet& coeffs) {
  const int dim = coeffs.dim();
  const auto cells = static_cast<std::size_t>(coeffs.cells_per_axis());
  const auto joint = coeffs.joint();
  std::vector<std::size_t> k(static_cast<std::size_t>(dim), 0);
  double total = 0.0;
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    double product = 1.0;
    for (int l = 0; l < dim; ++l) {
      product *= coeffs.marginal(l)[k[static_cast<std::size_t>(l)]];
    }
    const double delta = joint[flat] - product;
    total += delta * delta;
    for (int l = dim - 1; l >= 0; --l) {
      if (++k[static_cast<std::size_t>(l)] < cells) break;
      k[static_cast<std::size_t>(l)] = 0;
    }
  }
  return total;
}

double contrast_of(const Sample& sample, const PhiTable& table, int j,
                   const ProjectionOptions& options) {
  return contrast(project(sample, table, j, options));
}

void write_coefficients_csv(const CoefficientSet& coeffs, std::ostream& os) {
  const int dim = coeffs.dim();
  const auto old = os.precision(17);
  os << "kind,axis";
  for (int l = 0; l < dim; ++l) os << ",k" << l;
  os << ",alpha\n";
  for (std::size_t flat = 0; flat < coeffs.joint().size(); ++flat) {
    os << "joint,";
    for (auto v : coeffs.tuple_of(flat)) os << ',' << v;
    os << ',' << coeffs.joint()[flat] << '\n';
  }
  for (int l = 0; l < dim; ++l) {
    const auto m = coeffs.marginal(l);
    for (std::size_t c = 0; c < m.size(); ++c) {
      os << "marginal," << l;
      for (int q = 0; q < dim; ++q) os << ',' << (q == l ? std::to_string(c) : "");
      os << ',' << m[c] << '\n';
    }
  }
  os.precision(old);
}

}  // namespace wavica
