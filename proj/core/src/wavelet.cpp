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

#include "wavica/wavelet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

#include "wavica/error.hpp"

namespace wavica {
namespace {

// Minimum-phase Daubechies filters, sum normalized to sqrt(2).
constexpr std::array<double, 2> kD2 = {
    0.70710678118654752440, 0.70710678118654752440};
constexpr std::array<double, 4> kD4 = {
    0.48296291314453414337, 0.83651630373780790558, 0.22414386804201338103,
    -0.12940952255126038117};
constexpr std::array<double, 6> kD6 = {
    0.33267055295008261600, 0.80689150931109257649, 0.45987750211849157010,
    -0.13501102001025458870, -0.08544127388202666169, 0.03522629188570953660};
constexpr std::array<double, 8> kD8 = {
    0.23037781330889650086,  0.71484657055291564709, 0.63088076792985890788,
    -0.02798376941685985421, -0.18703481171909308408, 0.03084138183556076363,
    0.03288301166688519974,  -0.01059740178506903211};

constexpr int kMaxPrecision = 24;
constexpr int kInverseIterationCap = 200;
constexpr double kResidualTarget = 1e-14;

// Unit-eigenvalue eigenvector of the interior refinement matrix
// M[i][l] = sqrt(2) h_{2i-l}, i, l = 1 .. 2N-2.
Eigen::VectorXd integer_values(const WaveletSpec& spec) {
  const int m = spec.support_len() - 1;
  const double root2 = std::sqrt(2.0);
  Eigen::MatrixXd refine = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    for (int l = 0; l < m; ++l) {
      const int tap = 2 * (i + 1) - (l + 1);
      if (tap >= 0 && tap < static_cast<int>(spec.filter.size())) {
        refine(i, l) = root2 * spec.filter[static_cast<std::size_t>(tap)];
      }
    }
  }

  const Eigen::VectorXcd eig = refine.eigenvalues();
  int near_one = 0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (std::abs(eig[i] - std::complex<double>(1.0, 0.0)) < 1e-6) ++near_one;
  }
  if (near_one != 1) {
    throw NumericalError(spec.name() +
                         ": refinement matrix eigenvalue-1 eigenspace has "
                         "dimension " + std::to_string(near_one));
  }

  // Inverse iteration with a shift just off the target eigenvalue.
  const Eigen::MatrixXd shifted =
      refine - (1.0 - 1e-9) * Eigen::MatrixXd::Identity(m, m);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
  bool converged = false;
  for (int it = 0; it < kInverseIterationCap; ++it) {
    v = lu.solve(v);
    v /= v.norm();
    if ((refine * v - v).norm() <= kResidualTarget) {
      converged = true;
      break;
    }
  }
  if (!converged && (refine * v - v).norm() > 1e3 * kResidualTarget) {
    throw NumericalError(spec.name() + ": inverse iteration did not converge");
  }
  const double total = v.sum();
  if (!std::isfinite(total) || std::abs(total) < 1e-8) {
    throw NumericalError(spec.name() +
                         ": cannot normalize integer values to unit sum");
  }
  return v / total;
}

}  // namespace

std::string WaveletSpec::name() const { return "D" + std::to_string(2 * genus); }

WaveletSpec make_filter(int genus) {
  WaveletSpec spec;
  spec.genus = genus;
  switch (genus) {
    case 1: spec.filter.assign(kD2.begin(), kD2.end()); break;
    case 2: spec.filter.assign(kD4.begin(), kD4.end()); break;
    case 3: spec.filter.assign(kD6.begin(), kD6.end()); break;
    case 4: spec.filter.assign(kD8.begin(), kD8.end()); break;
    default:
      throw InvalidArgument("unsupported wavelet genus " +
                            std::to_string(genus) +
                            "; supported families are D2 (Haar), D4, D6, D8");
  }
  return spec;
}

WaveletSpec parse_wavelet(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "haar" || lower == "d2") return make_filter(1);
  if (lower == "d4") return make_filter(2);
  if (lower == "d6") return make_filter(3);
  if (lower == "d8") return make_filter(4);
  throw InvalidArgument("unknown wavelet '" + std::string(name) +
                        "'; expected D2, D4, D6 or D8");
}

std::vector<std::string> filter_violations(const WaveletSpec& spec) {
  std::vector<std::string> out;
  const auto& h = spec.filter;
  const int len = static_cast<int>(h.size());
  if (len != 2 * spec.genus) {
    out.push_back(spec.name() + ": filter length " + std::to_string(len));
    return out;
  }
  double sum = 0.0;
  for (double v : h) sum += v;
  if (std::abs(sum - std::sqrt(2.0)) > 1e-12) {
    std::ostringstream msg;
    msg << spec.name() << ": sum of taps is off from sqrt(2) by " << sum - std::sqrt(2.0);
    out.push_back(msg.str());
  }
  for (int shift = 0; shift < spec.genus; ++shift) {
    double acc = 0.0;
    for (int k = 0; k + 2 * shift < len; ++k) acc += h[k] * h[k + 2 * shift];
    const double expected = shift == 0 ? 1.0 : 0.0;
    if (std::abs(acc - expected) > 1e-12) {
      std::ostringstream msg;
      msg << spec.name() << ": orthonormality at shift " << shift
          << " gives " << acc;
      out.push_back(msg.str());
    }
  }
  for (int moment = 0; moment < spec.genus; ++moment) {
    double acc = 0.0;
    for (int k = 0; k < len; ++k) {
      acc += ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(k, moment) * h[k];
    }
    if (std::abs(acc) > 1e-10) {
      std::ostringstream msg;
      msg << spec.name() << ": vanishing moment " << moment << " gives "
          << acc;
      out.push_back(msg.str());
    }
  }
  return out;
}

PhiTable::PhiTable(WaveletSpec spec, int precision, std::vector<double> values)
    : spec_(std::move(spec)), precision_(precision), values_(std::move(values)) {
  const auto expected =
      (static_cast<std::size_t>(spec_.support_len()) << precision_) + 1;
  if (values_.size() != expected) {
    throw InvalidArgument("phi table has " + std::to_string(values_.size()) +
                          " entries, expected " + std::to_string(expected));
  }
}

double PhiTable::operator()(double x) const {
  const double r = std::ldexp(x, precision_);
  double idx;
  if (is_haar()) {
    idx = std::floor(r);
  } else {
    idx = r >= 0.0 ? std::ceil(r - 0.5) : std::floor(r + 0.5);
  }
  return at_index(static_cast<std::int64_t>(idx));
}

PhiTable build_phi_table(const WaveletSpec& spec, int precision) {
  if (precision < 1 || precision > kMaxPrecision) {
    throw InvalidArgument("dyadic precision L must lie in [1, " +
                          std::to_string(kMaxPrecision) + "], got " +
                          std::to_string(precision));
  }
  const int support = spec.support_len();
  const std::int64_t octave = std::int64_t{1} << precision;
  std::vector<double> values(static_cast<std::size_t>(support * octave + 1),
                             0.0);

  if (spec.genus == 1) {
    // The refinement relation reproduces the indicator only up to rounding
    // of sqrt(2) * (1/sqrt(2)); write it exactly.
    std::fill(values.begin(), values.end() - 1, 1.0);
    return PhiTable(spec, precision, std::move(values));
  }
  {
    const Eigen::VectorXd interior = integer_values(spec);
    for (int i = 1; i < support; ++i) {
      values[static_cast<std::size_t>(i * octave)] = interior[i - 1];
    }
  }

  const double root2 = std::sqrt(2.0);
  const auto size = static_cast<std::int64_t>(values.size());
  for (int level = 1; level <= precision; ++level) {
    const std::int64_t step = std::int64_t{1} << (precision - level);
    for (std::int64_t i = step; i < size; i += 2 * step) {
      double acc = 0.0;
      for (std::size_t k = 0; k < spec.filter.size(); ++k) {
        const std::int64_t src = 2 * i - static_cast<std::int64_t>(k) * octave;
        if (src >= 0 && src < size) {
          acc += spec.filter[k] * values[static_cast<std::size_t>(src)];
        }
      }
      values[static_cast<std::size_t>(i)] = root2 * acc;
    }
  }
  return PhiTable(spec, precision, std::move(values));
}

std::int64_t dyadic_position(const PhiTable& table, int j, double x) {
  if (j < 0) throw InvalidArgument("resolution j must be >= 0");
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InvalidArgument("coordinate outside [0,1]: " + std::to_string(x));
  }
  const int bits = j + table.precision();
  if (bits > 62) throw InvalidArgument("j + L too large");
  const std::int64_t top = std::int64_t{1} << bits;
  const double r = std::ldexp(x, bits);
  const double p = table.is_haar() ? std::floor(r) : std::ceil(r - 0.5);
  return std::min(static_cast<std::int64_t>(p), top - 1);
}

std::size_t periodized_cells(const PhiTable& table, int j, double x,
                             std::span<CellValue> out) {
  const int support = table.spec().support_len();
  if (out.size() < static_cast<std::size_t>(support) + 1) {
    throw InvalidArgument("periodized_cells: output span too small");
  }
  const std::int64_t pos = dyadic_position(table, j, x);
  const int precision = table.precision();
  const std::int64_t octave = std::int64_t{1} << precision;
  const std::int64_t cells = std::int64_t{1} << j;
  const std::int64_t base = pos >> precision;
  const double scale = std::sqrt(std::ldexp(1.0, j));

  std::size_t count = 0;
  for (std::int64_t c = base - support; c <= base; ++c) {
    const double v = table.at_index(pos - c * octave);
    if (v == 0.0) continue;
    const std::int64_t k = ((c % cells) + cells) % cells;
    std::size_t slot = 0;
    while (slot < count && out[slot].cell != k) ++slot;
    if (slot == count) {
      out[count++] = CellValue{k, v};
    } else {
      out[slot].value += v;
    }
  }
  for (std::size_t i = 0; i < count; ++i) out[i].value *= scale;
  return count;
}

double eval_phi_periodized(const PhiTable& table, int j, std::int64_t k,
                           double x) {
  if (j < 0) throw InvalidArgument("resolution j must be >= 0");
  if (j > 62 || k < 0 || k >= (std::int64_t{1} << j)) {
    throw InvalidArgument("translation k=" + std::to_string(k) +
                          " outside [0, 2^j) for j=" + std::to_string(j));
  }
  std::vector<CellValue> buf(
      static_cast<std::size_t>(table.spec().support_len()) + 1);
  const std::size_t count = periodized_cells(table, j, x, buf);
  for (std::size_t i = 0; i < count; ++i) {
    if (buf[i].cell == k) return buf[i].value;
  }
  return 0.0;
}

void write_phi_csv(const PhiTable& table, std::ostream& os) {
  os << "x,phi\n";
  const auto values = table.values();
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << std::ldexp(static_cast<double>(i), -table.precision()) << ','
       << values[i] << '\n';
  }
  os.precision(old);
}

}  // namespace wavica
