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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavica {

/// Daubechies family member D2N: low-pass filter h_0..h_{2N-1} with
/// sum sqrt(2), supported on [0, 2N-1].
struct WaveletSpec {
  int genus = 1;
  std::vector<double> filter;

  int support_len() const { return 2 * genus - 1; }
  std::string name() const;  // "D2", "D4", ...
};

/// Supported genera are 1..4 (D2, D4, D6, D8). Throws InvalidArgument
/// otherwise.
WaveletSpec make_filter(int genus);

/// Parses "D2".."D8" (case-insensitive) or "haar".
WaveletSpec parse_wavelet(std::string_view name);

/// Lists every violated filter invariant (normalization, orthonormality,
/// vanishing moments). Empty when the filter is a valid Daubechies filter.
std::vector<std::string> filter_violations(const WaveletSpec& spec);

/// Values of the scaling function phi at i * 2^-L, i = 0 .. (2N-1) 2^L.
/// Immutable after construction.
class PhiTable {
 public:
  PhiTable(WaveletSpec spec, int precision, std::vector<double> values);

  const WaveletSpec& spec() const { return spec_; }
  int precision() const { return precision_; }
  std::span<const double> values() const { return values_; }

  /// Table entry at index i; zero outside the support.
  double at_index(std::int64_t i) const {
    return (i < 0 || i >= static_cast<std::int64_t>(values_.size()))
               ? 0.0
               : values_[static_cast<std::size_t>(i)];
  }

  /// phi at the nearest tabulated dyadic (ties toward zero); exact
  /// indicator lookup for Haar.
  double operator()(double x) const;

  bool is_haar() const { return spec_.genus == 1; }

 private:
  WaveletSpec spec_;
  int precision_;
  std::vector<double> values_;
};

/// Tabulates phi on the dyadic grid of step 2^-precision: integer values
/// from the unit eigenvector of the refinement matrix, then one octave at
/// a time through phi(x) = sqrt(2) sum_k h_k phi(2x - k).
PhiTable build_phi_table(const WaveletSpec& spec, int precision);

/// One wrapped cell touched by an observation coordinate.
struct CellValue {
  std::int64_t cell = 0;
  double value = 0.0;
};

/// Position of x on the grid of step 2^-(j+L), in [0, 2^(j+L) - 1].
/// Nearest grid point with ties toward zero for N >= 2, floor for Haar.
/// x = 1 is clamped into the last cell.
std::int64_t dyadic_position(const PhiTable& table, int j, double x);

/// Nonzero periodized values phi_{jk}(x) over k in [0, 2^j), with the
/// 2^{j/2} factor applied and wrap-around terms merged. `out` must hold at
/// least support_len() + 1 entries; returns the number written.
std::size_t periodized_cells(const PhiTable& table, int j, double x,
                             std::span<CellValue> out);

/// 2^{j/2} sum_m phi(2^j x - k + m 2^j) read from the table.
double eval_phi_periodized(const PhiTable& table, int j, std::int64_t k,
                           double x);

/// CSV dump with columns x,phi.
void write_phi_csv(const PhiTable& table, std::ostream& os);

}  // namespace wavica
