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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "wavica/error.hpp"
#include "wavica/wavelet.hpp"

namespace wavica {
namespace {

// Cascade iteration on the dyadic grid, started from the Haar box. Shares
// nothing with the eigenvector construction in the library.
std::vector<double> cascade_phi(const WaveletSpec& spec, int L, int sweeps) {
  const int support = spec.support_len();
  const std::int64_t octave = std::int64_t{1} << L;
  const std::int64_t size = support * octave + 1;
  std::vector<double> cur(static_cast<std::size_t>(size), 0.0);
  for (std::int64_t i = 0; i < octave; ++i) cur[static_cast<std::size_t>(i)] = 1.0;
  std::vector<double> next(cur.size());
  for (int s = 0; s < sweeps; ++s) {
    for (std::int64_t i = 0; i < size; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < spec.filter.size(); ++k) {
        const std::int64_t idx = 2 * i - static_cast<std::int64_t>(k) * octave;
        if (idx >= 0 && idx < size) acc += spec.filter[k] * cur[static_cast<std::size_t>(idx)];
      }
      next[static_cast<std::size_t>(i)] = std::numbers::sqrt2 * acc;
    }
    cur.swap(next);
  }
  return cur;
}

TEST(Filter, HaarTaps) {
  const WaveletSpec haar = make_filter(1);
  ASSERT_EQ(haar.filter.size(), 2u);
  EXPECT_DOUBLE_EQ(haar.filter[0], 1.0 / std::numbers::sqrt2);
  EXPECT_DOUBLE_EQ(haar.filter[1], 1.0 / std::numbers::sqrt2);
  EXPECT_EQ(haar.support_len(), 1);
  EXPECT_EQ(haar.name(), "D2");
}

TEST(Filter, D4ClosedForm) {
  const WaveletSpec d4 = make_filter(2);
  const double s3 = std::sqrt(3.0);
  const double den = 4.0 * std::numbers::sqrt2;
  const double expected[] = {(1 + s3) / den, (3 + s3) / den, (3 - s3) / den, (1 - s3) / den};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(d4.filter[k], expected[k], 1e-15);
  EXPECT_NEAR(d4.filter[0], 0.482962913145, 1e-12);
}

TEST(Filter, AllFamiliesSatisfyInvariants) {
  for (int genus = 1; genus <= 4; ++genus) {
    const WaveletSpec spec = make_filter(genus);
    EXPECT_EQ(spec.filter.size(), static_cast<std::size_t>(2 * genus));
    EXPECT_EQ(spec.support_len(), 2 * genus - 1);
    double sum = 0.0;
    for (double h : spec.filter) sum += h;
    EXPECT_NEAR(sum, std::numbers::sqrt2, 1e-12) << spec.name();
    EXPECT_TRUE(filter_violations(spec).empty()) << spec.name();
  }
}

TEST(Filter, UnsupportedGenus) {
  EXPECT_THROW(make_filter(0), InvalidArgument);
  EXPECT_THROW(make_filter(5), InvalidArgument);
  try {
    make_filter(7);
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("D8"), std::string::npos);
  }
}

TEST(Filter, ParseNames) {
  EXPECT_EQ(parse_wavelet("D6").genus, 3);
  EXPECT_EQ(parse_wavelet("d8").genus, 4);
  EXPECT_EQ(parse_wavelet("haar").genus, 1);
  EXPECT_THROW(parse_wavelet("D10"), InvalidArgument);
  EXPECT_THROW(parse_wavelet("sym4"), InvalidArgument);
}

TEST(Filter, CorruptedTapIsReported) {
  WaveletSpec d4 = make_filter(2);
  d4.filter[0] += 1e-6;
  EXPECT_FALSE(filter_violations(d4).empty());
}

TEST(PhiTable, HaarIsIndicator) {
  for (int L : {1, 5, 10}) {
    const PhiTable t = build_phi_table(make_filter(1), L);
    const std::int64_t octave = std::int64_t{1} << L;
    ASSERT_EQ(t.values().size(), static_cast<std::size_t>(octave + 1));
    for (std::int64_t i = 0; i < octave; ++i) EXPECT_EQ(t.at_index(i), 1.0);
    EXPECT_EQ(t.at_index(octave), 0.0);
  }
}

TEST(PhiTable, D4IntegerValues) {
  const PhiTable t = build_phi_table(make_filter(2), 10);
  EXPECT_NEAR(t(1.0), (1.0 + std::sqrt(3.0)) / 2.0, 1e-10);
  EXPECT_NEAR(t(2.0), (1.0 - std::sqrt(3.0)) / 2.0, 1e-10);
  EXPECT_EQ(t(0.0), 0.0);
  EXPECT_EQ(t(3.0), 0.0);
}

TEST(PhiTable, EndpointsVanish) {
  for (int genus = 2; genus <= 4; ++genus) {
    const PhiTable t = build_phi_table(make_filter(genus), 8);
    EXPECT_EQ(t.values().front(), 0.0);
    EXPECT_EQ(t.values().back(), 0.0);
  }
}

TEST(PhiTable, MatchesCascadeOracle) {
  for (int genus = 2; genus <= 4; ++genus) {
    const WaveletSpec spec = make_filter(genus);
    const int L = 7;
    const PhiTable t = build_phi_table(spec, L);
    const auto oracle = cascade_phi(spec, L, 400);
    ASSERT_EQ(oracle.size(), t.values().size());
    double worst = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      worst = std::max(worst, std::abs(oracle[i] - t.values()[i]));
    }
    EXPECT_LT(worst, 1e-9) << spec.name();
  }
}

TEST(PhiTable, D6PartitionOfUnityAtHalf) {
  const PhiTable t = build_phi_table(make_filter(3), 10);
  double sum = 0.0;
  for (int k = 0; k <= 5; ++k) sum += t(0.5 + k);
  EXPECT_NEAR(sum, 1.0, 1e-8);
}

TEST(PhiTable, PartitionOfUnityAndMass) {
  const int L = 12;
  for (int genus = 1; genus <= 4; ++genus) {
    const PhiTable t = build_phi_table(make_filter(genus), L);
    const std::int64_t octave = std::int64_t{1} << L;
    for (std::int64_t i = 0; i < octave; i += 37) {
      double sum = 0.0;
      for (int k = 0; k <= 2 * genus - 1; ++k) sum += t.at_index(i + k * octave);
      ASSERT_NEAR(sum, 1.0, 1e-8);
    }
    double mass = 0.0;
    for (double v : t.values()) mass += v;
    EXPECT_NEAR(std::ldexp(mass, -L), 1.0, 1e-6);
  }
}

TEST(PhiTable, DiscreteOrthonormality) {
  const int L = 10;
  for (int genus = 2; genus <= 4; ++genus) {
    const PhiTable t = build_phi_table(make_filter(genus), L);
    const std::int64_t octave = std::int64_t{1} << L;
    const auto size = static_cast<std::int64_t>(t.values().size());
    for (int k = -(2 * genus - 2); k <= 2 * genus - 2; ++k) {
      double acc = 0.0;
      for (std::int64_t i = 0; i < size; ++i) acc += t.at_index(i) * t.at_index(i - k * octave);
      EXPECT_NEAR(std::ldexp(acc, -L), k == 0 ? 1.0 : 0.0, 1e-3);
    }
  }
}

TEST(PhiTable, Deterministic) {
  const PhiTable a = build_phi_table(make_filter(3), 9);
  const PhiTable b = build_phi_table(make_filter(3), 9);
  ASSERT_EQ(a.values().size(), b.values().size());
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
}

TEST(PhiTable, RejectsBadPrecision) {
  EXPECT_THROW(build_phi_table(make_filter(2), 0), InvalidArgument);
}

TEST(PhiTable, NearestDyadicTiesTowardZero) {
  const PhiTable t = build_phi_table(make_filter(2), 2);
  // 1.125 sits halfway between 1.0 and 1.25.
  EXPECT_EQ(t(1.125), t(1.0));
  EXPECT_EQ(t(1.13), t(1.25));
}

TEST(Periodized, HaarExamples) {
  const PhiTable t = build_phi_table(make_filter(1), 10);
  EXPECT_DOUBLE_EQ(eval_phi_periodized(t, 2, 1, 0.3), 2.0);
  EXPECT_EQ(eval_phi_periodized(t, 2, 0, 0.3), 0.0);
}

TEST(Periodized, D4WrapAround) {
  const PhiTable t = build_phi_table(make_filter(2), 10);
  const double expected = std::pow(2.0, 1.5) * t(1.08);
  EXPECT_DOUBLE_EQ(eval_phi_periodized(t, 3, 7, 0.01), expected);
}

TEST(Periodized, RangeErrors) {
  const PhiTable t = build_phi_table(make_filter(2), 10);
  EXPECT_THROW(eval_phi_periodized(t, 2, 4, 0.5), InvalidArgument);
  EXPECT_THROW(eval_phi_periodized(t, 2, -1, 0.5), InvalidArgument);
  EXPECT_THROW(eval_phi_periodized(t, -1, 0, 0.5), InvalidArgument);
}

TEST(Periodized, PartitionOfUnity) {
  for (int genus = 1; genus <= 4; ++genus) {
    const PhiTable t = build_phi_table(make_filter(genus), 10);
    for (int j = 0; j <= 5; ++j) {
      for (double x : {0.0, 0.013, 0.25, 0.5, 0.77, 0.999, 1.0}) {
        double sum = 0.0;
        for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k) {
          sum += eval_phi_periodized(t, j, k, x);
        }
        EXPECT_NEAR(sum, std::pow(2.0, j / 2.0), 1e-6)
            << "genus " << genus << " j " << j << " x " << x;
      }
    }
  }
}

TEST(Periodized, CellsAgreeWithPointEvaluation) {
  const PhiTable t = build_phi_table(make_filter(3), 10);
  std::vector<CellValue> cells(static_cast<std::size_t>(t.spec().support_len() + 1));
  for (int j : {0, 1, 2, 4}) {
    for (double x : {0.0, 0.1, 0.5, 0.93, 1.0}) {
      std::vector<double> dense(static_cast<std::size_t>(1) << j, 0.0);
      const std::size_t count = periodized_cells(t, j, x, cells);
      for (std::size_t c = 0; c < count; ++c) {
        dense[static_cast<std::size_t>(cells[c].cell)] += cells[c].value;
      }
      for (std::size_t k = 0; k < dense.size(); ++k) {
        EXPECT_NEAR(dense[k], eval_phi_periodized(t, j, static_cast<std::int64_t>(k), x), 1e-15);
      }
    }
  }
}

TEST(Periodized, BoundaryOneLandsInLastCell) {
  const PhiTable t = build_phi_table(make_filter(1), 10);
  EXPECT_DOUBLE_EQ(eval_phi_periodized(t, 3, 7, 1.0), std::pow(2.0, 1.5));
  EXPECT_EQ(eval_phi_periodized(t, 3, 0, 1.0), 0.0);
}

TEST(PhiTable, CsvDump) {
  const PhiTable t = build_phi_table(make_filter(2), 3);
  std::ostringstream os;
  write_phi_csv(t, os);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("x,phi\n", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            t.values().size() + 1);
}

}  // namespace
}  // namespace wavica
