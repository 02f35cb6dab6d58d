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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "wavica/csv.hpp"
#include "wavica/error.hpp"
#include "wavica/linalg.hpp"
#include "wavica/random.hpp"
#include "wavica/sources.hpp"

namespace wavica {
namespace {

Eigen::VectorXd draw_column(DensityKind kind, std::size_t n, std::uint64_t seed) {
  const Density dens[] = {Density::make(kind)};
  return sample_sources(dens, 1, n, seed).col(0);
}

double mean(const Eigen::VectorXd& v) { return v.mean(); }

double variance(const Eigen::VectorXd& v) {
  return (v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1);
}

double quantile(Eigen::VectorXd v, double q) {
  std::sort(v.data(), v.data() + v.size());
  return v(static_cast<Eigen::Index>(q * static_cast<double>(v.size() - 1)));
}

TEST(Random, StreamsAreDeterministicAndDistinct) {
  RandomStream a(7, "x"), b(7, "x"), c(7, "y"), d(7, "x", 1), e(8, "x");
  const auto first = a.bits();
  EXPECT_EQ(first, b.bits());
  EXPECT_NE(first, c.bits());
  EXPECT_NE(first, d.bits());
  EXPECT_NE(first, e.bits());
}

TEST(Random, UniformOpenInterval) {
  RandomStream r(1, "u");
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
}

TEST(Random, GammaMoments) {
  RandomStream r(2, "g");
  for (double shape : {0.5, 1.5, 4.0}) {
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = r.gamma(shape);
      s += g;
      s2 += g * g;
    }
    const double m = s / n;
    EXPECT_NEAR(m, shape, 5.0 * std::sqrt(shape / n));
    EXPECT_NEAR(s2 / n - m * m, shape, 0.05 * shape);
  }
  EXPECT_THROW(r.gamma(0.0), InvalidArgument);
}

TEST(Sources, UniformMean) {
  const std::size_t n = 100000;
  const Eigen::VectorXd u = draw_column(DensityKind::uniform, n, 3);
  EXPECT_NEAR(mean(u), 0.5, 3.0 / std::sqrt(12.0 * n));
  EXPECT_GT(u.minCoeff(), 0.0);
  EXPECT_LT(u.maxCoeff(), 1.0);
}

TEST(Sources, ExponentialMean) {
  EXPECT_NEAR(mean(draw_column(DensityKind::exponential, 100000, 4)), 1.0, 0.02);
}

TEST(Sources, MomentsOfEveryDensity) {
  const std::size_t n = 200000;
  // semicircle radius 1: variance 1/4; triangular [0,1] mode 1/2: mean 1/2,
  // variance 1/24; Pareto shape 3: mean 3/2; Student 3: median 0, quartile
  // 0.7649; Cauchy quartiles +-1.
  const Eigen::VectorXd semi = draw_column(DensityKind::semicircular, n, 5);
  EXPECT_NEAR(variance(semi), 0.25, 0.005);
  EXPECT_LE(semi.cwiseAbs().maxCoeff(), 1.0);
  const Eigen::VectorXd tri = draw_column(DensityKind::triangular, n, 6);
  EXPECT_NEAR(mean(tri), 0.5, 0.003);
  EXPECT_NEAR(variance(tri), 1.0 / 24.0, 0.001);
  const Eigen::VectorXd par = draw_column(DensityKind::pareto, n, 7);
  EXPECT_NEAR(mean(par), 1.5, 0.02);
  EXPECT_GE(par.minCoeff(), 1.0);
  const Eigen::VectorXd nor = draw_column(DensityKind::normal, n, 8);
  EXPECT_NEAR(mean(nor), 0.0, 0.012);
  EXPECT_NEAR(variance(nor), 1.0, 0.02);
  const Eigen::VectorXd stu = draw_column(DensityKind::student, n, 9);
  EXPECT_NEAR(quantile(stu, 0.5), 0.0, 0.015);
  EXPECT_NEAR(quantile(stu, 0.75), 0.7649, 0.02);
  const Eigen::VectorXd cau = draw_column(DensityKind::cauchy, n, 10);
  EXPECT_NEAR(quantile(cau, 0.25), -1.0, 0.03);
  EXPECT_NEAR(quantile(cau, 0.75), 1.0, 0.03);
}

TEST(Sources, FixedSeedIsBitIdentical) {
  const Density dens[] = {Density::make(DensityKind::student)};
  EXPECT_EQ(sample_sources(dens, 3, 500, 42), sample_sources(dens, 3, 500, 42));
  EXPECT_NE(sample_sources(dens, 3, 500, 42), sample_sources(dens, 3, 500, 43));
  EXPECT_NE(sample_sources(dens, 3, 500, 42, 0), sample_sources(dens, 3, 500, 42, 1));
}

TEST(Sources, PerCoordinateDensities) {
  const Density dens[] = {Density::make(DensityKind::uniform),
                          Density::make(DensityKind::normal)};
  const Eigen::MatrixXd s = sample_sources(dens, 2, 1000, 1);
  EXPECT_GE(s.col(0).minCoeff(), 0.0);
  EXPECT_LT(s.col(1).minCoeff(), 0.0);
  EXPECT_THROW(sample_sources(dens, 3, 10, 1), InvalidArgument);
}

TEST(Sources, ParameterValidation) {
  EXPECT_THROW(Density::make(DensityKind::student, 0.0), InvalidArgument);
  EXPECT_THROW(Density::make(DensityKind::pareto, -1.0), InvalidArgument);
  EXPECT_THROW(Density::make(DensityKind::triangular, 1.5), InvalidArgument);
  EXPECT_EQ(Density::make(DensityKind::student).param, 3.0);
  EXPECT_EQ(Density::make(DensityKind::pareto).param, 3.0);
  EXPECT_EQ(all_density_kinds().size(), 8u);
}

TEST(Sources, ParseDensities) {
  EXPECT_EQ(parse_density("semi-circ").kind, DensityKind::semicircular);
  const Density t5 = parse_density("student:5");
  EXPECT_EQ(t5.kind, DensityKind::student);
  EXPECT_EQ(t5.param, 5.0);
  EXPECT_THROW(parse_density("laplace"), InvalidArgument);
  EXPECT_THROW(parse_density("student:-2"), InvalidArgument);

  std::vector<Density> set{parse_density("student"), parse_density("pareto")};
  apply_density_params(set, "nu=7, shape=2.5");
  EXPECT_EQ(set[0].param, 7.0);
  EXPECT_EQ(set[1].param, 2.5);
  EXPECT_THROW(apply_density_params(set, "bogus=1"), InvalidArgument);
  EXPECT_THROW(apply_density_params(set, "nu"), InvalidArgument);
}

TEST(Mixing, Identity) {
  EXPECT_EQ(make_mixing(MixingSpec::identity(), 3, 1), Eigen::MatrixXd::Identity(3, 3));
}

TEST(Mixing, HalfDegreeRotation) {
  const Eigen::MatrixXd a = make_mixing(MixingSpec::rotation(0.5), 2, 1);
  const double t = 0.5 * std::numbers::pi / 180.0;
  EXPECT_DOUBLE_EQ(a(0, 0), std::cos(t));
  EXPECT_DOUBLE_EQ(a(0, 1), -std::sin(t));
  EXPECT_DOUBLE_EQ(a(1, 0), std::sin(t));
  EXPECT_DOUBLE_EQ(a(1, 1), std::cos(t));
  EXPECT_THROW(make_mixing(MixingSpec::rotation(1.0, 0, 2), 2, 1), InvalidArgument);
}

TEST(Mixing, RandomSpecialOrthogonal) {
  for (int d = 2; d <= 8; ++d) {
    for (std::uint64_t rep = 0; rep < 5; ++rep) {
      const Eigen::MatrixXd a = make_mixing(MixingSpec::random(), d, 11, rep);
      EXPECT_LE((a.transpose() * a - Eigen::MatrixXd::Identity(d, d)).norm(), 1e-12);
      EXPECT_NEAR(a.determinant(), 1.0, 1e-12);
    }
  }
  EXPECT_NE(make_mixing(MixingSpec::random(), 3, 11, 0), make_mixing(MixingSpec::random(), 3, 11, 1));
}

TEST(Mixing, RandomIsSpreadOverTheGroup) {
  // Haar measure on SO(2): the angle is uniform on (-pi, pi].
  int upper = 0;
  const int trials = 2000;
  for (int r = 0; r < trials; ++r) {
    const Eigen::MatrixXd a = make_mixing(MixingSpec::random(), 2, 5, static_cast<std::uint64_t>(r));
    if (std::atan2(a(1, 0), a(0, 0)) > 0) ++upper;
  }
  EXPECT_NEAR(upper, trials / 2, 5.0 * std::sqrt(trials / 4.0));
}

TEST(Mixing, ExplicitMatrix) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_EQ(make_mixing(MixingSpec::explicit_matrix(m), 2, 0), m);
  EXPECT_THROW(make_mixing(MixingSpec::explicit_matrix(m), 3, 0), InvalidArgument);
  m << 1, 2, 2, 4;
  EXPECT_THROW(make_mixing(MixingSpec::explicit_matrix(m), 2, 0), InvalidArgument);
}

TEST(Mixing, ParseSpecs) {
  EXPECT_EQ(parse_mixing("identity").kind, MixingSpec::Kind::identity);
  EXPECT_EQ(parse_mixing("random").kind, MixingSpec::Kind::random);
  const MixingSpec r = parse_mixing("rotation:30:1:2");
  EXPECT_EQ(r.kind, MixingSpec::Kind::rotation);
  EXPECT_EQ(r.angle_deg, 30.0);
  EXPECT_EQ(r.plane_a, 1);
  EXPECT_EQ(r.plane_b, 2);
  EXPECT_THROW(parse_mixing("rotation:x"), InvalidArgument);
  EXPECT_THROW(parse_mixing("shear"), InvalidArgument);

  const auto path = std::filesystem::temp_directory_path() / "wavica_mix_test.csv";
  {
    std::ofstream os(path);
    os << "0,1\n1,0\n";
  }
  const MixingSpec f = parse_mixing("file:" + path.string());
  EXPECT_EQ(f.kind, MixingSpec::Kind::explicit_matrix);
  EXPECT_EQ(f.matrix(0, 1), 1.0);
  std::filesystem::remove(path);
}

TEST(Mixing, MixRows) {
  Eigen::MatrixXd s(2, 2);
  s << 1, 2, 3, 4;
  EXPECT_EQ(mix(s, Eigen::MatrixXd::Identity(2, 2)), s);
  EXPECT_EQ(mix(s, 2.0 * Eigen::MatrixXd::Identity(2, 2)), 2.0 * s);
  Eigen::MatrixXd p(2, 2);
  p << 0, 1, 1, 0;
  const Eigen::MatrixXd x = mix(s, p);
  EXPECT_EQ(x.col(0), s.col(1));
  EXPECT_EQ(x.col(1), s.col(0));
  EXPECT_THROW(mix(s, Eigen::MatrixXd::Identity(3, 3)), InvalidArgument);
}

TEST(Csv, ReadVariants) {
  std::istringstream in("# comment\nx,y\n1,2\n3 4\n\n5;6\n");
  const Eigen::MatrixXd m = read_matrix_csv(in);
  ASSERT_EQ(m.rows(), 3);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_EQ(m(2, 1), 6.0);
}

TEST(Csv, Errors) {
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_matrix_csv(ragged), InvalidArgument);
  std::istringstream late_header("1,2\na,b\n");
  EXPECT_THROW(read_matrix_csv(late_header), InvalidArgument);
  std::istringstream empty("# nothing\n");
  EXPECT_THROW(read_matrix_csv(empty), InvalidArgument);
  EXPECT_THROW(read_matrix_csv_file("/nonexistent/file.csv"), InvalidArgument);
}

TEST(Csv, RoundTripIsExact) {
  Eigen::MatrixXd m(2, 3);
  m << 0.1, -1e-300, std::numbers::pi, 1.0 / 3.0, 12345.678, -0.0;
  std::stringstream io;
  write_matrix_csv(m, io, {"a", "b", "c"});
  EXPECT_EQ(read_matrix_csv(io), m);
}

}  // namespace
}  // namespace wavica
