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

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "wavica/error.hpp"
#include "wavica/linalg.hpp"
#include "wavica/metrics.hpp"
#include "wavica/optimizer.hpp"
#include "wavica/preprocessing.hpp"
#include "wavica/sources.hpp"

namespace wavica {
namespace {

Eigen::MatrixXd random_skew(int d, double scale, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = g(gen);
  Eigen::MatrixXd b = m - m.transpose();
  return scale * b / b.norm();
}

Eigen::MatrixXd rotation(double t) {
  Eigen::MatrixXd r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

TEST(FdGradient, ConstantObjective) {
  const Objective f = [](const Eigen::MatrixXd&) { return 3.0; };
  EXPECT_EQ(fd_gradient(f, Eigen::MatrixXd::Identity(3, 3), 1e-2), Eigen::MatrixXd::Zero(3, 3));
}

TEST(FdGradient, LinearObjective) {
  const Objective f = [](const Eigen::MatrixXd& w) { return w(0, 0); };
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2, 2);
  expected(0, 0) = 1.0;
  const Eigen::MatrixXd g = fd_gradient(f, Eigen::MatrixXd::Identity(2, 2), 0.5);
  EXPECT_LT((g - expected).norm(), 1e-15);
}

TEST(FdGradient, QuadraticObjective) {
  const Objective f = [](const Eigen::MatrixXd& w) { return w.squaredNorm(); };
  const double eps = 1e-2;
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd g = fd_gradient(f, w, eps);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      EXPECT_NEAR(g(a, b), 2.0 * (a == b) + eps, 1e-12);
      EXPECT_LE(std::abs(g(a, b) - 2.0 * w(a, b)), 2.0 * eps);
    }
  }
}

TEST(FdGradient, ParallelMatchesSequential) {
  const Objective f = [](const Eigen::MatrixXd& w) { return std::sin(w.sum()) + w.squaredNorm(); };
  const Eigen::MatrixXd w = rotation(0.3);
  EXPECT_EQ(fd_gradient(f, w, 1e-3, std::nullopt, 1), fd_gradient(f, w, 1e-3, std::nullopt, 3));
}

TEST(FdGradient, PerturbedPointsAreNotReorthogonalized) {
  std::vector<Eigen::MatrixXd> seen;
  const Objective f = [&](const Eigen::MatrixXd& w) {
    seen.push_back(w);
    return 0.0;
  };
  fd_gradient(f, Eigen::MatrixXd::Identity(2, 2), 0.1);
  bool found = false;
  for (const auto& w : seen) found = found || std::abs(w(0, 0) - 1.1) < 1e-15;
  EXPECT_TRUE(found);
  EXPECT_THROW(fd_gradient(f, Eigen::MatrixXd::Identity(2, 2), 0.0), InvalidArgument);
}

TEST(SkewProject, Examples) {
  const Eigen::MatrixXd w = rotation(0.7);
  EXPECT_LT(skew_project(w, w).norm(), 1e-15);
  Eigen::MatrixXd sym(2, 2);
  sym << 1, 2, 2, 5;
  EXPECT_LT(skew_project(sym, Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-15);
  Eigen::MatrixXd e12 = Eigen::MatrixXd::Zero(3, 3);
  e12(0, 1) = 1.0;
  const Eigen::MatrixXd s = skew_project(e12, Eigen::MatrixXd::Identity(3, 3));
  Eigen::MatrixXd expected = e12;
  expected(1, 0) = -1.0;
  EXPECT_EQ(s, expected);
}

TEST(SkewProject, AlwaysAntisymmetric) {
  std::mt19937 gen(1);
  std::normal_distribution<double> g;
  for (int d = 2; d <= 6; ++d) {
    Eigen::MatrixXd grad(d, d);
    for (Eigen::Index i = 0; i < grad.size(); ++i) grad.data()[i] = g(gen);
    const Eigen::MatrixXd w = exp_skew(random_skew(d, 1.0, static_cast<unsigned>(d)));
    const Eigen::MatrixXd s = skew_project(grad, w);
    EXPECT_LE((s + s.transpose()).norm(), 1e-12);
  }
}

TEST(ExpSkew, Examples) {
  EXPECT_EQ(exp_skew(Eigen::MatrixXd::Zero(3, 3)), Eigen::MatrixXd::Identity(3, 3));
  for (double t : {1e-6, 0.3, 1.0, 2.5, 3.1}) {
    Eigen::MatrixXd b(2, 2);
    b << 0, -t, t, 0;
    EXPECT_LT((exp_skew(b) - rotation(t)).cwiseAbs().maxCoeff(), 1e-12) << t;
  }
}

TEST(ExpSkew, GroupProperties) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const int d = 2 + static_cast<int>(seed % 7);
    const Eigen::MatrixXd b = random_skew(d, 10.0 * (seed + 1) / 20.0, seed);
    const Eigen::MatrixXd r = exp_skew(b);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
    EXPECT_LE((r * exp_skew(-b) - eye).norm(), 1e-10);
    EXPECT_LE((r * r.transpose() - eye).norm(), 1e-10);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-10);
  }
}

TEST(ExpSkew, RejectsSymmetricPart) {
  Eigen::MatrixXd b(2, 2);
  b << 0, 1, 1, 0;
  EXPECT_THROW(exp_skew(b), InvalidArgument);
}

TEST(Minimize, ExitsOnEntryForSmallContrast) {
  const Objective f = [](const Eigen::MatrixXd&) { return 1e-8; };
  const DemixTrace t = minimize(f, Eigen::MatrixXd::Identity(2, 2), OptimizerConfig{});
  EXPECT_EQ(t.reason, StopReason::contrast_on_entry);
  EXPECT_EQ(t.iterations(), 0);
  EXPECT_EQ(t.final_state().w, Eigen::MatrixXd::Identity(2, 2));
}

TEST(Minimize, ExitsOnEntryForFlatObjective) {
  const Objective f = [](const Eigen::MatrixXd&) { return 1.0; };
  const DemixTrace t = minimize(f, Eigen::MatrixXd::Identity(2, 2), OptimizerConfig{});
  EXPECT_EQ(t.reason, StopReason::gradient_on_entry);
  EXPECT_EQ(t.iterations(), 0);
}

TEST(Minimize, FindsTargetRotation) {
  // Distance to a fixed rotation: a smooth objective with its minimum on SO(3).
  const Eigen::MatrixXd target = exp_skew(random_skew(3, 1.2, 4));
  const Objective f = [&](const Eigen::MatrixXd& w) { return (w - target).squaredNorm() + 1.0; };
  OptimizerConfig cfg;
  cfg.fd_step = 1e-6;
  cfg.max_iterations = 50;
  const DemixTrace t = minimize(f, Eigen::MatrixXd::Identity(3, 3), cfg);
  EXPECT_LT((t.final_state().w - target).norm(), 1e-3);
  for (std::size_t i = 1; i < t.states.size(); ++i) {
    EXPECT_LE(t.states[i].contrast, t.states[i - 1].contrast + 1e-12);
  }
  for (const auto& s : t.states) {
    EXPECT_LE(orthogonality_defect(s.w), 1e-10);
    EXPECT_NEAR(s.w.determinant(), 1.0, 1e-10);
    if (s.skew.size() > 0) EXPECT_LE((s.skew + s.skew.transpose()).norm(), 1e-12);
  }
}

TEST(Minimize, RespectsIterationCap) {
  const Objective f = [](const Eigen::MatrixXd& w) { return std::pow(w(0, 1) - 0.9, 2) + 1.0; };
  OptimizerConfig cfg;
  cfg.max_iterations = 1;
  const DemixTrace t = minimize(f, Eigen::MatrixXd::Identity(2, 2), cfg);
  EXPECT_LE(t.iterations(), 1);
}

TEST(Minimize, ConfigValidation) {
  OptimizerConfig cfg;
  cfg.fd_step = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = OptimizerConfig{};
  cfg.contrast_tol = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  EXPECT_NO_THROW(OptimizerConfig{}.validate());
}

TEST(Rescale, Parse) {
  EXPECT_EQ(parse_rescale_mode("once"), RescaleMode::once);
  EXPECT_EQ(parse_rescale_mode("per-step"), RescaleMode::per_step);
  EXPECT_EQ(to_string(RescaleMode::per_step), "per-step");
  EXPECT_THROW(parse_rescale_mode("never"), InvalidArgument);
}

TEST(FdWarning, Threshold) {
  EXPECT_FALSE(fd_step_warning(1e-2, 10, 3).has_value());
  EXPECT_TRUE(fd_step_warning(1e-5, 10, 3).has_value());
}

class ObjectiveTest : public ::testing::Test {
 protected:
  void SetUp() override {
    table_ = std::make_shared<const PhiTable>(build_phi_table(make_filter(2), 10));
    const Density uni[] = {Density::make(DensityKind::uniform)};
    // Centered, unit variance: already white up to sampling noise.
    sources_ = (sample_sources(uni, 2, 5000, 21).array() - 0.5) * std::sqrt(12.0);
  }
  std::shared_ptr<const PhiTable> table_;
  Eigen::MatrixXd sources_;
};

TEST_F(ObjectiveTest, AxisAlignedDataExitsOnEntry) {
  const WhitenResult wr = whiten(sources_);
  for (RescaleMode mode : {RescaleMode::per_step, RescaleMode::once}) {
    const ContrastObjective obj(wr.whitened, table_, 0, mode);
    const DemixTrace t = minimize(std::cref(obj), Eigen::MatrixXd::Identity(2, 2), OptimizerConfig{});
    EXPECT_EQ(t.reason, StopReason::contrast_on_entry);
    EXPECT_EQ(t.final_state().w, Eigen::MatrixXd::Identity(2, 2));
  }
}

TEST_F(ObjectiveTest, TransformStaysInCube) {
  const Eigen::MatrixXd a = make_mixing(MixingSpec::rotation(30.0), 2, 0);
  const WhitenResult wr = whiten(mix(sources_, a));
  for (RescaleMode mode : {RescaleMode::per_step, RescaleMode::once}) {
    const ContrastObjective obj(wr.whitened, table_, 3, mode, 0.01);
    for (double t : {0.0, 0.4, 1.1}) {
      const Sample s = obj.transform(rotation(t));
      EXPECT_GE(s.data().minCoeff(), 0.01 - 1e-15);
      EXPECT_LE(s.data().maxCoeff(), 0.99 + 1e-15);
    }
  }
}

TEST_F(ObjectiveTest, SweepMinimumAtTheUnmixingAngle) {
  const double angle = 0.5;
  const Eigen::MatrixXd a = rotation(angle);
  const Eigen::MatrixXd x = mix(sources_, a);
  const ContrastObjective obj(x, table_, 2);
  const auto grid = angle_sweep(std::cref(obj), 90);
  ASSERT_EQ(grid.size(), 90u);
  EXPECT_EQ(grid.front().angle, 0.0);
  EXPECT_LT(grid.back().angle, std::numbers::pi / 2);
  const auto best = std::min_element(grid.begin(), grid.end(), [](const auto& p, const auto& q) {
    return p.contrast < q.contrast;
  });
  // W = R(-angle) modulo pi/2.
  const double target = std::numbers::pi / 2 - angle;
  EXPECT_NEAR(best->angle, target, 2.0 * std::numbers::pi / 180.0);
  EXPECT_THROW(angle_sweep(std::cref(obj), 0), InvalidArgument);
}

TEST_F(ObjectiveTest, AxisAlignedSweepMinimumAtZero) {
  const ContrastObjective obj(sources_, table_, 2);
  const auto grid = angle_sweep(std::cref(obj), 60);
  const auto best = std::min_element(grid.begin(), grid.end(), [](const auto& p, const auto& q) {
    return p.contrast < q.contrast;
  });
  const double step = grid[1].angle;
  EXPECT_TRUE(best->angle <= step || best->angle >= std::numbers::pi / 2 - step) << best->angle;
}

}  // namespace
}  // namespace wavica
