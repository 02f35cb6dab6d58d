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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavica {

enum class DensityKind {
  uniform,
  exponential,
  student,
  semicircular,
  pareto,
  triangular,
  normal,
  cauchy,
};

/// A source density with its single shape parameter:
///   student: degrees of freedom (default 3)
///   pareto: shape (default 3, scale 1)
///   semicircular: radius (default 1)
///   triangular: mode on [0,1] (default 0.5)
///   exponential: rate (default 1)
/// uniform (on [0,1]), normal and cauchy ignore the parameter.
struct Density {
  DensityKind kind = DensityKind::uniform;
  double param = 0.0;

  static Density make(DensityKind kind);
  static Density make(DensityKind kind, double param);
  void validate() const;
  std::string name() const;
};

/// "uniform", "student", "student:5", "pareto:2.5", "semi-circ", ...
Density parse_density(std::string_view text);
std::vector<DensityKind> all_density_kinds();

/// Applies key=value overrides such as "nu=4,shape=2,radius=1,mode=0.3,rate=2"
/// to whichever densities use that parameter.
void apply_density_params(std::vector<Density>& densities, std::string_view text);

/// n x d matrix of independent draws; column l uses densities[l] (or
/// densities[0] for every column when a single density is given).
/// Each column comes from its own substream of `seed`, so results are
/// bit-identical for identical (seed, replicate).
Eigen::MatrixXd sample_sources(std::span<const Density> densities, int d,
                               std::size_t n, std::uint64_t seed,
                               std::uint64_t replicate = 0);

struct MixingSpec {
  enum class Kind { identity, rotation, random, explicit_matrix };
  Kind kind = Kind::identity;
  double angle_deg = 0.0;
  int plane_a = 0;
  int plane_b = 1;
  Eigen::MatrixXd matrix;

  static MixingSpec identity() { return {}; }
  static MixingSpec rotation(double degrees, int a = 0, int b = 1);
  static MixingSpec random();
  static MixingSpec explicit_matrix(Eigen::MatrixXd m);
};

/// "identity", "random", "rotation:<deg>", "rotation:<deg>:<a>:<b>",
/// "file:<path>" (whitespace or comma separated square matrix).
MixingSpec parse_mixing(std::string_view text);

/// d x d mixing matrix. Random matrices are Haar-distributed on SO(d)
/// (QR of a Gaussian matrix with sign and determinant fix).
Eigen::MatrixXd make_mixing(const MixingSpec& spec, int d, std::uint64_t seed,
                            std::uint64_t replicate = 0);

/// Row-wise X_i = A S_i, i.e. S A^T.
Eigen::MatrixXd mix(const Eigen::MatrixXd& sources, const Eigen::MatrixXd& a);

}  // namespace wavica
