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

#include "wavica/projection.hpp"

namespace wavica {

struct WhitenResult {
  Eigen::MatrixXd whitened;   // n x d, zero mean, identity covariance
  Eigen::VectorXd mean;
  Eigen::MatrixXd whitener;   // N with N Sigma N^T = I
  Eigen::VectorXd eigenvalues;
};

/// Centers the rows of `raw` and applies N = U Lambda^{-1/2} U^T from the
/// Jacobi decomposition of the sample covariance. Requires n > d and a
/// nonsingular covariance (min eigenvalue > 1e-12 * max).
WhitenResult whiten(const Eigen::MatrixXd& raw);

/// Per-coordinate affine map x -> (x + offset) * scale + margin onto
/// [margin, 1 - margin].
struct CubeMap {
  Eigen::VectorXd offset;
  Eigen::VectorXd scale;
  double margin = 0.0;
};

/// Min-max fit. Throws InvalidArgument for a constant coordinate or a
/// margin outside [0, 0.5).
CubeMap fit_cube(const Eigen::MatrixXd& data, double margin = 0.0);

/// Applies the map and clamps round-off spill into [0,1].
Sample apply_cube(const CubeMap& map, const Eigen::MatrixXd& data);

/// fit_cube followed by apply_cube.
inline Sample to_unit_cube(const Eigen::MatrixXd& data, double margin = 0.0) {
  return apply_cube(fit_cube(data, margin), data);
}

}  // namespace wavica
