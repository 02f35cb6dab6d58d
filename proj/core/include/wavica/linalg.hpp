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

namespace wavica {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for small symmetric matrices. Stops once the
/// off-diagonal Frobenius norm drops below `tol` times the matrix norm, or
/// throws NumericalError after `max_sweeps`.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, double tol = 1e-12,
                            int max_sweeps = 100);

/// ||W^T W - I||_F
double orthogonality_defect(const Eigen::MatrixXd& w);

/// Nearest orthogonal matrix W (W^T W)^{-1/2}.
Eigen::MatrixXd polar_orthonormalize(const Eigen::MatrixXd& w);

/// Sample covariance with 1/(n-1) normalization; rows are observations.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& data);

}  // namespace wavica
