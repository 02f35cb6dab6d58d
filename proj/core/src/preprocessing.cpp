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

#include "wavica/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavica/error.hpp"
#include "wavica/linalg.hpp"

namespace wavica {

WhitenResult whiten(const Eigen::MatrixXd& raw) {
  const Eigen::Index n = raw.rows();
  const Eigen::Index d = raw.cols();
  if (d < 1) throw InvalidArgument("whiten: empty dimension");
  if (n <= d) {
    throw InvalidArgument("whiten: need more observations than dimensions (n=" +
                          std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }

  WhitenResult out;
  out.mean = raw.colwise().mean().transpose();
  const Eigen::MatrixXd centered = raw.rowwise() - out.mean.transpose();
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(n - 1);

  const SymmetricEigen eig = jacobi_eigen(cov);
  const double top = eig.values.maxCoeff();
  const double bottom = eig.values.minCoeff();
  if (!(top > 0.0) || bottom <= 1e-12 * top) {
    throw NumericalError("whiten: sample covariance is singular");
  }
  out.eigenvalues = eig.values;
  // Symmetric square root U L^{-1/2} U^T: the whitener closest to the
  // identity, so already decorrelated axes are not rotated.
  out.whitener = eig.vectors * eig.values.array().rsqrt().matrix().asDiagonal() *
                 eig.vectors.transpose();
  out.whitened = centered * out.whitener.transpose();
  return out;
}

CubeMap fit_cube(const Eigen::MatrixXd& data, double margin) {
  if (!(margin >= 0.0 && margin < 0.5)) {
    throw InvalidArgument("cube margin must lie in [0, 0.5)");
  }
  if (data.rows() < 1) throw InvalidArgument("fit_cube: no observations");
  CubeMap map;
  map.margin = margin;
  map.offset.resize(data.cols());
  map.scale.resize(data.cols());
  for (Eigen::Index l = 0; l < data.cols(); ++l) {
    const double lo = data.col(l).minCoeff();
    const double hi = data.col(l).maxCoeff();
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      throw InvalidArgument("fit_cube: non-finite value in column " +
                            std::to_string(l));
    }
    if (!(hi > lo)) {
      throw InvalidArgument("fit_cube: column " + std::to_string(l) +
                            " is constant");
    }
    map.offset[l] = -lo;
    map.scale[l] = (1.0 - 2.0 * margin) / (hi - lo);
  }
  return map;
}

Sample apply_cube(const CubeMap& map, const Eigen::MatrixXd& data) {
  if (data.cols() != map.scale.size()) {
    throw InvalidArgument("apply_cube: dimension mismatch");
  }
  Eigen::MatrixXd out(data.rows(), data.cols());
  for (Eigen::Index l = 0; l < data.cols(); ++l) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const double v = (data(i, l) + map.offset[l]) * map.scale[l] + map.margin;
      out(i, l) = std::clamp(v, 0.0, 1.0);
    }
  }
  return Sample(std::move(out));
}

}  // namespace wavica
