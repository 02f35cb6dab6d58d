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

#include "wavica/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "wavica/error.hpp"

namespace wavica {
namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, double tol,
                            int max_sweeps) {
  if (input.rows() != input.cols()) {
    throw InvalidArgument("jacobi_eigen: matrix is not square");
  }
  if ((input - input.transpose()).norm() > 1e-10 * std::max(1.0, input.norm())) {
    throw InvalidArgument("jacobi_eigen: matrix is not symmetric");
  }
  const Eigen::Index d = input.rows();
  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(d, d);
  const double scale = std::max(a.norm(), 1e-300);

  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol * scale) break;
    for (Eigen::Index p = 0; p < d - 1; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle zeroing a(p,q), Rutishauser's stable form.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < d; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < d; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < d; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_diagonal_norm(a) > tol * scale) {
    throw NumericalError("jacobi_eigen: no convergence after " +
                         std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
  SymmetricEigen out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    out.values[i] = a(src, src);
    out.vectors.col(i) = v.col(src);
  }
  out.sweeps = sweep;
  return out;
}

double orthogonality_defect(const Eigen::MatrixXd& w) {
  return (w.transpose() * w -
          Eigen::MatrixXd::Identity(w.cols(), w.cols()))
      .norm();
}

Eigen::MatrixXd polar_orthonormalize(const Eigen::MatrixXd& w) {
  const SymmetricEigen eig = jacobi_eigen(w.transpose() * w);
  if (eig.values.minCoeff() <= 0.0) {
    throw NumericalError("polar_orthonormalize: singular matrix");
  }
  const Eigen::VectorXd inv_sqrt = eig.values.array().rsqrt();
  const Eigen::MatrixXd q = w * eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
  // One Newton step for the polar factor removes the eigensolver residual.
  return 0.5 * (q + q.inverse().transpose());
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& data) {
  if (data.rows() < 2) {
    throw InvalidArgument("sample_covariance needs at least two rows");
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  return (centered.transpose() * centered) /
         static_cast<double>(data.rows() - 1);
}

}  // namespace wavica
