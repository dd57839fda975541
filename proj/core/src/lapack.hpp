// Copyright 2026 The infolat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Thin wrappers over LAPACK for the dense solves that dominate exact
// diagonalization; Eigen's own kernels are several times slower there.

#include <vector>

#include <Eigen/Dense>

namespace infolat::detail {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns; empty when not requested
};

// Divide-and-conquer symmetric eigensolver (dsyevd). Throws NumericalError on failure.
SymmetricEigen symmetric_eigen(Eigen::MatrixXd a, bool want_vectors);

// The eigenpair with the given ascending index (dsyevr); `values` holds just
// that eigenvalue. Cheaper than a full solve when one vector is needed.
SymmetricEigen symmetric_eigenpair(Eigen::MatrixXd a, int index);

// Singular values, descending (dgesdd). Throws NumericalError on failure.
Eigen::VectorXd singular_values(Eigen::MatrixXd a);

struct BidiagonalSvd {
  Eigen::VectorXd values;  // descending
  Eigen::MatrixXd u;
  Eigen::MatrixXd vt;
};

// SVD of the lower bidiagonal matrix with diagonal `diag` and subdiagonal
// `sub` (dbdsqr). Small singular values keep full relative accuracy.
BidiagonalSvd lower_bidiagonal_svd(Eigen::VectorXd diag, Eigen::VectorXd sub);

// LU factorization with partial pivoting (dgetrf / dgetrs).
class DenseLu {
 public:
  explicit DenseLu(Eigen::MatrixXd a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  bool singular() const { return singular_; }

 private:
  Eigen::MatrixXd lu_;
  std::vector<int> pivots_;
  bool singular_ = false;
};

}  // namespace infolat::detail
