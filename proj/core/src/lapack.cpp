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

#include "lapack.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <lapacke.h>

#include "infolat/errors.hpp"

namespace infolat::detail {

static_assert(sizeof(lapack_int) == sizeof(int));

SymmetricEigen symmetric_eigen(Eigen::MatrixXd a, bool want_vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  SymmetricEigen out;
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n, a.data(),
                                         n, out.values.data());
  if (info != 0) throw NumericalError("dsyevd failed with info " + std::to_string(info));
  if (want_vectors) out.vectors = std::move(a);
  return out;
}

SymmetricEigen symmetric_eigenpair(Eigen::MatrixXd a, int index) {
  const auto n = static_cast<lapack_int>(a.rows());
  if (index < 0 || index >= n) throw std::out_of_range("eigenpair index out of range");
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, 1);
  lapack_int found = 0;
  std::vector<lapack_int> support(2);
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, index + 1, index + 1, 0.0, &found,
                     out.values.data(), out.vectors.data(), n, support.data());
  if (info != 0 || found != 1) throw NumericalError("dsyevr failed with info " + std::to_string(info));
  out.values.conservativeResize(1);
  return out;
}

Eigen::VectorXd singular_values(Eigen::MatrixXd a) {
  const auto rows = static_cast<lapack_int>(a.rows());
  const auto cols = static_cast<lapack_int>(a.cols());
  Eigen::VectorXd s(std::min(rows, cols));
  if (s.size() == 0) return s;
  const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows, s.data(), nullptr,
                                         1, nullptr, 1);
  if (info != 0) throw NumericalError("dgesdd failed with info " + std::to_string(info));
  return s;
}

BidiagonalSvd lower_bidiagonal_svd(Eigen::VectorXd diag, Eigen::VectorXd sub) {
  const auto n = static_cast<lapack_int>(diag.size());
  BidiagonalSvd out;
  out.u = Eigen::MatrixXd::Identity(n, n);
  out.vt = Eigen::MatrixXd::Identity(n, n);
  if (n == 0) return out;
  if (sub.size() != n - 1) throw std::invalid_argument("bidiagonal needs n - 1 subdiagonal entries");
  const lapack_int info = LAPACKE_dbdsqr(LAPACK_COL_MAJOR, 'L', n, n, n, 0, diag.data(), sub.size() > 0 ? sub.data() : diag.data(),
                                         out.vt.data(), n, out.u.data(), n, nullptr, 1);
  if (info != 0) throw NumericalError("dbdsqr failed with info " + std::to_string(info));
  out.values = std::move(diag);
  return out;
}

DenseLu::DenseLu(Eigen::MatrixXd a) : lu_(std::move(a)), pivots_(static_cast<std::size_t>(lu_.rows())) {
  const auto n = static_cast<lapack_int>(lu_.rows());
  const lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, pivots_.data());
  if (info < 0) throw NumericalError("dgetrf failed with info " + std::to_string(info));
  singular_ = info > 0;
}

Eigen::VectorXd DenseLu::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = b;
  const auto n = static_cast<lapack_int>(lu_.rows());
  const lapack_int info =
      LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu_.data(), n, pivots_.data(), x.data(), n);
  if (info != 0) throw NumericalError("dgetrs failed with info " + std::to_string(info));
  return x;
}

}  // namespace infolat::detail
