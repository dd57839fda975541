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

#include "infolat/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "infolat/errors.hpp"
#include "infolat/format.hpp"
#include "lapack.hpp"

namespace infolat {

namespace {

// Binary entropy in bits, accurate for tiny p.
double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  const double q = 1.0 - p;
  return (-p * std::log(p) - q * std::log1p(-p)) / std::numbers::ln2;
}

void check_window(const CovarianceMatrix& cov, int ell, int m) {
  if (ell < 0 || m < 0 || m + ell > cov.num_sites() - 1) {
    throw std::out_of_range("subsystem [" + std::to_string(m) + ", " + std::to_string(m + ell) +
                            "] outside a chain of " + std::to_string(cov.num_sites()) + " sites");
  }
}

// Real part of i^k.
double re_ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return 1.0;
    case 2: return -1.0;
    default: return 0.0;
  }
}

}  // namespace

MajoranaCoupling::MajoranaCoupling(std::vector<double> couplings) : couplings_(std::move(couplings)) {
  if (couplings_.empty() || couplings_.size() % 2 == 0) {
    throw std::invalid_argument("a chain of L sites has 2L-1 Majorana couplings");
  }
}

Eigen::MatrixXd MajoranaCoupling::dense() const {
  const int n = num_majoranas();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    a(j, j + 1) = -2.0 * couplings_[static_cast<std::size_t>(j)];
    a(j + 1, j) = 2.0 * couplings_[static_cast<std::size_t>(j)];
  }
  return a;
}

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() == 0) {
    throw InvalidCovariance("covariance matrix must be square with even dimension");
  }
  if ((m_ + m_.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidCovariance("covariance matrix is not antisymmetric");
  }
}

double CovarianceMatrix::purity_residual() const {
  const Eigen::MatrixXd r = m_ * m_.transpose() - Eigen::MatrixXd::Identity(m_.rows(), m_.cols());
  return r.cwiseAbs().maxCoeff();
}

CovarianceMatrix CovarianceMatrix::restrict_to(int first_site, int count) const {
  if (first_site < 0 || count < 1 || first_site + count > num_sites()) {
    throw std::out_of_range("restriction outside the chain");
  }
  return CovarianceMatrix(m_.block(2 * first_site, 2 * first_site, 2 * count, 2 * count));
}

GaussianGroundState ground_covariance(const MajoranaCoupling& coupling) {
  // iA is Hermitian tridiagonal with imaginary off-diagonals. The diagonal
  // unitary D = diag(i^k) maps it to the real symmetric tridiagonal T with
  // T(k, k+1) = 2 t_k, so iA = D T D^dagger and
  //   M = i sign(iA),  M(j,k) = Re(i^(1+j-k)) sign(T)(j,k).
  // T has zero diagonal, so it only links even to odd Majoranas through the
  // lower bidiagonal B(a, b) = T(2a, 2b+1). With B = U S V^T,
  // sign(T) = [[0, U V^T], [V U^T, 0]], orthogonal by construction even when
  // +eps/-eps pairs are too close for an eigensolver to separate.
  const int n = coupling.num_majoranas();
  const int sites = n / 2;
  const auto& t = coupling.couplings();
  Eigen::VectorXd diag(sites);
  Eigen::VectorXd sub(sites - 1);
  double scale = 1.0;
  for (int a = 0; a < sites; ++a) {
    diag(a) = 2.0 * t[static_cast<std::size_t>(2 * a)];
    scale = std::max(scale, std::abs(diag(a)));
    if (a + 1 < sites) {
      sub(a) = 2.0 * t[static_cast<std::size_t>(2 * a + 1)];
      scale = std::max(scale, std::abs(sub(a)));
    }
  }
  const auto svd = detail::lower_bidiagonal_svd(std::move(diag), std::move(sub));

  GaussianGroundState out;
  auto& diag_out = out.diagnostics;
  const double threshold = kNearZeroMode * scale;

  Eigen::MatrixXd polar = Eigen::MatrixXd::Zero(sites, sites);
  std::vector<int> null_modes;
  for (int k = 0; k < sites; ++k) {
    if (svd.values(k) < threshold) {
      null_modes.push_back(k);
      continue;
    }
    polar.noalias() += svd.u.col(k) * svd.vt.row(k);
  }
  diag_out.mode_energies.assign(svd.values.data(), svd.values.data() + sites);
  std::sort(diag_out.mode_energies.begin(), diag_out.mode_energies.end());
  double energy = 0.0;
  for (const double eps : diag_out.mode_energies) energy -= eps / 2.0;
  diag_out.ground_energy = energy;
  diag_out.near_zero_modes = static_cast<int>(null_modes.size());
  diag_out.pairing_ambiguous = null_modes.size() > 1;

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < sites; ++a) {
    for (int b = 0; b < sites; ++b) {
      const int j = 2 * a;
      const int k = 2 * b + 1;
      m(j, k) = re_ipow(1 + j - k) * polar(a, b);
      m(k, j) = re_ipow(1 + k - j) * polar(a, b);
    }
  }
  // Each null mode leaves two real Majorana zero modes, (-1)^a u_a on even
  // sites and (-1)^b v_b on odd ones; they are paired with each other.
  for (const int k : null_modes) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int a = 0; a < sites; ++a) {
      x(2 * a) = re_ipow(2 * a) * svd.u(a, k);
      y(2 * a + 1) = re_ipow(2 * a) * svd.vt(k, a);
    }
    m.noalias() += x * y.transpose() - y * x.transpose();
  }

  out.covariance = CovarianceMatrix(std::move(m));
  diag_out.purity_residual = out.covariance.purity_residual();
  if (diag_out.purity_residual > 1e-8 && !diag_out.pairing_ambiguous) {
    throw NumericalError("ground covariance is not pure (residual " +
                         format_number(diag_out.purity_residual) + ")");
  }
  return out;
}

double gaussian_subsystem_entropy(const CovarianceMatrix& cov, int ell, int m) {
  check_window(cov, ell, m);
  const int n = 2 * (ell + 1);
  const Eigen::MatrixXd x = cov.matrix().block(2 * m, 2 * m, n, n);
  // X^T X = -X^2 has eigenvalues nu_k^2, each twice.
  const Eigen::MatrixXd gram = x.transpose() * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on covariance block");
  double entropy = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double nu2 = solver.eigenvalues()(k);
    const double nu = std::sqrt(std::max(nu2, 0.0));
    if (nu > 1.0 + 1e-10) {
      throw InvalidCovariance("covariance eigenvalue nu = " + format_number(nu) + " exceeds 1");
    }
    entropy += binary_entropy((1.0 - std::min(nu, 1.0)) / 2.0);
  }
  return entropy / 2.0;
}

double gaussian_subsystem_entropy_pure(const CovarianceMatrix& cov, int ell, int m) {
  check_window(cov, ell, m);
  const Eigen::MatrixXd& full = cov.matrix();
  const int total = static_cast<int>(full.rows());
  const int first = 2 * m;
  const int count = 2 * (ell + 1);
  if (count == total) return 0.0;

  // Entries below this bound shift singular values by far less than the
  // resolution of the entropies, so rows and columns made of them are dropped.
  constexpr double kNegligible = 1e-20;
  std::vector<int> rows;
  std::vector<int> cols;
  auto outside = [&](int k) { return k < first || k >= first + count; };
  for (int c = 0; c < total; ++c) {
    if (!outside(c)) continue;
    double mx = 0.0;
    for (int r = first; r < first + count; ++r) mx = std::max(mx, std::abs(full(r, c)));
    if (mx > kNegligible) cols.push_back(c);
  }
  for (int r = first; r < first + count; ++r) {
    double mx = 0.0;
    for (const int c : cols) mx = std::max(mx, std::abs(full(r, c)));
    if (mx > kNegligible) rows.push_back(r);
  }
  if (rows.empty() || cols.empty()) return 0.0;

  Eigen::MatrixXd coupling(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = full(rows[i], cols[j]);
    }
  }
  const Eigen::VectorXd sigma = detail::singular_values(std::move(coupling));
  double entropy = 0.0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    const double s = sigma(k);
    if (s > 1.0 + 1e-10) {
      throw InvalidCovariance("covariance coupling singular value " + format_number(s) + " exceeds 1");
    }
    const double s2 = std::min(s * s, 1.0);
    // (1 - nu)/2 with nu = sqrt(1 - s^2), written without cancellation.
    const double p = s2 / (2.0 * (1.0 + std::sqrt(1.0 - s2)));
    entropy += binary_entropy(p);
  }
  return entropy / 2.0;
}

GaussianEntropyProvider::GaussianEntropyProvider(CovarianceMatrix cov, Route route)
    : cov_(std::move(cov)), route_(route) {
  if (route_ == Route::Automatic) {
    route_ = cov_.is_pure() ? Route::ComplementCoupling : Route::RestrictedBlock;
  }
}

double GaussianEntropyProvider::subsystem_entropy(int ell, int m) {
  check_window(cov_, ell, m);
  const long long key = static_cast<long long>(ell) * (cov_.num_sites() + 1) + m;
  {
    std::lock_guard lock(mutex_);
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double s = route_ == Route::ComplementCoupling ? gaussian_subsystem_entropy_pure(cov_, ell, m)
                                                       : gaussian_subsystem_entropy(cov_, ell, m);
  std::lock_guard lock(mutex_);
  cache_.emplace(key, s);
  return s;
}

void write_covariance_csv(std::ostream& out, const CovarianceMatrix& cov) {
  const auto& m = cov.matrix();
  out << "j,k,value\n";
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index k = j + 1; k < m.cols(); ++k) {
      out << j << ',' << k << ',' << format_number(m(j, k)) << "\n";
    }
  }
}

CovarianceMatrix read_covariance_csv(std::istream& in) {
  std::string line;
  std::vector<std::tuple<int, int, double>> entries;
  bool header_seen = false;
  int n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "j,k,value") throw std::runtime_error("covariance CSV: bad header");
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 3) throw std::runtime_error("covariance CSV: expected 3 columns");
    const int j = static_cast<int>(parse_int(f[0]));
    const int k = static_cast<int>(parse_int(f[1]));
    if (j < 0 || k <= j) throw std::runtime_error("covariance CSV: entries must satisfy j < k");
    entries.emplace_back(j, k, parse_double(f[2]));
    n = std::max(n, k + 1);
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [j, k, v] : entries) {
    m(j, k) = v;
    m(k, j) = -v;
  }
  return CovarianceMatrix(std::move(m));
}

}  // namespace infolat
