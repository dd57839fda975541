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

#include <iosfwd>
#include <mutex>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "infolat/lattice.hpp"

namespace infolat {

// Quadratic Majorana Hamiltonian H = (i/4) gamma^T A gamma of a chain with
// nearest-neighbour couplings only: A(j, j+1) = -2 t_j = -A(j+1, j). Only the
// couplings are stored.
class MajoranaCoupling {
 public:
  // couplings.size() + 1 must be even (2L Majorana operators).
  explicit MajoranaCoupling(std::vector<double> couplings);

  int num_sites() const { return static_cast<int>((couplings_.size() + 1) / 2); }
  int num_majoranas() const { return static_cast<int>(couplings_.size() + 1); }
  const std::vector<double>& couplings() const { return couplings_; }

  Eigen::MatrixXd dense() const;

 private:
  std::vector<double> couplings_;
};

// Majorana covariance M(j,k) = (i/2) <[gamma_j, gamma_k]>, real antisymmetric.
class CovarianceMatrix {
 public:
  CovarianceMatrix() = default;
  explicit CovarianceMatrix(Eigen::MatrixXd m);

  int num_sites() const { return static_cast<int>(m_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const { return m_; }

  // max |M M^T - 1|; zero for a pure Gaussian state.
  double purity_residual() const;
  bool is_pure(double tol = 1e-8) const { return purity_residual() < tol; }

  // Reduced state of sites [first_site, first_site + count).
  CovarianceMatrix restrict_to(int first_site, int count) const;

 private:
  Eigen::MatrixXd m_;
};

struct GroundStateDiagnostics {
  // Positive single-particle energies eps_k, ascending.
  std::vector<double> mode_energies;
  // Modes with eps_k below kNearZeroMode; their pairing was fixed by hand.
  int near_zero_modes = 0;
  // More than one near-zero pair: the pairing choice can change entropies.
  bool pairing_ambiguous = false;
  double purity_residual = 0.0;
  double ground_energy = 0.0;
};

inline constexpr double kNearZeroMode = 1e-12;

struct GaussianGroundState {
  CovarianceMatrix covariance;
  GroundStateDiagnostics diagnostics;
};

// Ground-state covariance: every mode with eps_k > 0 is filled with negative
// energy. Exact zero modes are paired into one fermion explicitly.
GaussianGroundState ground_covariance(const MajoranaCoupling& coupling);

// Entropy of sites [m, m + ell] from the eigenvalues +/- i nu_k of the
// restricted block, S = sum_k h2((1 + nu_k)/2).
double gaussian_subsystem_entropy(const CovarianceMatrix& cov, int ell, int m);

// Same entropy for a pure state from the singular values of the block that
// couples the window to its complement, 1 - nu_k^2 = sigma_k^2. Small
// (1 - nu_k) are resolved to full relative precision.
double gaussian_subsystem_entropy_pure(const CovarianceMatrix& cov, int ell, int m);

class GaussianEntropyProvider : public EntropyProvider {
 public:
  enum class Route { Automatic, RestrictedBlock, ComplementCoupling };

  explicit GaussianEntropyProvider(CovarianceMatrix cov, Route route = Route::Automatic);

  int num_sites() const override { return cov_.num_sites(); }
  int local_dim() const override { return 2; }
  double subsystem_entropy(int ell, int m) override;
  bool concurrent_queries() const override { return true; }

  Route route() const { return route_; }

 private:
  CovarianceMatrix cov_;
  Route route_;
  std::mutex mutex_;
  std::unordered_map<long long, double> cache_;
};

// Debug dump: strictly upper triangle as `j,k,value`.
void write_covariance_csv(std::ostream& out, const CovarianceMatrix& cov);
CovarianceMatrix read_covariance_csv(std::istream& in);

}  // namespace infolat
