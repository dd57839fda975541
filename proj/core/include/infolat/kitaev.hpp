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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <nlohmann/json_fwd.hpp>

#include "infolat/dense.hpp"
#include "infolat/gaussian.hpp"

namespace infolat {

// H = -i sum_j t_j gamma_j gamma_{j+1} + g sum_j gamma_j gamma_{j+1} gamma_{j+2} gamma_{j+3}
// on 2L Majorana operators; t holds 2L-1 couplings (0-indexed here).
struct KitaevRealization {
  int num_sites = 0;
  double g = 0.0;
  double delta = 0.0;
  std::vector<double> t;
  std::uint64_t seed = 0;

  MajoranaCoupling coupling() const { return MajoranaCoupling(t); }
};

// t_k uniform on [0, e^{-delta/2}] for even k (intra-site) and on
// [0, e^{delta/2}] for odd k, drawn in order from Rng(seed).
KitaevRealization sample_disorder(int num_sites, double delta, std::uint64_t seed, double g = 0.0);

// Shifted-Majorana dual gamma_j -> gamma_{j+1}: t'_k = t_{k+1}, last coupling
// set to zero, delta' = -delta. Exact only up to boundary terms.
KitaevRealization duality_map(const KitaevRealization& realization);

// Product of Majorana operators as i^phase X^x Z^z after Jordan-Wigner, with
// the X factors to the left. Site j is bit (L-1-j) of the masks, so site 0
// is the most significant bit of a basis index, and |1> is occupied.
class MajoranaString {
 public:
  MajoranaString() = default;
  MajoranaString(int num_sites, std::uint32_t x, std::uint32_t z, int phase);

  static MajoranaString identity(int num_sites) { return {num_sites, 0, 0, 0}; }
  // gamma_{2j} = Z_{<j} X_j, gamma_{2j+1} = -Z_{<j} Y_j.
  static MajoranaString majorana(int num_sites, int index);

  int num_sites() const { return num_sites_; }
  std::uint32_t x_mask() const { return x_; }
  std::uint32_t z_mask() const { return z_; }
  int phase() const { return phase_; }

  MajoranaString operator*(const MajoranaString& other) const;
  bool operator==(const MajoranaString&) const = default;

  // Acting on |b>: coefficient and target basis index.
  std::complex<double> amplitude(std::uint64_t basis) const;
  std::uint64_t target(std::uint64_t basis) const { return basis ^ x_; }

  Eigen::MatrixXcd dense() const;

 private:
  int num_sites_ = 0;
  std::uint32_t x_ = 0;
  std::uint32_t z_ = 0;
  int phase_ = 0;
};

struct PauliTerm {
  double coefficient = 0.0;
  MajoranaString string;
};

// All terms of H as real-coefficient Hermitian Pauli strings.
std::vector<PauliTerm> hamiltonian_terms(const KitaevRealization& realization);

// Full 2^L matrix (real symmetric in the computational basis). L <= kMaxDenseSites.
Eigen::SparseMatrix<double> build_hamiltonian(const KitaevRealization& realization);

enum class Parity { Even, Odd };
enum class Target { Ground, ClosestToZero };

// Fermion parity (-1)^N of a basis state.
Parity basis_parity(std::uint64_t basis);

// <P> with P = prod_j Z_j = (-1)^N.
double parity_expectation(const DenseState& state);

// Basis indices of one parity sector, ascending.
std::vector<std::uint64_t> sector_basis(int num_sites, Parity parity);

// H restricted to a parity sector, in the order of sector_basis.
Eigen::MatrixXd sector_hamiltonian(const KitaevRealization& realization, Parity parity);

struct SectorEigenpair {
  double energy = 0.0;
  DenseState state;
  Parity parity = Parity::Even;
  // |E1| = |E2| within 1e-12 for the two candidates closest to zero.
  bool tie_break = false;
};

// Sectors up to this dimension are diagonalized in full; larger ones use
// Lanczos (shift-invert for ClosestToZero) with full reorthogonalization.
inline constexpr int kFullSectorDiagonalization = 1024;

SectorEigenpair parity_sector_eigensystem(const KitaevRealization& realization, Parity parity,
                                          Target target);
// Lowest state over both sectors.
SectorEigenpair global_ground_state(const KitaevRealization& realization);

// All eigenvalues of one sector, ascending (full diagonalization).
Eigen::VectorXd sector_spectrum(const KitaevRealization& realization, Parity parity);

nlohmann::json realization_to_json(const KitaevRealization& realization);
KitaevRealization realization_from_json(const nlohmann::json& j);

}  // namespace infolat
