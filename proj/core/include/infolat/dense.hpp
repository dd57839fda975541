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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "infolat/lattice.hpp"

namespace infolat {

inline constexpr int kMaxDenseSites = 14;

// Pure state of L sites as d^L amplitudes. Site 0 is the most significant
// digit of the basis index.
class DenseState {
 public:
  DenseState() = default;
  DenseState(int num_sites, Eigen::VectorXcd amplitudes, int local_dim = 2);

  int num_sites() const { return num_sites_; }
  int local_dim() const { return local_dim_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }

  double norm() const { return amplitudes_.norm(); }

  // Stride of a site's digit in the basis index.
  std::size_t site_stride(int site) const;

 private:
  int num_sites_ = 0;
  int local_dim_ = 2;
  Eigen::VectorXcd amplitudes_;
};

DenseState product_state(int num_sites, int local_dim = 2);
DenseState ghz_state(int num_sites);
// Bell pairs on sites (0,1), (2,3), ...; num_sites must be even.
DenseState bell_pair_chain(int num_sites);

// Standard complex Gaussian amplitudes, normalized. L <= kMaxDenseSites.
DenseState haar_random_state(int num_sites, std::uint64_t seed);

// Applies a d x d unitary to one site.
DenseState apply_site_unitary(const DenseState& state, int site, const Eigen::MatrixXcd& unitary);

struct ReducedDensityMatrix {
  int num_sites = 0;
  int local_dim = 2;
  Eigen::MatrixXcd rho;
};

ReducedDensityMatrix reduced_density_matrix(const DenseState& state, int ell, int m);
// Reduced state of an arbitrary sorted set of sites.
ReducedDensityMatrix reduced_density_matrix(const DenseState& state, std::span<const int> sites);

// Amplitudes reshaped to a (d^|sites| x d^(L-|sites|)) matrix whose rows are
// labelled by the configuration of `sites`.
Eigen::MatrixXcd bipartition_matrix(const DenseState& state, std::span<const int> sites);

// -sum p log2 p over a spectrum, with eigenvalues clamped into [0, 1] within
// 1e-10 and terms at or below 1e-14 dropped. Throws InvalidDensityMatrix for
// eigenvalues below -1e-10.
double spectrum_entropy_bits(std::span<const double> eigenvalues);
double entropy_bits(const ReducedDensityMatrix& rho);
double entropy_bits(const Eigen::MatrixXcd& rho);
// Entropy from Schmidt coefficients s_k (probabilities s_k^2).
double schmidt_entropy_bits(const Eigen::VectorXd& singular_values);

// Exact entropies of a dense pure state. Subsystems touching an edge use the
// Schmidt values of the reshaped amplitude matrix; bulk subsystems use the
// reduced density matrix of the window or of its (two-piece) complement,
// whichever has fewer sites.
class DenseEntropyProvider : public EntropyProvider {
 public:
  explicit DenseEntropyProvider(DenseState state);

  int num_sites() const override { return state_.num_sites(); }
  int local_dim() const override { return state_.local_dim(); }
  double subsystem_entropy(int ell, int m) override;
  bool concurrent_queries() const override { return true; }

  const DenseState& state() const { return state_; }

 private:
  DenseState state_;
};

// Binary layout: u32 L, u32 d, then d^L little-endian (float64 re, float64 im).
void write_state_binary(std::ostream& out, const DenseState& state);
DenseState read_state_binary(std::istream& in);

// JSON alternative: {"L":..,"d":..,"amplitudes":[[re,im],...]}.
void write_state_json(std::ostream& out, const DenseState& state);
DenseState read_state_json(std::istream& in);

}  // namespace infolat
