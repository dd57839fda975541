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

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infolat/dense.hpp"
#include "infolat/lattice.hpp"

namespace infolat {

// Finite MPS. Site k holds d matrices A^sigma of shape chi_k x chi_{k+1}, with
// chi_0 = chi_L = 1. Bond k sits to the left of site k.
//
// In canonical form every A is a left isometry (sum_sigma A^dag A = 1) and the
// state is in the Schmidt gauge: the part to the right of bond k has Gram
// matrix diag(Lambda_k)^2, where Lambda_k are the Schmidt values across bond k.
class MatrixProductState {
 public:
  using SiteTensor = std::vector<Eigen::MatrixXcd>;

  MatrixProductState() = default;
  MatrixProductState(std::vector<SiteTensor> sites, int local_dim);

  int num_sites() const { return static_cast<int>(sites_.size()); }
  int local_dim() const { return local_dim_; }
  // chi_k for k = 0..L.
  int bond_dim(int bond) const;
  std::vector<int> bond_dims() const;

  const SiteTensor& site(int k) const { return sites_.at(static_cast<std::size_t>(k)); }

  bool canonical() const { return canonical_; }
  // Schmidt values of bond k = 0..L (edges hold {1}). Requires canonical().
  const Eigen::VectorXd& schmidt_values(int bond) const;

  // Brings the state to canonical form (normalizing it); exact, no truncation
  // beyond Schmidt values below 1e-15.
  void canonicalize();

  // Declares the tensors canonical with the given Schmidt values (bonds 0..L)
  // without recomputing them. Shapes and isometries are checked, the values
  // themselves are trusted.
  void set_canonical(std::vector<Eigen::VectorXd> schmidt_values);

  bool truncated() const { return truncated_; }
  double discarded_weight() const { return discarded_weight_; }
  void set_truncation(bool truncated, double discarded_weight);

  bool pure() const { return pure_; }
  void set_pure(bool pure) { pure_ = pure; }

  double norm() const;
  // Max deviation of sum_sigma A^dag A from the identity at site k.
  double left_isometry_residual(int k) const;

  Eigen::VectorXcd to_dense() const;

 private:
  std::vector<SiteTensor> sites_;
  int local_dim_ = 2;
  bool canonical_ = false;
  std::vector<Eigen::VectorXd> schmidt_;
  bool truncated_ = false;
  double discarded_weight_ = 0.0;
  bool pure_ = true;
};

// Left-to-right sequence of SVDs. Each bond keeps at most chi_max values
// and discards the smallest ones while their total weight stays within
// trunc_eps. A truncated state is renormalized and recanonicalized.
MatrixProductState mps_from_dense(const DenseState& state, int chi_max, double trunc_eps);

double single_cut_entropy(const MatrixProductState& mps, int bond);

enum class EntropyStrategy { SingleCut, TransferMatrix, ReducedDensityMatrix, ComplementTransferMatrix };

const char* strategy_name(EntropyStrategy strategy);

// Accumulated overlap of the window [first, last]:
// E(a, a', b, b') = sum_sigma conj(N^sigma_{ab}) N^sigma_{a'b'}, N = A_first...A_last,
// a on bond `first`, b on bond `last + 1`.
struct Environment {
  int first = 0;
  int last = -1;
  int chi_left = 1;
  int chi_right = 1;
  std::vector<std::complex<double>> data;

  std::complex<double>& operator()(int a, int ap, int b, int bp) {
    return data[((static_cast<std::size_t>(a) * chi_left + ap) * chi_right + b) * chi_right + bp];
  }
  std::complex<double> operator()(int a, int ap, int b, int bp) const {
    return data[((static_cast<std::size_t>(a) * chi_left + ap) * chi_right + b) * chi_right + bp];
  }
};

enum class Direction { Right, Left };

Environment site_environment(const MatrixProductState& mps, int site);
// Absorbs site last+1 (Right) or first-1 (Left).
void extend_environment(const MatrixProductState& mps, Environment& env, Direction direction);
Environment build_environment(const MatrixProductState& mps, int first, int last,
                              Direction direction = Direction::Right);

// Bulk or edge window entropies by a fixed route. The state must be canonical.
double transfer_matrix_entropy(const MatrixProductState& mps, const Environment& env);
double reduced_density_matrix_entropy(const MatrixProductState& mps, int ell, int m);
double complement_entropy(const MatrixProductState& mps, const Environment& env);

// Auto-canonicalizes a copy if needed. SingleCut needs an edge window and
// ComplementTransferMatrix a pure state.
double double_cut_entropy(const MatrixProductState& mps, int ell, int m, EntropyStrategy strategy);
double complement_entropy(const MatrixProductState& mps, int ell, int m);

// Everything the cost model looks at.
struct WindowShape {
  int num_sites = 0;
  int local_dim = 2;
  int ell = 0;
  int m = 0;
  std::vector<int> bond_dims;  // chi_0..chi_L
  bool pure = true;
};

// Partial environments available for the window: a Right-accumulated one
// over [m, right_last] and a Left-accumulated one over [left_first, m + ell].
struct CacheState {
  int right_last = -1;
  int left_first = -1;
};

struct StrategyChoice {
  EntropyStrategy strategy = EntropyStrategy::TransferMatrix;
  double cost = 0.0;
  // Indexed by EntropyStrategy; infinity where the route does not apply.
  std::array<double, 4> costs{};
};

// Multiply-add counts with unit constants; cubic terms for eigensolves.
StrategyChoice choose_strategy(const WindowShape& shape, const CacheState& cache = {});
StrategyChoice choose_strategy(const MatrixProductState& mps, int ell, int m, const CacheState& cache = {});

// Smallest cost wins; exact ties go TransferMatrix, SingleCut,
// ComplementTransferMatrix, ReducedDensityMatrix.
EntropyStrategy pick_strategy(const std::array<double, 4>& costs);

inline constexpr int kDefaultCacheCapacity = 8;

class MpsEntropyProvider : public EntropyProvider {
 public:
  explicit MpsEntropyProvider(MatrixProductState mps, int cache_capacity = kDefaultCacheCapacity);

  int num_sites() const override { return mps_.num_sites(); }
  int local_dim() const override { return mps_.local_dim(); }
  double subsystem_entropy(int ell, int m) override;

  const MatrixProductState& mps() const { return mps_; }
  int cache_capacity() const { return capacity_; }
  std::size_t cache_size() const { return cache_.size(); }
  // Site absorptions performed so far (environments and window contractions).
  std::uint64_t contraction_count() const { return contractions_; }
  std::array<std::uint64_t, 4> strategy_counts() const { return strategy_counts_; }

 private:
  struct CacheKey {
    int edge = 0;
    Direction direction = Direction::Right;
    bool operator==(const CacheKey&) const = default;
  };
  struct CacheEntry {
    CacheKey key;
    Environment env;
  };

  const CacheEntry* find(CacheKey key) const;
  void store(CacheKey key, Environment env);
  Environment environment_for(int ell, int m, const CacheState& state);

  MatrixProductState mps_;
  int capacity_;
  std::vector<CacheEntry> cache_;  // insertion order, oldest first
  std::uint64_t contractions_ = 0;
  std::array<std::uint64_t, 4> strategy_counts_{};
};

// One-line JSON header, a newline, then the tensors as little-endian float64
// (re, im) pairs, site by site, row-major over (left, physical, right).
void write_mps(std::ostream& out, const MatrixProductState& mps);
MatrixProductState read_mps(std::istream& in);

}  // namespace infolat
