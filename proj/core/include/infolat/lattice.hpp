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

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace infolat {

// Numerical slack on strong subadditivity. Local information in
// (-kSsaTolerance, 0) is clamped to zero; anything lower is an error.
inline constexpr double kSsaTolerance = 1e-10;

// Contiguous block of ell + 1 sites starting at site m, i.e. [m, m + ell].
// Its center is n = m + ell / 2; files store 2n to keep keys integral.
struct SubsystemId {
  int ell = 0;
  int m = 0;

  int last_site() const { return m + ell; }
  int two_n() const { return 2 * m + ell; }
  bool valid_for(int num_sites) const {
    return ell >= 0 && m >= 0 && m + ell <= num_sites - 1;
  }
  bool contains(const SubsystemId& other) const {
    return other.m >= m && other.last_site() <= last_site();
  }

  friend auto operator<=>(const SubsystemId&, const SubsystemId&) = default;
};

// Source of von Neumann entropies (in bits) of contiguous subsystems.
class EntropyProvider {
 public:
  virtual ~EntropyProvider() = default;

  virtual int num_sites() const = 0;
  virtual int local_dim() const = 0;

  // Entropy of sites [m, m + ell].
  virtual double subsystem_entropy(int ell, int m) = 0;

  // True if subsystem_entropy may be called from several threads at once.
  virtual bool concurrent_queries() const { return false; }
};

// Triangular table of values indexed by (ell, m); row ell has L - ell entries.
template <typename T>
class TriangularTable {
 public:
  TriangularTable() = default;
  explicit TriangularTable(int num_sites, T fill = T{})
      : num_sites_(num_sites),
        values_(static_cast<std::size_t>(num_sites) * (num_sites + 1) / 2, fill) {}

  int num_sites() const { return num_sites_; }
  std::size_t size() const { return values_.size(); }

  T& operator()(int ell, int m) { return values_[offset(ell) + m]; }
  const T& operator()(int ell, int m) const { return values_[offset(ell) + m]; }

  std::span<T> row(int ell) {
    return {values_.data() + offset(ell), static_cast<std::size_t>(num_sites_ - ell)};
  }
  std::span<const T> row(int ell) const {
    return {values_.data() + offset(ell), static_cast<std::size_t>(num_sites_ - ell)};
  }

  const std::vector<T>& values() const { return values_; }

 private:
  std::size_t offset(int ell) const {
    return static_cast<std::size_t>(ell) * num_sites_ -
           static_cast<std::size_t>(ell) * (ell - 1) / 2;
  }

  int num_sites_ = 0;
  std::vector<T> values_;
};

using EntropyTable = TriangularTable<double>;

// Local information i^ell_n in bits for every contiguous subsystem.
class InformationLattice {
 public:
  InformationLattice() = default;
  InformationLattice(int num_sites, int local_dim = 2);

  int num_sites() const { return values_.num_sites(); }
  int local_dim() const { return local_dim_; }

  double& operator()(int ell, int m) { return values_(ell, m); }
  double operator()(int ell, int m) const { return values_(ell, m); }
  double at(SubsystemId id) const { return values_(id.ell, id.m); }

  std::span<const double> row(int ell) const { return values_.row(ell); }

  // Sum of all entries: the total information of the state.
  double total() const;
  // Sum of the entries of subsystems contained in `id`.
  double contained_sum(SubsystemId id) const;
  double min_value() const;

 private:
  int local_dim_ = 2;
  TriangularTable<double> values_;
};

// Information per scale I^ell = sum_n i^ell_n, ell = 0 .. L-1.
struct ScaleProfile {
  int num_sites = 0;
  int local_dim = 2;
  std::vector<double> totals;

  double total() const;
};

struct LatticeOptions {
  // Worker threads for entropy evaluation; only used when the provider
  // accepts concurrent queries.
  int threads = 1;
};

// Queries every contiguous subsystem in order of increasing ell.
EntropyTable entropy_table(EntropyProvider& provider, const LatticeOptions& options = {});

// Local information from a full entropy table. Throws SsaViolation for
// entries below -kSsaTolerance.
InformationLattice local_information(const EntropyTable& entropies, int local_dim = 2);

InformationLattice local_information(EntropyProvider& provider,
                                     const LatticeOptions& options = {});

ScaleProfile info_per_scale(const InformationLattice& lattice);

// |I(rho_id) - sum of i over subsystems contained in id|, in bits.
double subsystem_decomposition_check(const InformationLattice& lattice,
                                     EntropyProvider& provider, SubsystemId id);

// Lattice CSV: `ell,two_n,i_bits`, sorted by (ell, two_n), 12 significant
// digits. Lines starting with '#' carry metadata and provenance.
struct LatticeFile {
  InformationLattice lattice;
  std::vector<std::string> provenance;
};

void write_lattice_csv(std::ostream& out, const InformationLattice& lattice,
                       const std::vector<std::string>& provenance = {});
LatticeFile read_lattice_csv(std::istream& in);

void write_profile_csv(std::ostream& out, const ScaleProfile& profile,
                       const std::vector<std::string>& provenance = {});
ScaleProfile read_profile_csv(std::istream& in);

}  // namespace infolat
