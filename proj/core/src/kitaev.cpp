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

#include "infolat/kitaev.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCore>
#include <nlohmann/json.hpp>

#include "infolat/errors.hpp"
#include "infolat/rng.hpp"
#include "lapack.hpp"

namespace infolat {

namespace {

std::complex<double> ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::uint32_t site_bit(int num_sites, int site) { return std::uint32_t{1} << (num_sites - 1 - site); }

void check_size(int num_sites) {
  if (num_sites < 1 || num_sites > kMaxDenseSites) {
    throw std::invalid_argument("dense Kitaev chain supports 1.." + std::to_string(kMaxDenseSites) +
                                " sites, got " + std::to_string(num_sites));
  }
}

std::vector<int> sector_lookup(int num_sites, const std::vector<std::uint64_t>& basis) {
  std::vector<int> index(std::size_t{1} << num_sites, -1);
  for (std::size_t k = 0; k < basis.size(); ++k) index[basis[k]] = static_cast<int>(k);
  return index;
}

// Fixes the overall sign: the largest-magnitude component is positive.
void normalize_sign(Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  if (v(best) < 0) v = -v;
}

struct RitzPairs {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;
};

enum class Which { Smallest, LargestMagnitude };

// Lanczos with full reorthogonalization for `wanted` extremal eigenpairs of a
// symmetric operator. Returns nothing if it does not converge.
std::optional<RitzPairs> lanczos(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                                 Eigen::Index dim, int wanted, Which which, double tol) {
  const int max_steps = static_cast<int>(std::min<Eigen::Index>(dim, 400));
  Eigen::MatrixXd basis(dim, max_steps);
  std::vector<double> alpha;
  std::vector<double> beta;

  Rng rng(0x1a2c2e5ULL);
  Eigen::VectorXd v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = rng.uniform(-1.0, 1.0);
  v.normalize();

  for (int j = 0; j < max_steps; ++j) {
    basis.col(j) = v;
    Eigen::VectorXd w = apply(v);
    const double a = v.dot(w);
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd overlaps = basis.leftCols(j + 1).transpose() * w;
      w.noalias() -= basis.leftCols(j + 1) * overlaps;
    }
    const double b = w.norm();

    const int steps = j + 1;
    const bool exhausted = b < 1e-14 || steps == max_steps;
    if (steps < wanted || (steps % 8 != 0 && !exhausted)) {
      beta.push_back(b);
      v = w / b;
      continue;
    }
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), steps);
    Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), steps - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    std::vector<int> order(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) order[static_cast<std::size_t>(k)] = k;
    const Eigen::VectorXd& theta = tri.eigenvalues();
    if (which == Which::LargestMagnitude) {
      std::stable_sort(order.begin(), order.end(),
                       [&](int p, int q) { return std::abs(theta(p)) > std::abs(theta(q)); });
    }
    bool converged = true;
    for (int k = 0; k < wanted; ++k) {
      const int idx = order[static_cast<std::size_t>(k)];
      const double residual = b * std::abs(tri.eigenvectors()(steps - 1, idx));
      if (residual > tol * std::max(1.0, std::abs(theta(order[0])))) converged = false;
    }
    if (converged || b < 1e-14) {
      RitzPairs out;
      for (int k = 0; k < wanted; ++k) {
        const int idx = order[static_cast<std::size_t>(k)];
        out.values.push_back(theta(idx));
        Eigen::VectorXd x = basis.leftCols(steps) * tri.eigenvectors().col(idx);
        x.normalize();
        out.vectors.push_back(std::move(x));
      }
      return out;
    }
    if (exhausted) return std::nullopt;
    beta.push_back(b);
    v = w / b;
  }
  return std::nullopt;
}

SectorEigenpair make_pair(int num_sites, const std::vector<std::uint64_t>& basis, Eigen::VectorXd vec,
                          double energy, Parity parity, bool tie) {
  normalize_sign(vec);
  vec.normalize();
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_sites);
  for (std::size_t k = 0; k < basis.size(); ++k) full(static_cast<Eigen::Index>(basis[k])) = vec(static_cast<Eigen::Index>(k));
  SectorEigenpair out{energy, DenseState(num_sites, std::move(full)), parity, tie};
  return out;
}

// Index of the eigenvalue closest to zero; the lowest index wins among
// candidates within 1e-12 of the minimum |E|.
std::pair<int, bool> closest_to_zero(const std::vector<double>& energies) {
  double best = std::numeric_limits<double>::infinity();
  for (const double e : energies) best = std::min(best, std::abs(e));
  int chosen = -1;
  int candidates = 0;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    if (std::abs(energies[k]) - best <= 1e-12) {
      if (chosen < 0) chosen = static_cast<int>(k);
      ++candidates;
    }
  }
  return {chosen, candidates > 1};
}

}  // namespace

KitaevRealization sample_disorder(int num_sites, double delta, std::uint64_t seed, double g) {
  if (num_sites < 2) throw std::invalid_argument("disordered chain needs at least two sites");
  if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
  KitaevRealization r;
  r.num_sites = num_sites;
  r.g = g;
  r.delta = delta;
  r.seed = seed;
  const double intra = std::exp(-delta / 2.0);
  const double inter = std::exp(delta / 2.0);
  Rng rng(seed);
  r.t.resize(static_cast<std::size_t>(2 * num_sites - 1));
  for (std::size_t k = 0; k < r.t.size(); ++k) r.t[k] = rng.uniform(0.0, k % 2 == 0 ? intra : inter);
  return r;
}

KitaevRealization duality_map(const KitaevRealization& realization) {
  KitaevRealization dual = realization;
  dual.delta = -realization.delta;
  const std::size_t n = realization.t.size();
  for (std::size_t k = 0; k + 1 < n; ++k) dual.t[k] = realization.t[k + 1];
  if (n > 0) dual.t[n - 1] = 0.0;
  return dual;
}

MajoranaString::MajoranaString(int num_sites, std::uint32_t x, std::uint32_t z, int phase)
    : num_sites_(num_sites), x_(x), z_(z), phase_(((phase % 4) + 4) % 4) {
  if (num_sites < 1 || num_sites > 32) throw std::invalid_argument("Majorana string supports 1..32 sites");
  const std::uint64_t limit = std::uint64_t{1} << num_sites;
  if (x >= limit || z >= limit) throw std::invalid_argument("Pauli mask wider than the chain");
}

MajoranaString MajoranaString::majorana(int num_sites, int index) {
  if (index < 0 || index >= 2 * num_sites) throw std::out_of_range("Majorana index outside the chain");
  const int site = index / 2;
  std::uint32_t left = 0;
  for (int s = 0; s < site; ++s) left |= site_bit(num_sites, s);
  const std::uint32_t here = site_bit(num_sites, site);
  // -Z Y = -Z (i X Z) = -i X Z Z_site with X moved left of the Z string.
  if (index % 2 == 0) return {num_sites, here, left, 0};
  return {num_sites, here, left | here, 3};
}

MajoranaString MajoranaString::operator*(const MajoranaString& other) const {
  if (num_sites_ != other.num_sites_) throw std::invalid_argument("Majorana strings of different lengths");
  // X^a Z^b X^c Z^d = (-1)^{|b & c|} X^{a^c} Z^{b^d}.
  const int swaps = std::popcount(z_ & other.x_);
  return {num_sites_, x_ ^ other.x_, z_ ^ other.z_, phase_ + other.phase_ + 2 * (swaps % 2)};
}

std::complex<double> MajoranaString::amplitude(std::uint64_t basis) const {
  const double sign = std::popcount(static_cast<std::uint64_t>(z_) & basis) % 2 == 0 ? 1.0 : -1.0;
  return sign * ipow(phase_);
}

Eigen::MatrixXcd MajoranaString::dense() const {
  const Eigen::Index dim = Eigen::Index{1} << num_sites_;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    out(static_cast<Eigen::Index>(target(static_cast<std::uint64_t>(b))), b) = amplitude(static_cast<std::uint64_t>(b));
  }
  return out;
}

std::vector<PauliTerm> hamiltonian_terms(const KitaevRealization& realization) {
  const int L = realization.num_sites;
  if (L < 1) throw std::invalid_argument("chain needs at least one site");
  if (static_cast<int>(realization.t.size()) != 2 * L - 1) {
    throw std::invalid_argument("expected 2L-1 couplings");
  }
  std::vector<MajoranaString> gamma;
  for (int k = 0; k < 2 * L; ++k) gamma.push_back(MajoranaString::majorana(L, k));

  std::vector<PauliTerm> terms;
  auto add = [&](std::complex<double> coefficient, const MajoranaString& s) {
    // Hermitian terms end up with a real overall coefficient.
    const std::complex<double> c = coefficient * ipow(s.phase());
    if (std::abs(c.imag()) > 1e-12 * std::max(1.0, std::abs(c))) {
      throw NumericalError("non-Hermitian Pauli term in the Kitaev Hamiltonian");
    }
    if (c.real() != 0.0) terms.push_back({c.real(), MajoranaString(L, s.x_mask(), s.z_mask(), 0)});
  };
  for (int k = 0; k + 1 < 2 * L; ++k) {
    add(std::complex<double>(0.0, -realization.t[static_cast<std::size_t>(k)]), gamma[k] * gamma[k + 1]);
  }
  if (realization.g != 0.0) {
    for (int k = 0; k + 3 < 2 * L; ++k) {
      add(realization.g, gamma[k] * gamma[k + 1] * gamma[k + 2] * gamma[k + 3]);
    }
  }
  return terms;
}

Eigen::SparseMatrix<double> build_hamiltonian(const KitaevRealization& realization) {
  check_size(realization.num_sites);
  const auto terms = hamiltonian_terms(realization);
  const std::uint64_t dim = std::uint64_t{1} << realization.num_sites;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(terms.size() * dim);
  for (const auto& term : terms) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      entries.emplace_back(static_cast<int>(term.string.target(b)), static_cast<int>(b),
                           term.coefficient * term.string.amplitude(b).real());
    }
  }
  Eigen::SparseMatrix<double> h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.setFromTriplets(entries.begin(), entries.end());
  h.prune(0.0);
  return h;
}

Parity basis_parity(std::uint64_t basis) { return std::popcount(basis) % 2 == 0 ? Parity::Even : Parity::Odd; }

double parity_expectation(const DenseState& state) {
  double p = 0.0;
  const auto& a = state.amplitudes();
  for (Eigen::Index b = 0; b < a.size(); ++b) {
    p += (basis_parity(static_cast<std::uint64_t>(b)) == Parity::Even ? 1.0 : -1.0) * std::norm(a(b));
  }
  return p;
}

std::vector<std::uint64_t> sector_basis(int num_sites, Parity parity) {
  std::vector<std::uint64_t> out;
  const std::uint64_t dim = std::uint64_t{1} << num_sites;
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (basis_parity(b) == parity) out.push_back(b);
  }
  return out;
}

Eigen::MatrixXd sector_hamiltonian(const KitaevRealization& realization, Parity parity) {
  check_size(realization.num_sites);
  const auto basis = sector_basis(realization.num_sites, parity);
  const auto index = sector_lookup(realization.num_sites, basis);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (const auto& term : hamiltonian_terms(realization)) {
    for (Eigen::Index col = 0; col < n; ++col) {
      const std::uint64_t b = basis[static_cast<std::size_t>(col)];
      const int row = index[term.string.target(b)];
      if (row < 0) throw NumericalError("Hamiltonian term breaks fermion parity");
      h(row, col) += term.coefficient * term.string.amplitude(b).real();
    }
  }
  return h;
}

Eigen::VectorXd sector_spectrum(const KitaevRealization& realization, Parity parity) {
  return detail::symmetric_eigen(sector_hamiltonian(realization, parity), false).values;
}

SectorEigenpair parity_sector_eigensystem(const KitaevRealization& realization, Parity parity,
                                          Target target) {
  const int L = realization.num_sites;
  const auto basis = sector_basis(L, parity);
  const Eigen::MatrixXd h = sector_hamiltonian(realization, parity);
  const double h_norm = std::max(h.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);

  // Full spectrum, then only the one eigenvector that is needed.
  auto full_solve = [&]() {
    int idx = 0;
    bool tie = false;
    if (target == Target::ClosestToZero) {
      const Eigen::VectorXd e = detail::symmetric_eigen(h, false).values;
      std::tie(idx, tie) = closest_to_zero(std::vector<double>(e.data(), e.data() + e.size()));
    }
    const auto pair = detail::symmetric_eigenpair(h, idx);
    return make_pair(L, basis, pair.vectors.col(0), pair.values(0), parity, tie);
  };
  if (h.rows() <= kFullSectorDiagonalization) return full_solve();

  auto accept = [&](const Eigen::VectorXd& x, double energy) {
    return (h * x - energy * x).norm() <= 1e-10 * h_norm;
  };
  if (target == Target::Ground) {
    const auto ritz = lanczos([&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return h * v; }, h.rows(), 1,
                              Which::Smallest, 1e-13);
    if (ritz && accept(ritz->vectors[0], ritz->values[0])) {
      return make_pair(L, basis, ritz->vectors[0], ritz->values[0], parity, false);
    }
    return full_solve();
  }

  const detail::DenseLu lu(h);
  if (lu.singular()) return full_solve();
  const auto ritz = lanczos([&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return lu.solve(v); }, h.rows(),
                            2, Which::LargestMagnitude, 1e-14);
  if (!ritz) return full_solve();
  std::vector<double> energies;
  for (const double theta : ritz->values) {
    if (theta == 0.0 || !std::isfinite(theta)) return full_solve();
    energies.push_back(1.0 / theta);
  }
  for (std::size_t k = 0; k < energies.size(); ++k) {
    if (!accept(ritz->vectors[k], energies[k])) return full_solve();
  }
  // Order the two candidates as the full spectrum would (ascending).
  std::vector<std::size_t> order{0, 1};
  if (energies[1] < energies[0]) std::swap(order[0], order[1]);
  const std::vector<double> sorted{energies[order[0]], energies[order[1]]};
  const auto [pick, tie] = closest_to_zero(sorted);
  const std::size_t k = order[static_cast<std::size_t>(pick)];
  return make_pair(L, basis, ritz->vectors[k], energies[k], parity, tie);
}

SectorEigenpair global_ground_state(const KitaevRealization& realization) {
  auto even = parity_sector_eigensystem(realization, Parity::Even, Target::Ground);
  auto odd = parity_sector_eigensystem(realization, Parity::Odd, Target::Ground);
  const bool tie = std::abs(even.energy - odd.energy) <= 1e-12;
  SectorEigenpair out = odd.energy < even.energy && !tie ? std::move(odd) : std::move(even);
  out.tie_break = tie;
  return out;
}

nlohmann::json realization_to_json(const KitaevRealization& realization) {
  return {{"L", realization.num_sites},
          {"g", realization.g},
          {"delta", realization.delta},
          {"seed", realization.seed},
          {"t", realization.t}};
}

KitaevRealization realization_from_json(const nlohmann::json& j) {
  KitaevRealization r;
  r.num_sites = j.at("L").get<int>();
  r.g = j.at("g").get<double>();
  r.delta = j.at("delta").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.t = j.at("t").get<std::vector<double>>();
  if (r.num_sites < 1 || static_cast<int>(r.t.size()) != 2 * r.num_sites - 1) {
    throw std::invalid_argument("realization: expected 2L-1 couplings");
  }
  return r;
}

}  // namespace infolat
