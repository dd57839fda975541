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

#include "infolat/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "infolat/errors.hpp"
#include "infolat/rng.hpp"
#include "binary_io.hpp"

using infolat::detail::get_f64;
using infolat::detail::get_u32;
using infolat::detail::put_f64;
using infolat::detail::put_u32;

namespace infolat {

namespace {

std::size_t ipow(int base, int exponent) {
  std::size_t result = 1;
  for (int k = 0; k < exponent; ++k) result *= static_cast<std::size_t>(base);
  return result;
}

void check_window(const DenseState& state, int ell, int m) {
  if (ell < 0 || m < 0 || m + ell > state.num_sites() - 1) {
    throw std::out_of_range("subsystem [" + std::to_string(m) + ", " + std::to_string(m + ell) +
                            "] outside a chain of " + std::to_string(state.num_sites()) + " sites");
  }
}

std::vector<int> window_sites(int ell, int m) {
  std::vector<int> sites(static_cast<std::size_t>(ell + 1));
  for (int k = 0; k <= ell; ++k) sites[static_cast<std::size_t>(k)] = m + k;
  return sites;
}

}  // namespace

DenseState::DenseState(int num_sites, Eigen::VectorXcd amplitudes, int local_dim)
    : num_sites_(num_sites), local_dim_(local_dim), amplitudes_(std::move(amplitudes)) {
  if (num_sites < 1) throw std::invalid_argument("state needs at least one site");
  if (local_dim < 2) throw std::invalid_argument("local dimension must be >= 2");
  if (static_cast<std::size_t>(amplitudes_.size()) != ipow(local_dim, num_sites)) {
    throw std::invalid_argument("amplitude count does not match d^L");
  }
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > 1e-10) {
    throw std::invalid_argument("state is not normalized");
  }
}

std::size_t DenseState::site_stride(int site) const {
  return ipow(local_dim_, num_sites_ - 1 - site);
}

DenseState product_state(int num_sites, int local_dim) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ipow(local_dim, num_sites)));
  amps(0) = 1.0;
  return DenseState(num_sites, std::move(amps), local_dim);
}

DenseState ghz_state(int num_sites) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ipow(2, num_sites)));
  amps(0) = std::numbers::sqrt2 / 2.0;
  amps(amps.size() - 1) = std::numbers::sqrt2 / 2.0;
  return DenseState(num_sites, std::move(amps));
}

DenseState bell_pair_chain(int num_sites) {
  if (num_sites % 2 != 0) throw std::invalid_argument("Bell-pair chain needs an even site count");
  // (|00> + |11>)/sqrt2 on every pair.
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ipow(2, num_sites)));
  const int pairs = num_sites / 2;
  const double weight = std::pow(0.5, pairs / 2.0);
  for (std::size_t mask = 0; mask < ipow(2, pairs); ++mask) {
    std::size_t index = 0;
    for (int p = 0; p < pairs; ++p) {
      const std::size_t bit = (mask >> (pairs - 1 - p)) & 1U;
      index = (index << 2) | (bit ? 3U : 0U);
    }
    amps(static_cast<Eigen::Index>(index)) = weight;
  }
  return DenseState(num_sites, std::move(amps));
}

DenseState haar_random_state(int num_sites, std::uint64_t seed) {
  if (num_sites < 1 || num_sites > kMaxDenseSites) {
    throw std::invalid_argument("Haar sampling supports 1 <= L <= " + std::to_string(kMaxDenseSites));
  }
  Rng rng(seed);
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(ipow(2, num_sites)));
  for (Eigen::Index k = 0; k < amps.size(); ++k) amps(k) = rng.complex_normal();
  amps /= amps.norm();
  return DenseState(num_sites, std::move(amps));
}

DenseState apply_site_unitary(const DenseState& state, int site, const Eigen::MatrixXcd& unitary) {
  const int d = state.local_dim();
  if (unitary.rows() != d || unitary.cols() != d) throw std::invalid_argument("unitary must be d x d");
  const std::size_t stride = state.site_stride(site);
  const auto& in = state.amplitudes();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const int digit = static_cast<int>((i / stride) % static_cast<std::size_t>(d));
    const std::size_t base = i - static_cast<std::size_t>(digit) * stride;
    for (int r = 0; r < d; ++r) {
      out(static_cast<Eigen::Index>(base + static_cast<std::size_t>(r) * stride)) +=
          unitary(r, digit) * in(static_cast<Eigen::Index>(i));
    }
  }
  out /= out.norm();
  return DenseState(state.num_sites(), std::move(out), d);
}

Eigen::MatrixXcd bipartition_matrix(const DenseState& state, std::span<const int> sites) {
  const int L = state.num_sites();
  const int d = state.local_dim();
  std::vector<char> in_set(static_cast<std::size_t>(L), 0);
  for (const int s : sites) {
    if (s < 0 || s >= L) throw std::out_of_range("site index out of range");
    in_set[static_cast<std::size_t>(s)] = 1;
  }
  if (!std::is_sorted(sites.begin(), sites.end()) ||
      std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
    throw std::invalid_argument("site set must be sorted and unique");
  }
  const int k = static_cast<int>(sites.size());
  // Row/column stride contributed by each site's digit.
  std::vector<std::size_t> row_stride(static_cast<std::size_t>(L), 0);
  std::vector<std::size_t> col_stride(static_cast<std::size_t>(L), 0);
  std::size_t r = 1, c = 1;
  for (int s = L - 1; s >= 0; --s) {
    if (in_set[static_cast<std::size_t>(s)]) {
      row_stride[static_cast<std::size_t>(s)] = r;
      r *= static_cast<std::size_t>(d);
    } else {
      col_stride[static_cast<std::size_t>(s)] = c;
      c *= static_cast<std::size_t>(d);
    }
  }
  Eigen::MatrixXcd psi(static_cast<Eigen::Index>(ipow(d, k)), static_cast<Eigen::Index>(ipow(d, L - k)));
  const auto& amps = state.amplitudes();
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    std::size_t rest = i, row = 0, col = 0;
    for (int s = L - 1; s >= 0; --s) {
      const std::size_t digit = rest % static_cast<std::size_t>(d);
      rest /= static_cast<std::size_t>(d);
      row += digit * row_stride[static_cast<std::size_t>(s)];
      col += digit * col_stride[static_cast<std::size_t>(s)];
    }
    psi(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = amps(static_cast<Eigen::Index>(i));
  }
  return psi;
}

ReducedDensityMatrix reduced_density_matrix(const DenseState& state, std::span<const int> sites) {
  const Eigen::MatrixXcd psi = bipartition_matrix(state, sites);
  ReducedDensityMatrix out;
  out.num_sites = static_cast<int>(sites.size());
  out.local_dim = state.local_dim();
  out.rho = psi * psi.adjoint();
  return out;
}

ReducedDensityMatrix reduced_density_matrix(const DenseState& state, int ell, int m) {
  check_window(state, ell, m);
  const auto sites = window_sites(ell, m);
  return reduced_density_matrix(state, sites);
}

double spectrum_entropy_bits(std::span<const double> eigenvalues) {
  double entropy = 0.0;
  for (double p : eigenvalues) {
    if (p < -1e-10) {
      throw InvalidDensityMatrix("negative eigenvalue " + std::to_string(p) + " in density matrix");
    }
    p = std::clamp(p, 0.0, 1.0);
    if (p <= 1e-14) continue;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

double entropy_bits(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed on density matrix");
  const Eigen::VectorXd& w = solver.eigenvalues();
  return spectrum_entropy_bits(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())));
}

double entropy_bits(const ReducedDensityMatrix& rho) { return entropy_bits(rho.rho); }

double schmidt_entropy_bits(const Eigen::VectorXd& singular_values) {
  double entropy = 0.0;
  for (const double s : singular_values) {
    const double p = std::min(s * s, 1.0);
    if (p > 0.0) entropy -= p * std::log2(p);
  }
  return entropy;
}

DenseEntropyProvider::DenseEntropyProvider(DenseState state) : state_(std::move(state)) {
  if (state_.num_sites() > kMaxDenseSites) {
    throw std::invalid_argument("dense backend supports at most " + std::to_string(kMaxDenseSites) +
                                " sites");
  }
}

double DenseEntropyProvider::subsystem_entropy(int ell, int m) {
  check_window(state_, ell, m);
  const int L = state_.num_sites();
  if (ell == L - 1) return 0.0;

  const bool touches_edge = m == 0 || m + ell == L - 1;
  if (touches_edge) {
    // One cut: Schmidt values of the amplitude matrix, reshaped on the side
    // with fewer sites.
    std::vector<int> sites;
    if (ell + 1 <= L - ell - 1) {
      sites = window_sites(ell, m);
    } else if (m == 0) {
      sites = window_sites(L - ell - 2, ell + 1);
    } else {
      sites = window_sites(m - 1, 0);
    }
    const Eigen::MatrixXcd psi = bipartition_matrix(state_, sites);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(psi);
    return schmidt_entropy_bits(svd.singularValues());
  }

  std::vector<int> sites;
  if (ell >= L / 2) {
    for (int s = 0; s < L; ++s) {
      if (s < m || s > m + ell) sites.push_back(s);
    }
  } else {
    sites = window_sites(ell, m);
  }
  return entropy_bits(reduced_density_matrix(state_, sites));
}


void write_state_binary(std::ostream& out, const DenseState& state) {
  put_u32(out, static_cast<std::uint32_t>(state.num_sites()));
  put_u32(out, static_cast<std::uint32_t>(state.local_dim()));
  for (const auto& a : state.amplitudes()) {
    put_f64(out, a.real());
    put_f64(out, a.imag());
  }
}

DenseState read_state_binary(std::istream& in) {
  const auto L = static_cast<int>(get_u32(in));
  const auto d = static_cast<int>(get_u32(in));
  if (L < 1 || d < 2 || std::pow(static_cast<double>(d), L) > std::pow(2.0, kMaxDenseSites)) {
    throw std::runtime_error("state file: unsupported L=" + std::to_string(L) + ", d=" + std::to_string(d));
  }
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(ipow(d, L)));
  for (Eigen::Index k = 0; k < amps.size(); ++k) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    amps(k) = {re, im};
  }
  return DenseState(L, std::move(amps), d);
}

void write_state_json(std::ostream& out, const DenseState& state) {
  nlohmann::json j;
  j["L"] = state.num_sites();
  j["d"] = state.local_dim();
  auto& amps = j["amplitudes"] = nlohmann::json::array();
  for (const auto& a : state.amplitudes()) amps.push_back({a.real(), a.imag()});
  out << j.dump() << "\n";
}

DenseState read_state_json(std::istream& in) {
  const auto j = nlohmann::json::parse(in);
  const int L = j.at("L").get<int>();
  const int d = j.value("d", 2);
  const auto& arr = j.at("amplitudes");
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    amps(static_cast<Eigen::Index>(k)) = {arr[k].at(0).get<double>(), arr[k].at(1).get<double>()};
  }
  return DenseState(L, std::move(amps), d);
}

}  // namespace infolat
