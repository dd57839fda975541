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

#include "infolat/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "infolat/errors.hpp"
#include "infolat/format.hpp"

namespace infolat {

SsaViolation::SsaViolation(int ell, int m, double value)
    : NumericalError("strong subadditivity violated at ell=" + std::to_string(ell) +
                     ", m=" + std::to_string(m) + ": local information " +
                     format_number(value) + " bits"),
      ell_(ell),
      m_(m),
      value_(value) {}

InformationLattice::InformationLattice(int num_sites, int local_dim)
    : local_dim_(local_dim), values_(num_sites) {
  if (num_sites < 1) throw std::invalid_argument("lattice needs at least one site");
  if (local_dim < 2) throw std::invalid_argument("local dimension must be >= 2");
}

double InformationLattice::total() const {
  double sum = 0.0;
  for (const double v : values_.values()) sum += v;
  return sum;
}

double InformationLattice::contained_sum(SubsystemId id) const {
  double sum = 0.0;
  for (int ell = 0; ell <= id.ell; ++ell) {
    for (int m = id.m; m + ell <= id.last_site(); ++m) sum += values_(ell, m);
  }
  return sum;
}

double InformationLattice::min_value() const {
  const auto& v = values_.values();
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

double ScaleProfile::total() const {
  double sum = 0.0;
  for (const double v : totals) sum += v;
  return sum;
}

EntropyTable entropy_table(EntropyProvider& provider, const LatticeOptions& options) {
  const int L = provider.num_sites();
  if (L < 1) throw std::invalid_argument("provider has no sites");
  EntropyTable table(L);

  const int threads = provider.concurrent_queries() ? std::max(1, options.threads) : 1;
  if (threads == 1) {
    for (int ell = 0; ell < L; ++ell) {
      for (int m = 0; m + ell < L; ++m) table(ell, m) = provider.subsystem_entropy(ell, m);
    }
    return table;
  }

  std::vector<SubsystemId> ids;
  ids.reserve(table.size());
  for (int ell = 0; ell < L; ++ell) {
    for (int m = 0; m + ell < L; ++m) ids.push_back({ell, m});
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (int w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      try {
        for (std::size_t k = next++; k < ids.size(); k = next++) {
          table(ids[k].ell, ids[k].m) = provider.subsystem_entropy(ids[k].ell, ids[k].m);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = ids.size();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
  return table;
}

InformationLattice local_information(const EntropyTable& S, int local_dim) {
  const int L = S.num_sites();
  if (L < 1) throw std::invalid_argument("empty entropy table");
  InformationLattice lattice(L, local_dim);
  const double site_bits = std::log2(static_cast<double>(local_dim));

  for (int ell = 0; ell < L; ++ell) {
    for (int m = 0; m + ell < L; ++m) {
      // Dimension terms cancel for ell >= 1, so the combination is formed from
      // entropies alone; this keeps the absolute error at the entropy level.
      double value;
      if (ell == 0) {
        value = site_bits - S(0, m);
      } else if (ell == 1) {
        value = S(0, m) + S(0, m + 1) - S(1, m);
      } else {
        value = S(ell - 1, m) + S(ell - 1, m + 1) - S(ell, m) - S(ell - 2, m + 1);
      }
      if (value < 0.0) {
        if (value < -kSsaTolerance) throw SsaViolation(ell, m, value);
        value = 0.0;
      }
      lattice(ell, m) = value;
    }
  }
  return lattice;
}

InformationLattice local_information(EntropyProvider& provider, const LatticeOptions& options) {
  if (provider.num_sites() < 2) {
    throw std::invalid_argument("information lattice needs at least two sites");
  }
  return local_information(entropy_table(provider, options), provider.local_dim());
}

ScaleProfile info_per_scale(const InformationLattice& lattice) {
  ScaleProfile profile;
  profile.num_sites = lattice.num_sites();
  profile.local_dim = lattice.local_dim();
  profile.totals.assign(static_cast<std::size_t>(lattice.num_sites()), 0.0);
  for (int ell = 0; ell < lattice.num_sites(); ++ell) {
    double sum = 0.0;
    for (const double v : lattice.row(ell)) sum += v;
    profile.totals[static_cast<std::size_t>(ell)] = sum;
  }
  return profile;
}

double subsystem_decomposition_check(const InformationLattice& lattice,
                                     EntropyProvider& provider, SubsystemId id) {
  if (!id.valid_for(lattice.num_sites())) {
    throw std::out_of_range("subsystem outside the lattice");
  }
  const double site_bits = std::log2(static_cast<double>(lattice.local_dim()));
  const double information = (id.ell + 1) * site_bits - provider.subsystem_entropy(id.ell, id.m);
  return std::abs(information - lattice.contained_sum(id));
}

namespace {

bool is_comment(const std::string& line) { return !line.empty() && line.front() == '#'; }

// Parses "key=value" tokens from a metadata comment line.
int metadata_int(const std::string& line, const std::string& key, int fallback) {
  const std::string token = " " + key + "=";
  const auto pos = line.find(token);
  if (pos == std::string::npos) return fallback;
  const auto start = pos + token.size();
  auto end = line.find(' ', start);
  if (end == std::string::npos) end = line.size();
  return static_cast<int>(parse_int(std::string_view(line).substr(start, end - start)));
}

}  // namespace

void write_lattice_csv(std::ostream& out, const InformationLattice& lattice,
                       const std::vector<std::string>& provenance) {
  out << "# infolat lattice L=" << lattice.num_sites() << " d=" << lattice.local_dim() << "\n";
  for (const auto& line : provenance) out << "# " << line << "\n";
  out << "ell,two_n,i_bits\n";
  for (int ell = 0; ell < lattice.num_sites(); ++ell) {
    for (int m = 0; m + ell < lattice.num_sites(); ++m) {
      out << ell << ',' << 2 * m + ell << ',' << format_number(lattice(ell, m)) << "\n";
    }
  }
}

LatticeFile read_lattice_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> provenance;
  int L = -1;
  int d = 2;
  bool header_seen = false;
  struct Row {
    int ell;
    int two_n;
    double value;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (is_comment(line)) {
      if (line.rfind("# infolat lattice", 0) == 0) {
        L = metadata_int(line, "L", -1);
        d = metadata_int(line, "d", 2);
      } else {
        provenance.push_back(line.size() > 2 ? line.substr(2) : std::string());
      }
      continue;
    }
    if (!header_seen) {
      if (line != "ell,two_n,i_bits") throw std::runtime_error("lattice CSV: bad header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) throw std::runtime_error("lattice CSV: expected 3 columns: " + line);
    rows.push_back({static_cast<int>(parse_int(fields[0])), static_cast<int>(parse_int(fields[1])),
                    parse_double(fields[2])});
  }
  if (!header_seen) throw std::runtime_error("lattice CSV: missing header");
  if (L < 0) {
    L = 0;
    for (const auto& r : rows) L += r.ell == 0 ? 1 : 0;
  }
  if (L < 1) throw std::runtime_error("lattice CSV: no rows");
  if (rows.size() != static_cast<std::size_t>(L) * (L + 1) / 2) {
    throw std::runtime_error("lattice CSV: expected " + std::to_string(L * (L + 1) / 2) +
                             " rows, found " + std::to_string(rows.size()));
  }
  LatticeFile file{InformationLattice(L, d), std::move(provenance)};
  TriangularTable<char> seen(L, 0);
  for (const auto& r : rows) {
    const int twice_m = r.two_n - r.ell;
    if (r.ell < 0 || r.ell >= L || twice_m < 0 || twice_m % 2 != 0 || twice_m / 2 + r.ell >= L) {
      throw std::runtime_error("lattice CSV: invalid key (" + std::to_string(r.ell) + ", " +
                               std::to_string(r.two_n) + ")");
    }
    const int m = twice_m / 2;
    if (seen(r.ell, m)) throw std::runtime_error("lattice CSV: duplicate key");
    seen(r.ell, m) = 1;
    file.lattice(r.ell, m) = r.value;
  }
  return file;
}

void write_profile_csv(std::ostream& out, const ScaleProfile& profile,
                       const std::vector<std::string>& provenance) {
  for (const auto& line : provenance) out << "# " << line << "\n";
  out << "ell,I_ell\n";
  for (std::size_t ell = 0; ell < profile.totals.size(); ++ell) {
    out << ell << ',' << format_number(profile.totals[ell]) << "\n";
  }
}

ScaleProfile read_profile_csv(std::istream& in) {
  ScaleProfile profile;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || is_comment(line)) continue;
    if (!header_seen) {
      if (line != "ell,I_ell") throw std::runtime_error("profile CSV: bad header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) throw std::runtime_error("profile CSV: expected 2 columns");
    if (parse_int(fields[0]) != static_cast<long long>(profile.totals.size())) {
      throw std::runtime_error("profile CSV: scales must be consecutive from 0");
    }
    profile.totals.push_back(parse_double(fields[1]));
  }
  profile.num_sites = static_cast<int>(profile.totals.size());
  return profile;
}

}  // namespace infolat
