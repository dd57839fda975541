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

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "binary_io.hpp"
#include "infolat/mps.hpp"

namespace infolat {

void write_mps(std::ostream& out, const MatrixProductState& mps) {
  const int L = mps.num_sites();
  nlohmann::json header;
  header["format"] = "infolat-mps";
  header["version"] = 1;
  header["L"] = L;
  header["d"] = mps.local_dim();
  header["bond_dims"] = mps.bond_dims();
  header["canonical"] = std::vector<std::string>(static_cast<std::size_t>(L), mps.canonical() ? "left" : "none");
  if (mps.canonical()) {
    nlohmann::json values = nlohmann::json::array();
    for (int k = 0; k <= L; ++k) {
      const auto& s = mps.schmidt_values(k);
      values.push_back(std::vector<double>(s.data(), s.data() + s.size()));
    }
    header["schmidt_values"] = std::move(values);
  }
  header["truncated"] = mps.truncated();
  header["discarded_weight"] = mps.discarded_weight();
  header["pure"] = mps.pure();
  out << header.dump() << '\n';
  for (int k = 0; k < L; ++k) {
    const auto& t = mps.site(k);
    for (Eigen::Index l = 0; l < t[0].rows(); ++l) {
      for (const auto& a : t) {
        for (Eigen::Index r = 0; r < a.cols(); ++r) {
          detail::put_f64(out, a(l, r).real());
          detail::put_f64(out, a(l, r).imag());
        }
      }
    }
  }
}

MatrixProductState read_mps(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("MPS file: missing header");
  const auto header = nlohmann::json::parse(line);
  if (header.value("format", "") != "infolat-mps") throw std::runtime_error("MPS file: unknown format");
  if (header.value("version", 0) != 1) throw std::runtime_error("MPS file: unsupported version");
  const int L = header.at("L").get<int>();
  const int d = header.at("d").get<int>();
  const auto dims = header.at("bond_dims").get<std::vector<int>>();
  if (L < 1 || d < 2 || static_cast<int>(dims.size()) != L + 1) {
    throw std::runtime_error("MPS file: inconsistent L, d, bond_dims");
  }
  for (const int chi : dims) {
    if (chi < 1) throw std::runtime_error("MPS file: bond dimensions must be positive");
  }
  std::vector<MatrixProductState::SiteTensor> sites;
  for (int k = 0; k < L; ++k) {
    const int cl = dims[static_cast<std::size_t>(k)];
    const int cr = dims[static_cast<std::size_t>(k + 1)];
    MatrixProductState::SiteTensor t(static_cast<std::size_t>(d), Eigen::MatrixXcd(cl, cr));
    for (int l = 0; l < cl; ++l) {
      for (auto& a : t) {
        for (int r = 0; r < cr; ++r) {
          const double re = detail::get_f64(in);
          const double im = detail::get_f64(in);
          a(l, r) = {re, im};
        }
      }
    }
    sites.push_back(std::move(t));
  }
  MatrixProductState mps(std::move(sites), d);
  mps.set_truncation(header.value("truncated", false), header.value("discarded_weight", 0.0));
  mps.set_pure(header.value("pure", true));

  bool left = header.contains("canonical");
  if (left) {
    const auto flags = header.at("canonical").get<std::vector<std::string>>();
    if (static_cast<int>(flags.size()) != L) throw std::runtime_error("MPS file: one canonical flag per site");
    for (const auto& f : flags) left = left && f == "left";
  }
  if (left && header.contains("schmidt_values")) {
    std::vector<Eigen::VectorXd> values;
    for (const auto& v : header.at("schmidt_values")) {
      const auto s = v.get<std::vector<double>>();
      values.emplace_back(Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(s.size())));
    }
    mps.set_canonical(std::move(values));
  }
  return mps;
}

}  // namespace infolat
