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

#include "infolat/length_scales.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace infolat {

namespace {

// Per-scale totals with tolerated negative noise mapped to zero.
double clamped(const ScaleProfile& profile, int ell) {
  const double v = profile.totals[static_cast<std::size_t>(ell)];
  return v < 0.0 ? 0.0 : v;
}

void require_profile(const ScaleProfile& profile) {
  if (profile.totals.empty() ||
      static_cast<int>(profile.totals.size()) != profile.num_sites) {
    throw std::invalid_argument("malformed scale profile");
  }
}

}  // namespace

std::optional<double> expected_correlation_length(const ScaleProfile& profile) {
  require_profile(profile);
  const int L = profile.num_sites;
  double weighted = 0.0;
  double total = 0.0;
  for (int ell = 0; ell <= L / 2 && ell < L; ++ell) {
    const double v = clamped(profile, ell);
    weighted += ell * v;
    total += v;
  }
  if (total <= 1e-12) return std::nullopt;
  return weighted / total;
}

DecayFit correlation_decay_fit(const ScaleProfile& profile, int lo, int hi) {
  require_profile(profile);
  DecayFit fit;
  hi = std::min(hi, profile.num_sites - 1);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int ell = std::max(lo, 0); ell <= hi; ++ell) {
    const double v = profile.totals[static_cast<std::size_t>(ell)];
    if (!(v > kFitFloor)) continue;
    const double y = std::log(v);
    sx += ell;
    sy += y;
    sxx += static_cast<double>(ell) * ell;
    sxy += ell * y;
    ++n;
  }
  fit.points = n;
  if (n < 3) return fit;
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  fit.slope = slope;
  fit.intercept = (sy - slope * sx) / n;
  if (std::abs(slope) < 1e-12) {
    fit.lambda = std::numeric_limits<double>::infinity();
  } else {
    fit.lambda = -1.0 / slope;
  }
  return fit;
}

DecayFit correlation_decay_fit(const ScaleProfile& profile) {
  const int L = profile.num_sites;
  return correlation_decay_fit(profile, L / 4, (L + 1) / 2);
}

std::optional<double> correlation_decay_length(const ScaleProfile& profile) {
  return correlation_decay_fit(profile).lambda;
}

double large_scale_information(const ScaleProfile& profile) {
  require_profile(profile);
  double gamma = 0.0;
  for (int ell = profile.num_sites / 2; ell < profile.num_sites; ++ell) {
    gamma += clamped(profile, ell);
  }
  return gamma;
}

std::optional<double> expected_edge_correlation_length(const ScaleProfile& profile) {
  require_profile(profile);
  const int L = profile.num_sites;
  double weighted = 0.0;
  double total = 0.0;
  for (int ell = L / 2; ell < L; ++ell) {
    const double v = clamped(profile, ell);
    weighted += ell * v;
    total += v;
  }
  if (total < kEdgeInformationThreshold) return std::nullopt;
  return L - 1 - weighted / total;
}

int central_window_size(int num_sites) { return num_sites / 4; }

int central_window_start(int num_sites) {
  // Centered on the middle of the chain; when the window and chain sizes have
  // different parity the window sits one half-site to the left.
  return (num_sites - central_window_size(num_sites)) / 2;
}

std::vector<double> triangle_average(const InformationLattice& lattice, int first_site, int size) {
  if (size < 1 || first_site < 0 || first_site + size > lattice.num_sites()) {
    throw std::invalid_argument("triangle window outside the chain");
  }
  std::vector<double> averages(static_cast<std::size_t>(size), 0.0);
  for (int ell = 0; ell < size; ++ell) {
    double sum = 0.0;
    int count = 0;
    for (int m = first_site; m + ell <= first_site + size - 1; ++m) {
      sum += lattice(ell, m);
      ++count;
    }
    averages[static_cast<std::size_t>(ell)] = sum / count;
  }
  return averages;
}

std::vector<double> central_triangle_average(const InformationLattice& lattice) {
  const int L = lattice.num_sites();
  const int w = central_window_size(L);
  if (w < 1) throw std::invalid_argument("chain too short for a central window");
  return triangle_average(lattice, central_window_start(L), w);
}

AlphaFit alpha_fit_from_averages(std::vector<double> averages, int ell_min, int ell_max) {
  const int w = static_cast<int>(averages.size());
  if (ell_min < 2 || ell_max < ell_min || ell_max > w - 1) {
    throw std::invalid_argument("alpha fit range must satisfy 2 <= ell_min <= ell_max <= " +
                                std::to_string(w - 1));
  }
  AlphaFit fit;
  fit.averages = std::move(averages);
  std::vector<double> samples;
  for (int ell = ell_min; ell <= ell_max; ++ell) {
    const double avg = fit.averages[static_cast<std::size_t>(ell)];
    if (avg > 0.0) samples.push_back(avg * ell * ell);
  }
  if (samples.empty()) throw std::runtime_error("alpha fit: no positive averages in range");
  fit.points = static_cast<int>(samples.size());
  double mean = 0.0;
  for (const double s : samples) mean += s;
  mean /= fit.points;
  fit.alpha = mean;
  if (fit.points > 1) {
    double var = 0.0;
    for (const double s : samples) var += (s - mean) * (s - mean);
    var /= (fit.points - 1);
    fit.standard_error = std::sqrt(var / fit.points);
  }
  return fit;
}

AlphaFit critical_alpha_fit(const InformationLattice& lattice, int ell_min, int ell_max) {
  const int w = central_window_size(lattice.num_sites());
  if (ell_min < 2 || ell_max < ell_min || ell_max > w - 1) {
    throw std::invalid_argument("alpha fit range must satisfy 2 <= ell_min <= ell_max <= " +
                                std::to_string(w - 1));
  }
  return alpha_fit_from_averages(central_triangle_average(lattice), ell_min, ell_max);
}

LengthSummary summarize(const ScaleProfile& profile) {
  LengthSummary summary;
  summary.xi = expected_correlation_length(profile);
  const DecayFit fit = correlation_decay_fit(profile);
  summary.lambda = fit.lambda;
  summary.decay_slope = fit.slope;
  summary.fit_points = fit.points;
  summary.gamma = large_scale_information(profile);
  summary.tau = expected_edge_correlation_length(profile);
  return summary;
}

namespace {

nlohmann::json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return *v;
}

std::optional<double> read_optional(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const auto& v = j.at(key);
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::runtime_error(std::string("summary: bad value for ") + key);
  }
  return v.get<double>();
}

}  // namespace

nlohmann::json summary_to_json(const LengthSummary& s) {
  nlohmann::json j;
  j["xi"] = optional_number(s.xi);
  j["lambda"] = optional_number(s.lambda);
  j["tau"] = optional_number(s.tau);
  j["gamma"] = s.gamma;
  j["alpha"] = optional_number(s.alpha);
  j["alpha_stderr"] = optional_number(s.alpha_stderr);
  j["fit_points"] = s.fit_points;
  j["decay_slope"] = optional_number(s.decay_slope);
  return j;
}

LengthSummary summary_from_json(const nlohmann::json& j) {
  LengthSummary s;
  s.xi = read_optional(j, "xi");
  s.lambda = read_optional(j, "lambda");
  s.tau = read_optional(j, "tau");
  s.gamma = j.at("gamma").get<double>();
  s.alpha = read_optional(j, "alpha");
  s.alpha_stderr = read_optional(j, "alpha_stderr");
  s.fit_points = j.value("fit_points", 0);
  s.decay_slope = read_optional(j, "decay_slope");
  return s;
}

}  // namespace infolat
