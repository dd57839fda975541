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

#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "infolat/lattice.hpp"

namespace infolat {

// Entries at or below this value are left out of log-linear fits.
inline constexpr double kFitFloor = 1e-14;
// Minimum large-scale information for the edge-correlation length to exist.
inline constexpr double kEdgeInformationThreshold = 1e-6;

// Characteristic lengths of one state. std::nullopt marks an undefined value;
// an infinite decay length is stored as +/-infinity.
struct LengthSummary {
  std::optional<double> xi;
  std::optional<double> lambda;
  std::optional<double> tau;
  double gamma = 0.0;
  std::optional<double> alpha;
  std::optional<double> alpha_stderr;
  int fit_points = 0;
  // Slope of ln(I^ell) versus ell from the decay fit; lambda = -1/slope.
  std::optional<double> decay_slope;
};

struct DecayFit {
  std::optional<double> lambda;
  std::optional<double> slope;
  double intercept = 0.0;
  int points = 0;
};

struct AlphaFit {
  double alpha = 0.0;
  double standard_error = 0.0;
  int points = 0;
  // Central-triangle averages i^ell for ell = 0 .. apex (NaN where empty).
  std::vector<double> averages;
};

std::optional<double> expected_correlation_length(const ScaleProfile& profile);

// Ordinary least squares of ln(I^ell) against ell over [lo, hi] inclusive,
// keeping only entries above kFitFloor.
DecayFit correlation_decay_fit(const ScaleProfile& profile, int lo, int hi);
// Fit over the default range [floor(L/4), ceil(L/2)].
DecayFit correlation_decay_fit(const ScaleProfile& profile);
std::optional<double> correlation_decay_length(const ScaleProfile& profile);

double large_scale_information(const ScaleProfile& profile);
std::optional<double> expected_edge_correlation_length(const ScaleProfile& profile);

// First site of the central window of floor(L/4) sites used for the
// scale-invariant amplitude fit.
int central_window_start(int num_sites);
int central_window_size(int num_sites);

// Average of i^ell_n over subsystems inside [first_site, first_site + size), per ell.
std::vector<double> triangle_average(const InformationLattice& lattice, int first_site, int size);
// Same over the central window.
std::vector<double> central_triangle_average(const InformationLattice& lattice);

// alpha = mean of averages[ell] * ell^2 over [ell_min, ell_max] (positive
// entries only); used directly for ensemble-averaged triangles.
AlphaFit alpha_fit_from_averages(std::vector<double> averages, int ell_min, int ell_max);

// Fits i^ell * ell^2 = alpha over [ell_min, ell_max] using central-triangle
// averages. Requires 2 <= ell_min <= ell_max <= floor(L/4) - 1.
AlphaFit critical_alpha_fit(const InformationLattice& lattice, int ell_min, int ell_max);

LengthSummary summarize(const ScaleProfile& profile);

nlohmann::json summary_to_json(const LengthSummary& summary);
LengthSummary summary_from_json(const nlohmann::json& j);

}  // namespace infolat
