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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "infolat/dense.hpp"
#include "infolat/length_scales.hpp"
#include "oracles.hpp"

namespace {

using oracle::profile_of;

infolat::ScaleProfile dense_profile(const infolat::DenseState& s) {
  infolat::DenseEntropyProvider provider(s);
  return infolat::info_per_scale(infolat::local_information(provider));
}

TEST(CorrelationLength, Examples) {
  EXPECT_NEAR(*infolat::expected_correlation_length(dense_profile(infolat::product_state(6))), 0.0, 1e-12);
  EXPECT_NEAR(*infolat::expected_correlation_length(dense_profile(infolat::bell_pair_chain(6))), 1.0, 1e-10);
  EXPECT_NEAR(*infolat::expected_correlation_length(profile_of({2, 2, 0, 0})), 0.5, 1e-15);
}

TEST(CorrelationLength, UndefinedWithoutSmallScaleInformation) {
  EXPECT_FALSE(infolat::expected_correlation_length(profile_of({0, 0, 0, 1})).has_value());
}

TEST(DecayLength, ExactExponential) {
  std::vector<double> v(20);
  for (int ell = 0; ell < 20; ++ell) v[static_cast<std::size_t>(ell)] = std::exp(-ell / 2.0);
  const auto lambda = infolat::correlation_decay_length(profile_of(v));
  ASSERT_TRUE(lambda.has_value());
  EXPECT_NEAR(*lambda, 2.0, 1e-9);
}

TEST(DecayLength, GrowingProfileGivesNegativeLength) {
  std::vector<double> v(20);
  for (int ell = 0; ell < 20; ++ell) v[static_cast<std::size_t>(ell)] = std::pow(4.0, ell);
  const auto fit = infolat::correlation_decay_fit(profile_of(v));
  ASSERT_TRUE(fit.lambda.has_value());
  EXPECT_NEAR(*fit.slope, std::log(4.0), 1e-9);
  EXPECT_NEAR(*fit.lambda, -1.0 / std::log(4.0), 1e-9);
}

TEST(DecayLength, FlatProfileIsInfinite) {
  const auto lambda = infolat::correlation_decay_length(profile_of(std::vector<double>(12, 0.3)));
  ASSERT_TRUE(lambda.has_value());
  EXPECT_TRUE(std::isinf(*lambda));
}

TEST(DecayLength, TooFewPointsIsUndefined) {
  std::vector<double> v(12, 0.0);
  v[0] = 12.0;
  v[3] = 1e-3;
  v[4] = 1e-4;
  EXPECT_FALSE(infolat::correlation_decay_length(profile_of(v)).has_value());
}

TEST(DecayLength, RecoversPlantedLengths) {
  std::mt19937_64 engine(42);
  std::uniform_real_distribution<double> length(0.3, 8.0);
  std::uniform_real_distribution<double> amplitude(0.1, 10.0);
  std::uniform_int_distribution<int> size(8, 60);
  for (int trial = 0; trial < 10; ++trial) {
    const double lambda = length(engine);
    const double a = amplitude(engine);
    const int L = size(engine);
    std::vector<double> v(static_cast<std::size_t>(L));
    for (int ell = 0; ell < L; ++ell) v[static_cast<std::size_t>(ell)] = a * std::exp(-ell / lambda);
    const auto fitted = infolat::correlation_decay_length(profile_of(v));
    if (a * std::exp(-((L + 1) / 2) / lambda) <= infolat::kFitFloor) {
      // Points below the floor are skipped; the remaining ones still fit exactly.
      if (!fitted) continue;
    }
    ASSERT_TRUE(fitted.has_value()) << "trial " << trial;
    EXPECT_NEAR(*fitted, lambda, 1e-8 * lambda) << "trial " << trial;
  }
}

TEST(LargeScaleInformation, Examples) {
  EXPECT_NEAR(infolat::large_scale_information(dense_profile(infolat::product_state(8))), 0.0, 1e-12);
  EXPECT_NEAR(infolat::large_scale_information(dense_profile(infolat::ghz_state(8))), 1.0, 1e-10);
}

TEST(EdgeLength, Examples) {
  const auto ghz = infolat::expected_edge_correlation_length(dense_profile(infolat::ghz_state(8)));
  ASSERT_TRUE(ghz.has_value());
  EXPECT_NEAR(*ghz, 0.0, 1e-10);

  std::vector<double> v(8, 0.0);
  v[0] = 7.0;
  v[6] = 1.0;
  EXPECT_NEAR(*infolat::expected_edge_correlation_length(profile_of(v)), 1.0, 1e-15);

  EXPECT_FALSE(infolat::expected_edge_correlation_length(profile_of({4, 0, 0, 0})).has_value());
}

TEST(EdgeLength, MatchesWeightedAverageIdentity) {
  // tau = L - 1 - <ell> over the top half, so tau lies in [0, L - 1 - floor(L/2)].
  std::mt19937_64 engine(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int L = 4 + trial % 17;
    std::vector<double> v(static_cast<std::size_t>(L));
    for (auto& x : v) x = u(engine);
    const auto tau = infolat::expected_edge_correlation_length(profile_of(v));
    ASSERT_TRUE(tau.has_value());
    double w = 0.0;
    double t = 0.0;
    for (int ell = L / 2; ell < L; ++ell) {
      w += ell * v[static_cast<std::size_t>(ell)];
      t += v[static_cast<std::size_t>(ell)];
    }
    EXPECT_NEAR(*tau, (L - 1) - w / t, 1e-12);
    EXPECT_GE(*tau, -1e-12);
    EXPECT_LE(*tau, L - 1 - L / 2 + 1e-12);
  }
}

TEST(CentralWindow, Geometry) {
  EXPECT_EQ(infolat::central_window_size(100), 25);
  EXPECT_EQ(infolat::central_window_start(100), 37);
  EXPECT_EQ(infolat::central_window_size(64), 16);
  EXPECT_EQ(infolat::central_window_start(64), 24);
}

TEST(AlphaFit, PlantedInverseSquare) {
  const int L = 40;
  infolat::InformationLattice lat(L);
  for (int ell = 0; ell < L; ++ell) {
    for (int m = 0; m + ell < L; ++m) lat(ell, m) = ell >= 2 ? 0.25 / (ell * ell) : 0.0;
  }
  const auto fit = infolat::critical_alpha_fit(lat, 2, 9);
  EXPECT_NEAR(fit.alpha, 0.25, 1e-9);
  EXPECT_NEAR(fit.standard_error, 0.0, 1e-12);
  EXPECT_EQ(fit.points, 8);
}

TEST(AlphaFit, RangeChecks) {
  infolat::InformationLattice lat(40);
  EXPECT_THROW(infolat::critical_alpha_fit(lat, 1, 5), std::invalid_argument);
  EXPECT_THROW(infolat::critical_alpha_fit(lat, 2, 10), std::invalid_argument);
  // All averages zero: nothing to fit.
  EXPECT_THROW(infolat::critical_alpha_fit(lat, 2, 9), std::runtime_error);
}

TEST(AlphaFit, TriangleAverageCountsOnlyInteriorSubsystems) {
  infolat::InformationLattice lat(12);
  for (int ell = 0; ell < 12; ++ell) {
    for (int m = 0; m + ell < 12; ++m) lat(ell, m) = m;
  }
  const auto avg = infolat::triangle_average(lat, 4, 3);
  ASSERT_EQ(avg.size(), 3U);
  EXPECT_DOUBLE_EQ(avg[0], 5.0);
  EXPECT_DOUBLE_EQ(avg[1], 4.5);
  EXPECT_DOUBLE_EQ(avg[2], 4.0);
}

TEST(Summary, JsonRoundTrip) {
  infolat::LengthSummary s;
  s.xi = 0.6;
  s.lambda = std::numeric_limits<double>::infinity();
  s.gamma = 0.25;
  s.fit_points = 7;
  s.decay_slope = 0.0;
  const auto j = infolat::summary_to_json(s);
  const auto back = infolat::summary_from_json(j);
  EXPECT_EQ(infolat::summary_to_json(back).dump(), j.dump());
  EXPECT_FALSE(back.tau.has_value());
  EXPECT_TRUE(std::isinf(*back.lambda));
}

TEST(Summary, HaarStatesHaveNegativeDecayLength) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto s = infolat::summarize(dense_profile(oracle::haar_state(10, seed)));
    ASSERT_TRUE(s.lambda.has_value());
    EXPECT_LT(*s.lambda, 0.0);
  }
}

}  // namespace
