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
#include <sstream>

#include <gtest/gtest.h>

#include "infolat/errors.hpp"
#include "infolat/mps.hpp"
#include "oracles.hpp"

namespace {

using infolat::EntropyStrategy;

infolat::MatrixProductState exact_mps(const infolat::DenseState& s) {
  return infolat::mps_from_dense(s, 1 << 20, 0.0);
}

double dense_entropy(const infolat::DenseState& s, int ell, int m) {
  std::vector<int> sites;
  for (int k = m; k <= m + ell; ++k) sites.push_back(k);
  return oracle::entropy_bits(oracle::partial_trace(s.amplitudes(), s.num_sites(), 2, sites));
}

// GHZ on four sites whose central Schmidt values were overwritten: the
// tensors no longer describe the claimed spectrum.
infolat::MatrixProductState planted_ghz() {
  auto mps = exact_mps(infolat::ghz_state(4));
  std::vector<Eigen::VectorXd> sv;
  for (int b = 0; b <= 4; ++b) sv.push_back(mps.schmidt_values(b));
  sv[2] = Eigen::Vector2d(1.0, 0.0);
  mps.set_canonical(sv);
  return mps;
}

TEST(MpsFromDense, ProductState) {
  const auto mps = exact_mps(infolat::product_state(6));
  for (const int chi : mps.bond_dims()) EXPECT_EQ(chi, 1);
}

TEST(MpsFromDense, Ghz) {
  const auto mps = exact_mps(infolat::ghz_state(6));
  const auto dims = mps.bond_dims();
  EXPECT_EQ(dims.front(), 1);
  EXPECT_EQ(dims.back(), 1);
  for (int b = 1; b < 6; ++b) {
    EXPECT_EQ(dims[static_cast<std::size_t>(b)], 2);
    EXPECT_NEAR(mps.schmidt_values(b)(0), std::sqrt(0.5), 1e-14);
    EXPECT_NEAR(mps.schmidt_values(b)(1), std::sqrt(0.5), 1e-14);
  }
}

TEST(MpsFromDense, ExactReconstruction) {
  const auto s = oracle::haar_state(10, 3);
  const auto mps = exact_mps(s);
  EXPECT_NEAR(std::abs(s.amplitudes().dot(mps.to_dense())), 1.0, 1e-10);
  EXPECT_FALSE(mps.truncated());
  for (int k = 0; k < 10; ++k) EXPECT_LT(mps.left_isometry_residual(k), 1e-12);
}

TEST(MpsFromDense, TruncationIsRecorded) {
  const auto mps = infolat::mps_from_dense(oracle::haar_state(10, 3), 4, 0.0);
  EXPECT_TRUE(mps.truncated());
  EXPECT_GT(mps.discarded_weight(), 0.0);
  EXPECT_NEAR(mps.norm(), 1.0, 1e-12);
  for (const int chi : mps.bond_dims()) EXPECT_LE(chi, 4);
}

TEST(SingleCut, Examples) {
  const auto product = exact_mps(infolat::product_state(5));
  const auto ghz = exact_mps(infolat::ghz_state(5));
  for (int b = 1; b < 5; ++b) {
    EXPECT_NEAR(infolat::single_cut_entropy(product, b), 0.0, 1e-14);
    EXPECT_NEAR(infolat::single_cut_entropy(ghz, b), 1.0, 1e-14);
  }
  const auto s = oracle::haar_state(10, 8);
  const auto mps = exact_mps(s);
  for (int b = 1; b < 10; ++b) EXPECT_NEAR(infolat::single_cut_entropy(mps, b), dense_entropy(s, b - 1, 0), 1e-9);
}

TEST(DoubleCut, GhzWindow) {
  const auto mps = exact_mps(infolat::ghz_state(6));
  EXPECT_NEAR(infolat::double_cut_entropy(mps, 1, 2, EntropyStrategy::TransferMatrix), 1.0, 1e-12);
  EXPECT_NEAR(infolat::double_cut_entropy(mps, 1, 2, EntropyStrategy::ReducedDensityMatrix), 1.0, 1e-12);
  EXPECT_NEAR(infolat::double_cut_entropy(mps, 1, 2, EntropyStrategy::ComplementTransferMatrix), 1.0, 1e-12);
}

TEST(DoubleCut, AllRoutesMatchDense) {
  const auto s = oracle::haar_state(10, 21);
  const auto mps = exact_mps(s);
  std::mt19937 engine(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int ell = std::uniform_int_distribution<int>(0, 8)(engine);
    const int m = std::uniform_int_distribution<int>(0, 9 - ell)(engine);
    const double ref = dense_entropy(s, ell, m);
    EXPECT_NEAR(infolat::double_cut_entropy(mps, ell, m, EntropyStrategy::TransferMatrix), ref, 1e-9);
    if (ell <= 6) {
      EXPECT_NEAR(infolat::double_cut_entropy(mps, ell, m, EntropyStrategy::ReducedDensityMatrix), ref, 1e-9);
    }
    EXPECT_NEAR(infolat::double_cut_entropy(mps, ell, m, EntropyStrategy::ComplementTransferMatrix), ref, 1e-9);
  }
}

TEST(DoubleCut, SingleCutNeedsEdgeWindow) {
  const auto mps = exact_mps(oracle::haar_state(6, 1));
  EXPECT_THROW(infolat::double_cut_entropy(mps, 1, 2, EntropyStrategy::SingleCut), std::invalid_argument);
  EXPECT_NEAR(infolat::double_cut_entropy(mps, 1, 0, EntropyStrategy::SingleCut), infolat::single_cut_entropy(mps, 2),
              1e-14);
}

TEST(DoubleCut, NonCanonicalInputIsCanonicalizedFirst) {
  const auto s = oracle::haar_state(8, 2);
  const auto mps = exact_mps(s);
  std::vector<infolat::MatrixProductState::SiteTensor> sites;
  for (int k = 0; k < 8; ++k) {
    auto t = mps.site(k);
    for (auto& a : t) a *= 1.7;
    sites.push_back(t);
  }
  const infolat::MatrixProductState raw(sites, 2);
  EXPECT_FALSE(raw.canonical());
  EXPECT_NEAR(infolat::double_cut_entropy(raw, 2, 3, EntropyStrategy::TransferMatrix), dense_entropy(s, 2, 3), 1e-9);
  EXPECT_NEAR(infolat::single_cut_entropy(raw, 4), dense_entropy(s, 3, 0), 1e-9);
}

TEST(Complement, Examples) {
  const auto s = oracle::haar_state(10, 5);
  const auto mps = exact_mps(s);
  EXPECT_NEAR(infolat::complement_entropy(mps, 9, 0), 0.0, 1e-10);
  EXPECT_NEAR(infolat::complement_entropy(mps, 8, 0), dense_entropy(s, 0, 9), 1e-10);
  for (int ell = 5; ell < 10; ++ell) {
    for (int m = 0; m + ell < 10; ++m) {
      EXPECT_NEAR(infolat::complement_entropy(mps, ell, m),
                  infolat::double_cut_entropy(mps, ell, m, EntropyStrategy::TransferMatrix), 1e-9);
    }
  }
}

TEST(Complement, RefusesMixedStates) {
  auto mps = exact_mps(oracle::haar_state(6, 5));
  mps.set_pure(false);
  EXPECT_ANY_THROW(infolat::complement_entropy(mps, 3, 1));
}

TEST(Environment, LeftAndRightAccumulationAgree) {
  const auto mps = exact_mps(oracle::haar_state(9, 6));
  const auto right = infolat::build_environment(mps, 2, 6, infolat::Direction::Right);
  const auto left = infolat::build_environment(mps, 2, 6, infolat::Direction::Left);
  ASSERT_EQ(right.data.size(), left.data.size());
  for (std::size_t k = 0; k < right.data.size(); ++k) EXPECT_LT(std::abs(right.data[k] - left.data[k]), 1e-12);
}

TEST(Strategy, CostModelExamples) {
  const auto shape = [](int L, int chi, int ell, int m) {
    infolat::WindowShape w;
    w.num_sites = L;
    w.ell = ell;
    w.m = m;
    w.bond_dims.assign(static_cast<std::size_t>(L + 1), chi);
    w.bond_dims.front() = 1;
    w.bond_dims.back() = 1;
    return w;
  };
  EXPECT_EQ(infolat::choose_strategy(shape(40, 4, 10, 10)).strategy, EntropyStrategy::TransferMatrix);
  EXPECT_EQ(infolat::choose_strategy(shape(40, 256, 2, 10)).strategy, EntropyStrategy::ReducedDensityMatrix);
  EXPECT_EQ(infolat::choose_strategy(shape(12, 1, 3, 4)).strategy, EntropyStrategy::TransferMatrix);
}

TEST(Strategy, TieOrder) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(infolat::pick_strategy({1, 1, 1, 1}), EntropyStrategy::TransferMatrix);
  EXPECT_EQ(infolat::pick_strategy({1, 2, 1, 1}), EntropyStrategy::SingleCut);
  EXPECT_EQ(infolat::pick_strategy({inf, 2, 1, 1}), EntropyStrategy::ComplementTransferMatrix);
  EXPECT_EQ(infolat::pick_strategy({inf, 2, 1, inf}), EntropyStrategy::ReducedDensityMatrix);
}

TEST(Strategy, ComplementOnlyForLargePureWindows) {
  const auto mps = exact_mps(oracle::haar_state(10, 9));
  const auto small = infolat::choose_strategy(mps, 2, 3);
  EXPECT_TRUE(std::isinf(small.costs[static_cast<std::size_t>(EntropyStrategy::ComplementTransferMatrix)]));
  const auto large = infolat::choose_strategy(mps, 6, 2);
  EXPECT_TRUE(std::isfinite(large.costs[static_cast<std::size_t>(EntropyStrategy::ComplementTransferMatrix)]));
  EXPECT_TRUE(std::isinf(small.costs[static_cast<std::size_t>(EntropyStrategy::SingleCut)]));
}

TEST(Provider, MatchesDenseLattice) {
  const auto s = oracle::haar_state(12, 13);
  infolat::MpsEntropyProvider provider(exact_mps(s));
  infolat::DenseEntropyProvider dense(s);
  const auto a = infolat::local_information(provider);
  const auto b = infolat::local_information(dense);
  for (int ell = 0; ell < 12; ++ell) {
    for (int m = 0; m + ell < 12; ++m) EXPECT_NEAR(a(ell, m), b(ell, m), 1e-8);
  }
}

TEST(Provider, CacheIsTransparentAndSavesContractions) {
  const auto mps = exact_mps(oracle::haar_state(12, 14));
  infolat::MpsEntropyProvider off(mps, 0);
  infolat::MpsEntropyProvider on(mps, 8);
  infolat::MpsEntropyProvider big(mps, 64);
  const auto a = infolat::entropy_table(off);
  const auto b = infolat::entropy_table(on);
  const auto c = infolat::entropy_table(big);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_NEAR(a.values()[k], b.values()[k], 1e-12);
    EXPECT_NEAR(a.values()[k], c.values()[k], 1e-12);
  }
  EXPECT_LT(on.contraction_count(), off.contraction_count());
  EXPECT_EQ(off.cache_size(), 0U);
  EXPECT_LE(on.cache_size(), 8U);
}

TEST(Provider, TruncatedStateFlagsViolations) {
  infolat::MpsEntropyProvider provider(planted_ghz());
  EXPECT_THROW(infolat::local_information(provider), infolat::SsaViolation);
}

TEST(MpsIo, RoundTrip) {
  for (const bool truncate : {false, true}) {
    const auto mps = infolat::mps_from_dense(oracle::haar_state(8, 3), truncate ? 3 : 64, 0.0);
    std::stringstream a;
    infolat::write_mps(a, mps);
    const auto back = infolat::read_mps(a);
    EXPECT_EQ(back.bond_dims(), mps.bond_dims());
    EXPECT_EQ(back.truncated(), mps.truncated());
    EXPECT_TRUE(back.canonical());
    std::stringstream b;
    infolat::write_mps(b, back);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(MpsIo, PlantedSchmidtValuesSurvive) {
  std::stringstream a;
  infolat::write_mps(a, planted_ghz());
  const auto back = infolat::read_mps(a);
  EXPECT_DOUBLE_EQ(back.schmidt_values(2)(1), 0.0);
}

}  // namespace
