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

// Acceptance suite. Each criterion prints exactly one PASS/FAIL line.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "infolat/dense.hpp"
#include "infolat/ensemble.hpp"
#include "infolat/errors.hpp"
#include "infolat/gaussian.hpp"
#include "infolat/kitaev.hpp"
#include "infolat/lattice.hpp"
#include "infolat/length_scales.hpp"
#include "infolat/mps.hpp"
#include "oracles.hpp"

namespace {

using namespace infolat;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

InformationLattice dense_lattice(const DenseState& s) {
  DenseEntropyProvider p(s);
  return local_information(p);
}

InformationLattice gaussian_lattice(const CovarianceMatrix& cov) {
  GaussianEntropyProvider p(cov);
  return local_information(p);
}

InformationLattice mps_lattice(const DenseState& s, int capacity = kDefaultCacheCapacity) {
  MpsEntropyProvider p(mps_from_dense(s, 1 << 20, 0.0), capacity);
  return local_information(p);
}

double max_entry_difference(const InformationLattice& a, const InformationLattice& b) {
  double worst = 0.0;
  for (int ell = 0; ell < a.num_sites(); ++ell) {
    for (int m = 0; m + ell < a.num_sites(); ++m) worst = std::max(worst, std::abs(a(ell, m) - b(ell, m)));
  }
  return worst;
}

// Unclamped local information straight from the entropy table.
double raw_minimum(EntropyProvider& provider) {
  const auto table = entropy_table(provider);
  const auto raw = oracle::local_information_from_info(
      [&](int ell, int m) { return table(ell, m); }, provider.num_sites(), provider.local_dim());
  return raw.min_value();
}

// Unflagged realizations of the Gaussian ground state, seeds 1, 2, ...
template <typename Fn>
void unflagged_ground_states(int L, double delta, int wanted, Fn&& fn, int* flagged = nullptr) {
  int got = 0;
  for (std::uint64_t seed = 1; got < wanted; ++seed) {
    const auto r = sample_disorder(L, delta, seed);
    auto gs = ground_covariance(r.coupling());
    if (gs.diagnostics.pairing_ambiguous) {
      if (flagged) ++*flagged;
      continue;
    }
    fn(r, gs);
    ++got;
  }
}

// 1. Sum rule on Haar states.
Outcome sum_rule() {
  double worst = 0.0;
  for (const int L : {8, 10, 12}) {
    for (int k = 0; k < 50; ++k) {
      const auto lat = dense_lattice(haar_random_state(L, 1000 * static_cast<std::uint64_t>(L) + k));
      worst = std::max(worst, std::abs(lat.total() - L) / L);
    }
  }
  return {worst < 1e-8, "max |sum i - L|/L = " + fmt(worst) + " over 150 Haar states (L = 8, 10, 12)"};
}

// 2. Strong subadditivity on every backend, before any clamping.
Outcome ssa_nonnegativity() {
  double worst = 0.0;
  int states = 0;
  for (const int L : {8, 10, 12}) {
    for (int k = 0; k < 10; ++k) {
      const auto s = haar_random_state(L, 77 + static_cast<std::uint64_t>(k));
      DenseEntropyProvider dense(s);
      worst = std::min(worst, raw_minimum(dense));
      MpsEntropyProvider mps(mps_from_dense(s, 1 << 20, 0.0));
      worst = std::min(worst, raw_minimum(mps));
      states += 2;
    }
  }
  for (const auto& s : {product_state(8), ghz_state(8), bell_pair_chain(8)}) {
    DenseEntropyProvider dense(s);
    worst = std::min(worst, raw_minimum(dense));
    ++states;
  }
  for (const double delta : {-1.0, 0.0, 1.0}) {
    unflagged_ground_states(60, delta, 10, [&](const KitaevRealization&, const GaussianGroundState& gs) {
      GaussianEntropyProvider p(gs.covariance);
      worst = std::min(worst, raw_minimum(p));
      ++states;
    });
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto pair = parity_sector_eigensystem(sample_disorder(10, 0.0, seed, 0.5), Parity::Even, Target::ClosestToZero);
    DenseEntropyProvider dense(pair.state);
    worst = std::min(worst, raw_minimum(dense));
    ++states;
  }
  return {worst >= -1e-10, "min raw i = " + fmt(worst) + " over " + std::to_string(states) +
                               " lattices (dense, exact MPS, Gaussian)"};
}

// 3. Decomposition identity.
Outcome decomposition() {
  std::mt19937 engine(2024);
  double worst = 0.0;
  // Ten states, ten random subsystems each.
  for (std::uint64_t state = 0; state < 10; ++state) {
    DenseEntropyProvider p(haar_random_state(10, 500 + state));
    const auto lat = local_information(p);
    for (int k = 0; k < 10; ++k) {
      const int ell = std::uniform_int_distribution<int>(0, 9)(engine);
      const int m = std::uniform_int_distribution<int>(0, 9 - ell)(engine);
      worst = std::max(worst, subsystem_decomposition_check(lat, p, {ell, m}));
    }
  }
  return {worst < 1e-8, "max residual " + fmt(worst) + " bits over 100 random subsystems (L = 10)"};
}

// 4. Dense vs Gaussian vs exact MPS.
Outcome cross_backend() {
  double gauss = 0.0;
  double mps = 0.0;
  int compared = 0;
  for (const int L : {8, 10}) {
    int done = 0;
    for (std::uint64_t seed = 1; done < 20; ++seed) {
      const auto r = sample_disorder(L, 0.5, seed);
      const auto gs = ground_covariance(r.coupling());
      const auto dense = global_ground_state(r);
      if (gs.diagnostics.near_zero_modes > 0 || dense.tie_break) continue;
      gauss = std::max(gauss, max_entry_difference(dense_lattice(dense.state), gaussian_lattice(gs.covariance)));
      ++done;
      ++compared;
    }
  }
  for (const int L : {10, 12}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto dense = global_ground_state(sample_disorder(L, 0.5, seed));
      mps = std::max(mps, max_entry_difference(dense_lattice(dense.state), mps_lattice(dense.state)));
    }
  }
  return {gauss < 1e-7 && mps < 1e-8, "dense vs Gaussian max diff " + fmt(gauss) + " (" + std::to_string(compared) +
                                          " ground states); exact MPS vs dense max diff " + fmt(mps) +
                                          " (40 states, L = 10, 12)"};
}

// 5. Large-scale information in the two phases.
Outcome topological_gamma() {
  std::vector<double> plus;
  std::vector<double> minus;
  int flagged = 0;
  for (const double delta : {1.0, -1.0}) {
    auto& out = delta > 0 ? plus : minus;
    unflagged_ground_states(
        100, delta, 100,
        [&](const KitaevRealization&, const GaussianGroundState& gs) {
          out.push_back(large_scale_information(info_per_scale(gaussian_lattice(gs.covariance))));
        },
        &flagged);
  }
  const double mp = median(plus);
  const double mm = median(minus);
  // An isolated edge pair carries exactly one bit, so the closed ends of the
  // intervals are compared up to summation roundoff.
  constexpr double roundoff = 1e-9;
  const bool pass = mp >= 0.95 && mp <= 1.0 + roundoff && mm >= -roundoff && mm <= 0.05;
  return {pass, "median Gamma = " + fmt(mp, 12) + " (delta = +1), " + fmt(mm) + " (delta = -1), L = 100, 100 each, " +
                    std::to_string(flagged) + " flagged skipped"};
}

// 6. Clean critical chain.
Outcome clean_alpha() {
  const int L = 100;
  const MajoranaCoupling c(std::vector<double>(2 * L - 1, 1.0));
  const auto fit = critical_alpha_fit(gaussian_lattice(ground_covariance(c).covariance), 4, 20);
  const double target = 1.0 / (6.0 * std::numbers::ln2);
  const double rel = std::abs(fit.alpha - target) / target;
  return {rel < 0.15, "alpha = " + fmt(fit.alpha) + " +/- " + fmt(fit.standard_error) + " vs " + fmt(target) +
                          " (rel. dev. " + fmt(rel) + ", limit 0.15)"};
}

// 7. Disorder-averaged critical chain.
Outcome disordered_alpha() {
  const int L = 64;
  // The plateau of i*ell^2 is only a few percent above the 20% band at this
  // size, so the sample matches the original 40k-realization average rather
  // than the 2000 minimum.
  const int realizations = 40000;
  const int w = central_window_size(L);
  const int first = central_window_start(L);
  std::vector<double> sum(static_cast<std::size_t>(w), 0.0);
  int used = 0;
  unflagged_ground_states(L, 0.0, realizations, [&](const KitaevRealization&, const GaussianGroundState& gs) {
    // Only subsystems inside the central window enter the average, so the
    // reduced state of that window carries everything needed.
    GaussianEntropyProvider p(gs.covariance.restrict_to(first, w),
                              GaussianEntropyProvider::Route::RestrictedBlock);
    const auto avg = triangle_average(local_information(p), 0, w);
    for (int ell = 0; ell < w; ++ell) sum[static_cast<std::size_t>(ell)] += avg[static_cast<std::size_t>(ell)];
    ++used;
  });
  for (auto& v : sum) v /= used;
  const auto fit = alpha_fit_from_averages(sum, 4, 12);
  const double target = 1.0 / 6.0;
  const double rel = std::abs(fit.alpha - target) / target;
  return {rel < 0.20, "alpha_dis = " + fmt(fit.alpha) + " +/- " + fmt(fit.standard_error) + " vs " + fmt(target) +
                          " (rel. dev. " + fmt(rel) + ", limit 0.20, " + std::to_string(used) + " realizations)"};
}

// 8. Growth of information per scale in Haar states.
Outcome ergodic_slope() {
  const int L = 12;
  const int samples = 50;
  std::vector<double> mean(L, 0.0);
  for (int k = 0; k < samples; ++k) {
    const auto p = info_per_scale(dense_lattice(haar_random_state(L, 9000 + static_cast<std::uint64_t>(k))));
    for (int ell = 0; ell < L; ++ell) mean[static_cast<std::size_t>(ell)] += p.totals[static_cast<std::size_t>(ell)] / samples;
  }
  ScaleProfile profile{L, 2, mean};
  const auto fit = correlation_decay_fit(profile, 3, 6);

  // Same fit on the exact Haar average built from Page's formula.
  std::vector<double> info(L + 1, 0.0);
  for (int n = 1; n <= L; ++n) {
    const int a = std::min(n, L - n);
    info[static_cast<std::size_t>(n)] = n - (a == 0 ? 0.0 : oracle::page_entropy_bits(1 << a, 1 << (L - a)));
  }
  std::vector<double> page(L, 0.0);
  for (int ell = 0; ell < L; ++ell) {
    const double i = info[static_cast<std::size_t>(ell + 1)] - 2.0 * info[static_cast<std::size_t>(ell)] +
                     (ell >= 1 ? info[static_cast<std::size_t>(ell - 1)] : 0.0);
    page[static_cast<std::size_t>(ell)] = (L - ell) * (ell == 0 ? info[1] : i);
  }
  const auto page_fit = correlation_decay_fit(ScaleProfile{L, 2, page}, 3, 6);

  const double target = std::log(4.0);
  const double slope = fit.slope.value_or(std::nan(""));
  const double rel = std::abs(slope - target) / target;
  return {rel < 0.10, "slope = " + fmt(slope) + " (lambda = " + fmt(-1.0 / slope) + ") vs ln 4 = " + fmt(target) +
                          " (rel. dev. " + fmt(rel) + ", limit 0.10); Page-average slope " +
                          fmt(page_fit.slope.value_or(std::nan("")))};
}

// 9. Midspectrum trends across the phase diagram.
Outcome midspectrum_trend() {
  SweepConfig c;
  c.sizes = {11, 13};
  c.g = 0.5;
  c.deltas = {-6, -3, 0, 3, 6};
  c.realizations = 50;
  c.base_seed = 9;
  c.backend = Backend::Dense;
  c.state = StateSelector::MidspectrumEven;
  std::vector<RealizationRecord> records;
  run_sweep(c, {}, [&](const RealizationRecord& r) { records.push_back(r); });
  const auto points = aggregate(records);
  auto med = [&](int L, double delta, const char* metric) {
    for (const auto& p : points) {
      if (p.num_sites == L && p.delta == delta) {
        const auto& s = p.metrics.at(metric);
        return s ? s->median : std::nan("");
      }
    }
    return std::nan("");
  };
  bool pass = med(13, 0, "xi") > med(11, 0, "xi");
  std::ostringstream d;
  d << "xi(0): L11 " << fmt(med(11, 0, "xi")) << ", L13 " << fmt(med(13, 0, "xi"));
  for (const int L : {11, 13}) {
    const double x0 = med(L, 0, "xi");
    const double xm = med(L, -6, "xi");
    const double xp = med(L, 6, "xi");
    const double gp = med(L, 6, "gamma");
    const double l0 = med(L, 0, "lambda");
    const double lm = med(L, -6, "lambda");
    const double lp = med(L, 6, "lambda");
    pass = pass && x0 >= 2.0 * xm && x0 >= 2.0 * xp && gp >= 0.9 && gp <= 1.1 && l0 < 0 && lm > 0 && lp > 0;
    d << "; L" << L << ": xi(+-6) " << fmt(xm) << "/" << fmt(xp) << ", Gamma(+6) " << fmt(gp) << ", lambda(0) "
      << fmt(l0) << ", lambda(+-6) " << fmt(lm) << "/" << fmt(lp);
  }
  std::size_t failed = 0;
  std::size_t flagged = 0;
  for (const auto& p : points) {
    failed += p.failed;
    flagged += p.flagged;
  }
  d << "; " << flagged << " flagged, " << failed << " failed of " << records.size();
  return {pass && failed == 0, d.str()};
}

// 10. Closed-form lattices.
Outcome closed_forms() {
  auto check = [](const InformationLattice& lat, const std::function<double(int, int)>& expected) {
    double worst = 0.0;
    for (int ell = 0; ell < lat.num_sites(); ++ell) {
      for (int m = 0; m + ell < lat.num_sites(); ++m) worst = std::max(worst, std::abs(lat(ell, m) - expected(ell, m)));
    }
    return worst;
  };
  const auto product = [](int ell, int) { return ell == 0 ? 1.0 : 0.0; };
  const auto bell = [](int ell, int m) { return ell == 1 && m % 2 == 0 ? 2.0 : 0.0; };
  const auto ghz = [](int L) {
    return [L](int ell, int) { return (ell == 1 || ell == L - 1) ? 1.0 : 0.0; };
  };
  double worst = 0.0;
  for (const int L : {4, 6, 8}) {
    worst = std::max(worst, check(dense_lattice(product_state(L)), product));
    worst = std::max(worst, check(mps_lattice(product_state(L)), product));
    worst = std::max(worst, check(dense_lattice(bell_pair_chain(L)), bell));
    worst = std::max(worst, check(mps_lattice(bell_pair_chain(L)), bell));
    worst = std::max(worst, check(dense_lattice(ghz_state(L)), ghz(L)));
    worst = std::max(worst, check(mps_lattice(ghz_state(L)), ghz(L)));
    std::vector<double> trivial(static_cast<std::size_t>(2 * L - 1));
    for (std::size_t k = 0; k < trivial.size(); ++k) trivial[k] = k % 2 == 0 ? 1.0 : 0.0;
    worst = std::max(worst, check(gaussian_lattice(ground_covariance(MajoranaCoupling(trivial)).covariance), product));
  }
  return {worst < 1e-10, "max deviation " + fmt(worst) +
                             " (product, Bell chain, GHZ on dense and MPS; trivial dimer on Gaussian; L = 4, 6, 8)"};
}

// 11. FIFO cache transparency.
Outcome cache_transparency() {
  const auto mps = mps_from_dense(haar_random_state(12, 4242), 1 << 20, 0.0);
  MpsEntropyProvider off(mps, 0);
  MpsEntropyProvider on(mps, 8);
  const auto a = entropy_table(off);
  const auto b = entropy_table(on);
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
  const bool pass = worst <= 1e-12 && on.contraction_count() < off.contraction_count();
  return {pass, "max entropy diff " + fmt(worst) + "; contractions " + std::to_string(off.contraction_count()) +
                    " (capacity 0) vs " + std::to_string(on.contraction_count()) + " (capacity 8), L = 12"};
}

// 12. Decay length under the delta -> -delta duality.
Outcome duality() {
  std::vector<double> deviations;
  int skipped = 0;
  for (std::uint64_t seed = 1; deviations.size() < 20; ++seed) {
    const double delta = deviations.size() % 2 == 0 ? 0.5 : -0.5;
    const auto r = sample_disorder(100, delta, seed);
    const auto d = duality_map(r);
    const auto a = ground_covariance(r.coupling());
    const auto b = ground_covariance(d.coupling());
    if (a.diagnostics.pairing_ambiguous || b.diagnostics.pairing_ambiguous) {
      ++skipped;
      continue;
    }
    const auto la = correlation_decay_length(info_per_scale(gaussian_lattice(a.covariance)));
    const auto lb = correlation_decay_length(info_per_scale(gaussian_lattice(b.covariance)));
    if (!la || !lb || !std::isfinite(*la) || !std::isfinite(*lb)) {
      ++skipped;
      continue;
    }
    deviations.push_back(std::abs(*lb - *la) / std::abs(*la));
  }
  const double med = median(deviations);
  return {med < 0.10, "median |lambda' - lambda|/|lambda| = " + fmt(med) + " over 20 pairs (|delta| = 0.5, L = 100), " +
                          std::to_string(skipped) + " skipped"};
}

struct Criterion {
  const char* name;
  double budget_seconds;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"sum rule", 120, sum_rule},
    {"SSA non-negativity", 120, ssa_nonnegativity},
    {"decomposition identity", 120, decomposition},
    {"cross-backend equivalence", 300, cross_backend},
    {"topological Gamma", 600, topological_gamma},
    {"clean critical alpha", 60, clean_alpha},
    {"disordered critical alpha", 1800, disordered_alpha},
    {"ergodic slope", 600, ergodic_slope},
    {"midspectrum phase trend", 3600, midspectrum_trend},
    {"closed forms", 60, closed_forms},
    {"cache transparency", 60, cache_transparency},
    {"duality", 600, duality},
};

bool run_one(int index) {
  const auto& c = kCriteria[index - 1];
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs <= c.budget_seconds;
  const bool pass = o.pass && in_time;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << index << " (" << c.name << "): " << o.detail << "; "
            << fmt(secs) << " s of " << fmt(c.budget_seconds) << " s" << (in_time ? "" : " (over budget)")
            << std::endl;
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  const int count = static_cast<int>(std::size(kCriteria));
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) {
    const std::string_view arg = argv[k];
    if (arg == "--criterion" && k + 1 < argc) {
      selected.push_back(std::atoi(argv[++k]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (int k = 1; k <= count; ++k) selected.push_back(k);
  }
  bool all = true;
  for (const int k : selected) {
    if (k < 1 || k > count) {
      std::cerr << "no criterion " << k << '\n';
      return 2;
    }
    all = run_one(k) && all;
  }
  return all ? 0 : 1;
}
