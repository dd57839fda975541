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

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "infolat/dense.hpp"
#include "infolat/ensemble.hpp"
#include "infolat/errors.hpp"
#include "infolat/format.hpp"
#include "infolat/gaussian.hpp"
#include "infolat/kitaev.hpp"
#include "infolat/lattice.hpp"
#include "infolat/length_scales.hpp"
#include "infolat/mps.hpp"

namespace infolat::cli {

namespace {

// Bad user input: exit 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

std::vector<std::string> provenance_lines(const std::vector<std::string>& args, const std::string& seed) {
  return {"infolat " + version_string(), "command: infolat " + join(args),
          "config_hash: " + config_hash(join(args)), "seed: " + seed};
}

nlohmann::json provenance_json(const std::vector<std::string>& args, const std::string& seed) {
  return {{"version", version_string()},
          {"command", "infolat " + join(args)},
          {"config_hash", config_hash(join(args))},
          {"seed", seed}};
}

std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

// Empty path or "-" means stdout.
void write_file(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << content;
  if (!f) throw InputError("failed writing '" + path + "'");
}

DenseState read_dense_file(const std::string& path) {
  auto in = open_input(path, std::ios::binary);
  char first = 0;
  while (in.get(first) && std::isspace(static_cast<unsigned char>(first))) {
  }
  in.clear();
  in.seekg(0);
  try {
    return first == '{' ? read_state_json(in) : read_state_binary(in);
  } catch (const NumericalError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(std::string("dense state '") + path + "': " + e.what());
  }
}

MatrixProductState read_mps_file(const std::string& path) {
  auto in = open_input(path, std::ios::binary);
  try {
    return read_mps(in);
  } catch (const std::exception& e) {
    throw InputError(std::string("MPS file '") + path + "': " + e.what());
  }
}

int default_jobs() {
  if (const char* env = std::getenv(kJobsEnv)) {
    try {
      const long long n = parse_int(env);
      if (n >= 1) return static_cast<int>(n);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

// ---- lattice ----

struct LatticeArgs {
  std::string input;
  std::string format = "dense";
  std::string out;
  bool check_sum_rule = false;
  int threads = 1;
  int cache = kDefaultCacheCapacity;
};

int cmd_lattice(const LatticeArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  auto prov = provenance_lines(args, "none");
  prov.push_back("input: " + a.input + " (" + a.format + ")");
  InformationLattice lattice;
  int L = 0;
  int d = 2;
  if (a.format == "dense") {
    DenseEntropyProvider provider(read_dense_file(a.input));
    L = provider.num_sites();
    d = provider.local_dim();
    lattice = local_information(provider, LatticeOptions{a.threads});
  } else {
    auto mps = read_mps_file(a.input);
    if (mps.truncated()) {
      prov.push_back("truncated MPS, discarded weight " + format_number(mps.discarded_weight()));
    }
    MpsEntropyProvider provider(std::move(mps), a.cache);
    L = provider.num_sites();
    d = provider.local_dim();
    lattice = local_information(provider);
  }
  if (a.check_sum_rule) {
    const double residual = std::abs(lattice.total() - L * std::log2(static_cast<double>(d)));
    prov.push_back("sum_rule_residual: " + format_number(residual));
    out << "sum rule residual " << format_number(residual) << " bits\n";
    if (residual > 1e-8 * L) throw NumericalError("sum rule violated: residual " + format_number(residual));
  }
  std::ostringstream csv;
  write_lattice_csv(csv, lattice, prov);
  write_file(a.out, csv.str(), out);
  return kOk;
}

// ---- kitaev ----

struct KitaevArgs {
  std::string which;
  int L = 0;
  double delta = 0.0;
  double g = 0.0;
  std::uint64_t seed = 0;
  std::string backend = "auto";
  std::string out_state;
  std::string out_lattice;
  std::string out_summary;
  std::string out_realization;
  std::string out_covariance;
  int threads = 1;
};

int cmd_kitaev(const KitaevArgs& a, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const StateSelector state = a.which == "ground" ? StateSelector::Ground : StateSelector::MidspectrumEven;
  Backend backend;
  try {
    backend = resolve_backend(parse_backend(a.backend), a.g, state);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  if (a.L < 2) throw InputError("--L must be at least 2");
  if (backend == Backend::Dense && a.L > kMaxDenseSites) {
    throw InputError("the dense backend supports L <= " + std::to_string(kMaxDenseSites));
  }
  const auto realization = sample_disorder(a.L, a.delta, a.seed, a.g);
  auto result = compute_realization(realization, backend, state, LatticeOptions{a.threads});

  const std::string seed = std::to_string(a.seed);
  if (!a.out_state.empty()) {
    if (!result.state) {
      err << "note: the Gaussian backend has no state vector; use --out-covariance\n";
    } else {
      std::ofstream f(a.out_state, std::ios::binary);
      if (!f) throw InputError("cannot write '" + a.out_state + "'");
      write_state_binary(f, *result.state);
    }
  }
  if (!a.out_covariance.empty() && result.covariance) {
    std::ostringstream csv;
    write_covariance_csv(csv, *result.covariance);
    write_file(a.out_covariance, csv.str(), out);
  }
  if (!a.out_lattice.empty()) {
    std::ostringstream csv;
    write_lattice_csv(csv, result.lattice, provenance_lines(args, seed));
    write_file(a.out_lattice, csv.str(), out);
  }
  if (!a.out_realization.empty()) {
    write_file(a.out_realization, realization_to_json(realization).dump(2) + "\n", out);
  }
  nlohmann::json summary = {{"provenance", provenance_json(args, seed)},
                            {"L", a.L},
                            {"delta", a.delta},
                            {"g", a.g},
                            {"seed", a.seed},
                            {"backend", backend_name(backend)},
                            {"state", state_name(state)},
                            {"energy", result.energy},
                            {"flags",
                             {{"near_zero_modes", result.flags.near_zero_modes},
                              {"pairing_ambiguous", result.flags.pairing_ambiguous},
                              {"tie_break", result.flags.tie_break}}},
                            {"summary", summary_to_json(result.summary)}};
  if (!a.out_summary.empty() || (a.out_lattice.empty() && a.out_state.empty())) {
    write_file(a.out_summary, summary.dump(2) + "\n", out);
  }
  return kOk;
}

// ---- ensemble ----

struct EnsembleArgs {
  std::string config;
  std::string out;
  std::string aggregate;
  int jobs = 0;
  bool resume = false;
};

int cmd_ensemble(const EnsembleArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  SweepConfig config;
  {
    auto in = open_input(a.config);
    try {
      config = sweep_config_from_json(nlohmann::json::parse(in));
    } catch (const std::exception& e) {
      throw InputError("config '" + a.config + "': " + e.what());
    }
  }
  if (a.jobs > 0) {
    config.jobs = a.jobs;
  } else if (const int env = default_jobs(); env > 0) {
    config.jobs = env;
  }
  const std::string hash = sweep_config_hash(config);

  std::vector<RealizationRecord> existing;
  if (a.resume && std::filesystem::exists(a.out)) {
    auto in = open_input(a.out);
    try {
      existing = read_records(in);
    } catch (const std::exception& e) {
      throw InputError("cannot resume from '" + a.out + "': " + e.what());
    }
    for (const auto& r : existing) {
      if (r.config_hash != hash) throw InputError("'" + a.out + "' was written for a different config");
    }
  }
  std::set<RecordKey> done;
  {
    std::ofstream f(a.out, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write '" + a.out + "'");
    for (const auto& r : existing) {
      if (done.insert(r.key).second) f << record_line(r) << '\n';
    }
  }
  std::ofstream f(a.out, std::ios::binary | std::ios::app);
  const SweepStats stats = run_sweep(config, done, [&](const RealizationRecord& r) {
    f << record_line(r) << '\n';
    f.flush();
  });
  f.close();

  auto in = open_input(a.out);
  auto records = read_records(in);
  sort_records(records);
  std::size_t failed = 0;
  for (const auto& r : records) failed += r.ok ? 0 : 1;

  auto prov = provenance_lines(args, std::to_string(config.base_seed));
  prov.push_back("sweep_config_hash: " + hash);
  std::ostringstream csv;
  write_aggregate_csv(csv, aggregate(records), prov);
  write_file(a.aggregate.empty() ? a.out + ".aggregate.csv" : a.aggregate, csv.str(), out);

  out << "records: " << records.size() << " (new " << stats.written << ", resumed " << stats.skipped
      << ", failed " << failed << ")\n";
  return failed > 0 ? kPartialEnsemble : kOk;
}

// ---- plotdata ----

struct PlotArgs {
  std::string lattice;
  std::vector<std::string> profiles;
  std::string kind;
  std::string out;
  int ell_min = 2;
  int ell_max = -1;
};

int cmd_plotdata(const PlotArgs& a, const std::vector<std::string>& args, std::ostream& out) {
  const auto prov = provenance_lines(args, "none");
  std::optional<LatticeFile> lattice;
  if (!a.lattice.empty()) {
    auto in = open_input(a.lattice);
    try {
      lattice = read_lattice_csv(in);
    } catch (const std::exception& e) {
      throw InputError("lattice '" + a.lattice + "': " + e.what());
    }
  }
  std::ostringstream csv;
  for (const auto& line : prov) csv << "# " << line << '\n';

  if (a.kind == "per-scale") {
    if (lattice) {
      const auto p = info_per_scale(lattice->lattice);
      csv << "ell,I_ell\n";
      for (std::size_t ell = 0; ell < p.totals.size(); ++ell) csv << ell << ',' << format_number(p.totals[ell]) << '\n';
    } else {
      if (a.profiles.empty()) throw InputError("per-scale needs --lattice or --profiles");
      const bool tagged = a.profiles.size() > 1;
      csv << (tagged ? "source,ell,I_ell\n" : "ell,I_ell\n");
      for (const auto& path : a.profiles) {
        auto in = open_input(path);
        ScaleProfile p;
        try {
          p = read_profile_csv(in);
        } catch (const std::exception& e) {
          throw InputError("profile '" + path + "': " + e.what());
        }
        for (std::size_t ell = 0; ell < p.totals.size(); ++ell) {
          if (tagged) csv << path << ',';
          csv << ell << ',' << format_number(p.totals[ell]) << '\n';
        }
      }
    }
  } else if (a.kind == "lattice-heatmap") {
    if (!lattice) throw InputError("lattice-heatmap needs --lattice");
    const auto& lat = lattice->lattice;
    csv << "ell,two_n,i\n";
    for (int ell = 0; ell < lat.num_sites(); ++ell) {
      for (int m = 0; m + ell < lat.num_sites(); ++m) {
        csv << ell << ',' << 2 * m + ell << ',' << format_number(lat(ell, m)) << '\n';
      }
    }
  } else if (a.kind == "alpha-fit") {
    if (!lattice) throw InputError("alpha-fit needs --lattice");
    const auto& lat = lattice->lattice;
    const int w = central_window_size(lat.num_sites());
    const int ell_max = a.ell_max < 0 ? w - 1 : a.ell_max;
    AlphaFit fit;
    try {
      fit = critical_alpha_fit(lat, a.ell_min, ell_max);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    csv << "# alpha: " << format_number(fit.alpha) << " +/- " << format_number(fit.standard_error)
        << " over ell in [" << a.ell_min << ", " << ell_max << "], window " << central_window_start(lat.num_sites())
        << ".." << central_window_start(lat.num_sites()) + w - 1 << '\n';
    csv << "ell,i_avg,ell_sq_times_i,alpha_times_invsq\n";
    for (int ell = 1; ell < w; ++ell) {
      const double avg = fit.averages[static_cast<std::size_t>(ell)];
      csv << ell << ',' << format_number(avg) << ',' << format_number(avg * ell * ell) << ','
          << format_number(fit.alpha / (static_cast<double>(ell) * ell)) << '\n';
    }
  } else {
    throw InputError("unknown plot kind '" + a.kind + "'");
  }
  write_file(a.out, csv.str(), out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information lattice toolkit", "infolat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());

  LatticeArgs lattice_args;
  auto* lattice = app.add_subcommand("lattice", "Information lattice of a stored state");
  lattice->add_option("--input", lattice_args.input, "State file")->required();
  lattice->add_option("--input-format", lattice_args.format, "dense or mps")
      ->check(CLI::IsMember({"dense", "mps"}));
  lattice->add_option("--out", lattice_args.out, "Lattice CSV (stdout if omitted)");
  lattice->add_flag("--check-sum-rule", lattice_args.check_sum_rule, "Verify sum of i equals L log2 d");
  lattice->add_option("--threads", lattice_args.threads, "Worker threads (dense input)")->check(CLI::PositiveNumber);
  lattice->add_option("--cache", lattice_args.cache, "MPS FIFO cache capacity")->check(CLI::NonNegativeNumber);

  KitaevArgs kitaev_args;
  auto* kitaev = app.add_subcommand("kitaev", "Disordered interacting Kitaev chain");
  kitaev->add_option("which", kitaev_args.which, "ground or midspectrum")
      ->required()
      ->check(CLI::IsMember({"ground", "midspectrum"}));
  kitaev->add_option("--L", kitaev_args.L, "Sites")->required();
  kitaev->add_option("--delta", kitaev_args.delta, "Disorder parameter")->required();
  kitaev->add_option("--g", kitaev_args.g, "Interaction strength");
  kitaev->add_option("--seed", kitaev_args.seed, "Disorder seed")->required();
  kitaev->add_option("--backend", kitaev_args.backend, "auto, dense or gaussian")
      ->check(CLI::IsMember({"auto", "dense", "gaussian"}));
  kitaev->add_option("--out-state", kitaev_args.out_state, "Binary state file (dense backend)");
  kitaev->add_option("--out-lattice", kitaev_args.out_lattice, "Lattice CSV");
  kitaev->add_option("--out-summary", kitaev_args.out_summary, "Length summary JSON");
  kitaev->add_option("--out-realization", kitaev_args.out_realization, "Realization JSON");
  kitaev->add_option("--out-covariance", kitaev_args.out_covariance, "Covariance CSV (Gaussian backend)");
  kitaev->add_option("--threads", kitaev_args.threads, "Worker threads")->check(CLI::PositiveNumber);

  EnsembleArgs ensemble_args;
  auto* ensemble = app.add_subcommand("ensemble", "Disorder sweep");
  ensemble->add_option("--config", ensemble_args.config, "Sweep config JSON")->required();
  ensemble->add_option("--out", ensemble_args.out, "JSON-lines records")->required();
  ensemble->add_option("--aggregate", ensemble_args.aggregate, "Aggregate CSV (default <out>.aggregate.csv)");
  ensemble->add_option("--jobs", ensemble_args.jobs,
                       std::string("Workers (default $") + kJobsEnv + ", then the config)")
      ->check(CLI::PositiveNumber);
  ensemble->add_flag("--resume", ensemble_args.resume, "Skip keys already in --out");

  PlotArgs plot_args;
  auto* plot = app.add_subcommand("plotdata", "Plot-ready CSV");
  auto* lat_opt = plot->add_option("--lattice", plot_args.lattice, "Lattice CSV");
  auto* prof_opt = plot->add_option("--profiles", plot_args.profiles, "Profile CSVs");
  lat_opt->excludes(prof_opt);
  plot->add_option("--kind", plot_args.kind, "per-scale, lattice-heatmap or alpha-fit")
      ->required()
      ->check(CLI::IsMember({"per-scale", "lattice-heatmap", "alpha-fit"}));
  plot->add_option("--out", plot_args.out, "Output CSV (stdout if omitted)");
  plot->add_option("--ell-min", plot_args.ell_min, "alpha-fit lower scale");
  plot->add_option("--ell-max", plot_args.ell_max, "alpha-fit upper scale");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (lattice->parsed()) return cmd_lattice(lattice_args, args, out);
    if (kitaev->parsed()) return cmd_kitaev(kitaev_args, args, out, err);
    if (ensemble->parsed()) return cmd_ensemble(ensemble_args, args, out);
    if (plot->parsed()) return cmd_plotdata(plot_args, args, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace infolat::cli
