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

#include "infolat/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "infolat/dense.hpp"
#include "infolat/format.hpp"
#include "infolat/gaussian.hpp"
#include "infolat/rng.hpp"

namespace infolat {

const char* backend_name(Backend backend) {
  switch (backend) {
    case Backend::Auto: return "auto";
    case Backend::Dense: return "dense";
    case Backend::Gaussian: return "gaussian";
  }
  return "unknown";
}

Backend parse_backend(const std::string& name) {
  if (name == "auto") return Backend::Auto;
  if (name == "dense") return Backend::Dense;
  if (name == "gaussian") return Backend::Gaussian;
  throw std::invalid_argument("unknown backend '" + name + "'");
}

const char* state_name(StateSelector state) {
  return state == StateSelector::Ground ? "ground" : "midspectrum-even";
}

StateSelector parse_state(const std::string& name) {
  if (name == "ground") return StateSelector::Ground;
  if (name == "midspectrum-even" || name == "midspectrum") return StateSelector::MidspectrumEven;
  throw std::invalid_argument("unknown state selector '" + name + "'");
}

Backend resolve_backend(Backend requested, double g, StateSelector state) {
  if (requested == Backend::Auto) {
    return g == 0.0 && state == StateSelector::Ground ? Backend::Gaussian : Backend::Dense;
  }
  if (requested == Backend::Gaussian) {
    if (g != 0.0) throw std::invalid_argument("the Gaussian backend needs g = 0");
    if (state != StateSelector::Ground) throw std::invalid_argument("midspectrum states need the dense backend");
  }
  return requested;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig c;
  if (j.at("L").is_array()) {
    c.sizes = j.at("L").get<std::vector<int>>();
  } else {
    c.sizes = {j.at("L").get<int>()};
  }
  c.g = j.value("g", 0.0);
  if (j.at("delta").is_array()) {
    c.deltas = j.at("delta").get<std::vector<double>>();
  } else {
    c.deltas = {j.at("delta").get<double>()};
  }
  c.realizations = j.value("realizations", 1);
  c.base_seed = j.value("base_seed", std::uint64_t{0});
  c.backend = parse_backend(j.value("backend", std::string("auto")));
  c.state = parse_state(j.value("state", std::string("ground")));
  c.jobs = j.value("jobs", 1);
  c.store_profile = j.value("store_profile", false);

  if (c.sizes.empty() || c.deltas.empty()) throw std::invalid_argument("config needs L and delta values");
  for (const int L : c.sizes) {
    if (L < 2) throw std::invalid_argument("chain sizes must be >= 2");
  }
  for (const double d : c.deltas) {
    if (!std::isfinite(d)) throw std::invalid_argument("delta grid must be finite");
  }
  if (c.realizations < 1) throw std::invalid_argument("realizations must be >= 1");
  if (c.jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (!std::isfinite(c.g)) throw std::invalid_argument("g must be finite");
  const Backend b = resolve_backend(c.backend, c.g, c.state);
  if (b == Backend::Dense) {
    for (const int L : c.sizes) {
      if (L > kMaxDenseSites) throw std::invalid_argument("dense backend supports L <= 14");
    }
  }
  return c;
}

nlohmann::json sweep_config_to_json(const SweepConfig& c) {
  return {{"L", c.sizes},
          {"g", c.g},
          {"delta", c.deltas},
          {"realizations", c.realizations},
          {"base_seed", c.base_seed},
          {"backend", backend_name(c.backend)},
          {"state", state_name(c.state)},
          {"jobs", c.jobs},
          {"store_profile", c.store_profile}};
}

std::string sweep_config_hash(const SweepConfig& config) {
  auto j = sweep_config_to_json(config);
  j.erase("jobs");
  return config_hash(j.dump());
}

namespace {

nlohmann::json profile_to_json(const ScaleProfile& p) { return p.totals; }

}  // namespace

nlohmann::json record_to_json(const RealizationRecord& r) {
  nlohmann::json j;
  j["L"] = r.key.num_sites;
  j["delta_index"] = r.key.delta_index;
  j["delta"] = r.delta;
  j["g"] = r.g;
  j["realization"] = r.key.realization;
  j["seed"] = r.seed;
  j["backend"] = backend_name(r.backend);
  j["state"] = state_name(r.state);
  j["status"] = r.ok ? "ok" : "failed";
  if (!r.ok) j["error"] = r.error;
  j["flags"] = {{"near_zero_modes", r.flags.near_zero_modes},
                {"pairing_ambiguous", r.flags.pairing_ambiguous},
                {"tie_break", r.flags.tie_break}};
  j["summary"] = r.ok ? summary_to_json(r.summary) : nlohmann::json(nullptr);
  if (r.profile) j["profile"] = profile_to_json(*r.profile);
  j["config_hash"] = r.config_hash;
  return j;
}

RealizationRecord record_from_json(const nlohmann::json& j) {
  RealizationRecord r;
  r.key.num_sites = j.at("L").get<int>();
  r.key.delta_index = j.at("delta_index").get<int>();
  r.key.realization = j.at("realization").get<int>();
  r.delta = j.at("delta").get<double>();
  r.g = j.at("g").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.backend = parse_backend(j.at("backend").get<std::string>());
  r.state = parse_state(j.at("state").get<std::string>());
  r.ok = j.at("status").get<std::string>() == "ok";
  r.error = j.value("error", std::string());
  const auto& f = j.at("flags");
  r.flags.near_zero_modes = f.value("near_zero_modes", 0);
  r.flags.pairing_ambiguous = f.value("pairing_ambiguous", false);
  r.flags.tie_break = f.value("tie_break", false);
  if (r.ok) r.summary = summary_from_json(j.at("summary"));
  if (j.contains("profile")) {
    ScaleProfile p;
    p.num_sites = r.key.num_sites;
    p.local_dim = 2;
    p.totals = j.at("profile").get<std::vector<double>>();
    r.profile = std::move(p);
  }
  r.config_hash = j.value("config_hash", std::string());
  return r;
}

std::string record_line(const RealizationRecord& record) { return record_to_json(record).dump(); }

RealizationResult compute_realization(const KitaevRealization& realization, Backend backend,
                                      StateSelector state, const LatticeOptions& options) {
  const Backend b = resolve_backend(backend, realization.g, state);
  RealizationResult out;
  if (b == Backend::Gaussian) {
    auto gs = ground_covariance(realization.coupling());
    out.flags.near_zero_modes = gs.diagnostics.near_zero_modes;
    out.flags.pairing_ambiguous = gs.diagnostics.pairing_ambiguous;
    out.energy = gs.diagnostics.ground_energy;
    GaussianEntropyProvider provider(gs.covariance);
    out.lattice = local_information(provider, options);
    out.covariance = std::move(gs.covariance);
  } else {
    SectorEigenpair pair = state == StateSelector::Ground
                               ? global_ground_state(realization)
                               : parity_sector_eigensystem(realization, Parity::Even, Target::ClosestToZero);
    out.flags.tie_break = pair.tie_break;
    out.energy = pair.energy;
    DenseEntropyProvider provider(pair.state);
    out.lattice = local_information(provider, options);
    out.state = std::move(pair.state);
  }
  out.profile = info_per_scale(out.lattice);
  out.summary = summarize(out.profile);
  return out;
}

std::vector<SweepTask> sweep_tasks(const SweepConfig& config) {
  std::vector<SweepTask> tasks;
  for (std::size_t li = 0; li < config.sizes.size(); ++li) {
    for (std::size_t di = 0; di < config.deltas.size(); ++di) {
      for (int r = 0; r < config.realizations; ++r) {
        tasks.push_back({{config.sizes[li], static_cast<int>(di), r},
                         config.deltas[di],
                         derive_seed(config.base_seed, li, di, static_cast<std::uint64_t>(r))});
      }
    }
  }
  return tasks;
}

SweepStats run_sweep(const SweepConfig& config, const std::set<RecordKey>& skip,
                     const std::function<void(const RealizationRecord&)>& sink) {
  const auto all = sweep_tasks(config);
  std::vector<SweepTask> tasks;
  SweepStats stats;
  for (const auto& t : all) {
    if (skip.contains(t.key)) {
      ++stats.skipped;
    } else {
      tasks.push_back(t);
    }
  }
  const std::string hash = sweep_config_hash(config);
  const Backend backend = resolve_backend(config.backend, config.g, config.state);

  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  std::exception_ptr sink_failure;

  auto work = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const SweepTask& task = tasks[k];
      RealizationRecord rec;
      rec.key = task.key;
      rec.delta = task.delta;
      rec.g = config.g;
      rec.seed = task.seed;
      rec.backend = backend;
      rec.state = config.state;
      rec.config_hash = hash;
      try {
        const auto realization = sample_disorder(task.key.num_sites, task.delta, task.seed, config.g);
        auto result = compute_realization(realization, backend, config.state);
        rec.ok = true;
        rec.flags = result.flags;
        rec.summary = result.summary;
        if (config.store_profile) rec.profile = std::move(result.profile);
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      std::lock_guard lock(sink_mutex);
      if (sink_failure) return;
      try {
        sink(rec);
        ++stats.written;
        if (!rec.ok) ++stats.failed;
      } catch (...) {
        sink_failure = std::current_exception();
        next = tasks.size();
        return;
      }
    }
  };

  const int workers = std::max(1, std::min<int>(config.jobs, static_cast<int>(tasks.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (sink_failure) std::rethrow_exception(sink_failure);
  return stats;
}

std::vector<RealizationRecord> read_records(std::istream& in) {
  std::vector<RealizationRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    const bool complete = !in.eof();
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception&) {
      // Only the last line may be cut short by an interrupted run.
      if (complete && in.peek() != std::char_traits<char>::eof()) throw;
    }
  }
  return records;
}

void sort_records(std::vector<RealizationRecord>& records) {
  std::sort(records.begin(), records.end(),
            [](const RealizationRecord& a, const RealizationRecord& b) { return a.key < b.key; });
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

Interval narrowest_interval(std::vector<double> values, double coverage) {
  if (values.empty()) throw std::invalid_argument("interval of no values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const auto w = static_cast<std::size_t>(std::ceil(coverage * static_cast<double>(n) - 1e-9));
  const std::size_t width = std::clamp<std::size_t>(w, 1, n);
  Interval best{values[0], values[width - 1]};
  for (std::size_t start = 1; start + width <= n; ++start) {
    const Interval candidate{values[start], values[start + width - 1]};
    if (candidate.width() < best.width()) best = candidate;
  }
  return best;
}

std::vector<AggregatePoint> aggregate(const std::vector<RealizationRecord>& records) {
  struct Group {
    AggregatePoint point;
    std::map<std::string, std::vector<double>> values;
  };
  std::map<std::pair<int, int>, Group> groups;
  static const std::vector<std::string> kMetrics{"xi", "lambda", "tau", "gamma"};
  for (const auto& r : records) {
    auto& g = groups[{r.key.num_sites, r.key.delta_index}];
    g.point.num_sites = r.key.num_sites;
    g.point.delta = r.delta;
    g.point.g = r.g;
    ++g.point.records;
    if (!r.ok) {
      ++g.point.failed;
      continue;
    }
    if (r.flags.excluded()) {
      ++g.point.flagged;
      continue;
    }
    const auto& s = r.summary;
    if (s.xi) g.values["xi"].push_back(*s.xi);
    if (s.lambda) g.values["lambda"].push_back(*s.lambda);
    if (s.tau) g.values["tau"].push_back(*s.tau);
    g.values["gamma"].push_back(s.gamma);
  }
  std::vector<AggregatePoint> out;
  for (auto& [key, g] : groups) {
    for (const auto& name : kMetrics) {
      const auto it = g.values.find(name);
      if (it == g.values.end() || it->second.empty()) {
        g.point.metrics[name] = std::nullopt;
        continue;
      }
      MetricStats m;
      m.count = it->second.size();
      m.median = median(it->second);
      m.interval = narrowest_interval(it->second);
      g.point.metrics[name] = m;
    }
    out.push_back(std::move(g.point));
  }
  return out;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregatePoint>& points,
                         const std::vector<std::string>& provenance) {
  for (const auto& line : provenance) out << "# " << line << '\n';
  out << "L,delta,g,stat,metric,value\n";
  for (const auto& p : points) {
    const std::string prefix = std::to_string(p.num_sites) + ',' + format_number(p.delta) + ',' + format_number(p.g) + ',';
    out << prefix << "records,all," << p.records << '\n';
    out << prefix << "flagged,all," << p.flagged << '\n';
    out << prefix << "failed,all," << p.failed << '\n';
    for (const auto& [name, stats] : p.metrics) {
      if (!stats) {
        out << prefix << "median," << name << ",nan\n";
        continue;
      }
      out << prefix << "count," << name << ',' << stats->count << '\n';
      out << prefix << "median," << name << ',' << format_number(stats->median) << '\n';
      out << prefix << "low," << name << ',' << format_number(stats->interval.low) << '\n';
      out << prefix << "high," << name << ',' << format_number(stats->interval.high) << '\n';
      out << prefix << "width," << name << ',' << format_number(stats->interval.width()) << '\n';
    }
  }
}

}  // namespace infolat
