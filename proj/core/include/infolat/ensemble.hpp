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

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "infolat/kitaev.hpp"
#include "infolat/lattice.hpp"
#include "infolat/length_scales.hpp"

namespace infolat {

enum class Backend { Auto, Dense, Gaussian };
enum class StateSelector { Ground, MidspectrumEven };

const char* backend_name(Backend backend);
Backend parse_backend(const std::string& name);
const char* state_name(StateSelector state);
StateSelector parse_state(const std::string& name);

// Auto picks the Gaussian backend for g = 0 ground states and the dense one
// otherwise. Throws std::invalid_argument for impossible combinations.
Backend resolve_backend(Backend requested, double g, StateSelector state);

struct SweepConfig {
  std::vector<int> sizes;
  double g = 0.0;
  std::vector<double> deltas;
  int realizations = 1;
  std::uint64_t base_seed = 0;
  Backend backend = Backend::Auto;
  StateSelector state = StateSelector::Ground;
  int jobs = 1;
  bool store_profile = false;
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json sweep_config_to_json(const SweepConfig& config);
// Hash of everything that determines the records (the worker count does not).
std::string sweep_config_hash(const SweepConfig& config);

struct RecordKey {
  int num_sites = 0;
  int delta_index = 0;
  int realization = 0;
  friend auto operator<=>(const RecordKey&, const RecordKey&) = default;
};

struct RealizationFlags {
  int near_zero_modes = 0;
  bool pairing_ambiguous = false;
  bool tie_break = false;

  bool excluded() const { return pairing_ambiguous || tie_break; }
};

struct RealizationRecord {
  RecordKey key;
  double delta = 0.0;
  double g = 0.0;
  std::uint64_t seed = 0;
  Backend backend = Backend::Dense;
  StateSelector state = StateSelector::Ground;
  bool ok = false;
  std::string error;
  RealizationFlags flags;
  LengthSummary summary;
  std::optional<ScaleProfile> profile;
  std::string config_hash;
};

nlohmann::json record_to_json(const RealizationRecord& record);
RealizationRecord record_from_json(const nlohmann::json& j);
// One JSON line without the trailing newline.
std::string record_line(const RealizationRecord& record);

// Everything computed for one realization.
struct RealizationResult {
  InformationLattice lattice;
  ScaleProfile profile;
  LengthSummary summary;
  RealizationFlags flags;
  std::optional<DenseState> state;
  std::optional<CovarianceMatrix> covariance;
  double energy = 0.0;
};

RealizationResult compute_realization(const KitaevRealization& realization, Backend backend,
                                      StateSelector state, const LatticeOptions& options = {});

struct SweepTask {
  RecordKey key;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

// Tasks in canonical order (L, delta index, realization).
std::vector<SweepTask> sweep_tasks(const SweepConfig& config);

struct SweepStats {
  std::size_t written = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
};

// Runs every task whose key is not in `skip` on config.jobs workers and hands
// each record to `sink` (called under a lock, in completion order).
SweepStats run_sweep(const SweepConfig& config, const std::set<RecordKey>& skip,
                     const std::function<void(const RealizationRecord&)>& sink);

// Reads complete JSON lines; a trailing partial line is ignored.
std::vector<RealizationRecord> read_records(std::istream& in);
void sort_records(std::vector<RealizationRecord>& records);

double median(std::vector<double> values);

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double width() const { return high - low; }
};

// Narrowest window over the sorted values holding ceil(coverage * N) of them;
// the leftmost wins on ties.
Interval narrowest_interval(std::vector<double> values, double coverage = 0.75);

struct MetricStats {
  std::size_t count = 0;
  double median = 0.0;
  Interval interval;
};

struct AggregatePoint {
  int num_sites = 0;
  double delta = 0.0;
  double g = 0.0;
  std::size_t records = 0;
  std::size_t flagged = 0;
  std::size_t failed = 0;
  // Keyed by metric name; std::nullopt when no record has a value.
  std::map<std::string, std::optional<MetricStats>> metrics;
};

// Flagged and failed records are counted but left out of the statistics.
std::vector<AggregatePoint> aggregate(const std::vector<RealizationRecord>& records);

// Columns L,delta,g,stat,metric,value.
void write_aggregate_csv(std::ostream& out, const std::vector<AggregatePoint>& points,
                         const std::vector<std::string>& provenance = {});

}  // namespace infolat
