// Copyright 2026 The loracell Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "loracell/channel.hpp"
#include "loracell/schemes.hpp"

namespace loracell {

enum class InitialSfPolicy { kLowestFeasible, kAllSf12, kRandom };
enum class TrafficModel { kExponential, kJittered };

/// One simulated experiment. Defaults reproduce the reference cell: 8
/// channels at 125 kHz, CR 4/5, 14 dBm, preamble 8, 20-byte payloads.
struct ScenarioConfig {
  std::size_t num_nodes = 100;
  double radius_m = 50.0;
  double period_s = 30.0;
  std::string scheme = "drcc";
  double duration_s = 7200.0;
  std::uint64_t seed = 1;

  int channels = 8;
  int payload_bytes = 20;
  int preamble_symbols = 8;
  double tx_power_dbm = 14.0;
  Bandwidth bandwidth = Bandwidth::k125;
  CodingRate coding_rate = CodingRate::k4_5;

  std::optional<int> demod_capacity = 8;  // nullopt = unlimited
  double capture_threshold_db = 6.0;
  double noise_figure_db = kDefaultNoiseFigureDb;
  PathLossParams path_loss;

  DrccThresholds thresholds;
  AdrParams adr;

  InitialSfPolicy initial_sf = InitialSfPolicy::kLowestFeasible;
  TrafficModel traffic = TrafficModel::kExponential;
  /// Half-width of the uniform jitter as a fraction of the period.
  double jitter_fraction = 0.1;
  /// Off when nullopt; otherwise e.g. 0.01 for a 1% cap.
  std::optional<double> duty_cycle;
  /// Leading share of the run excluded from DER.
  double warmup_fraction = 0.1;

  /// Place every node at this distance (random bearing) instead of over the disk.
  std::optional<double> node_distance_m;
  /// Explicit placement; when non-empty its size must equal num_nodes.
  std::vector<Position> positions;
};

/// Throws ConfigError describing the first invalid field.
void validate(const ScenarioConfig& config);

/// Applies one `key = value` setting. Throws ConfigError for unknown keys or
/// unparsable values.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` text with `#` comments. Throws ConfigError with the
/// offending line number.
void apply_config_text(ScenarioConfig& config, std::istream& in);
void apply_config_file(ScenarioConfig& config, const std::string& path);

std::string_view to_string(InitialSfPolicy policy);

}  // namespace loracell
