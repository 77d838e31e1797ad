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

#include "loracell/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "loracell/errors.hpp"

namespace loracell {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value);
  }
  return out;
}

long long parse_int(std::string_view key, std::string_view value) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  const long long v = parse_int(key, value);
  if (v < 0) bad_value(key, value);
  return static_cast<std::size_t>(v);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const ScenarioConfig& c) {
  if (c.num_nodes < 1) throw ConfigError("nodes must be >= 1");
  if (!finite_positive(c.radius_m)) throw ConfigError("radius must be > 0");
  if (!finite_positive(c.period_s)) throw ConfigError("period must be > 0");
  if (!finite_positive(c.duration_s)) throw ConfigError("duration must be > 0");
  if (!is_known_scheme(c.scheme)) throw ConfigError("unknown scheme '" + c.scheme + "'");
  if (c.channels < 1 || static_cast<std::size_t>(c.channels) > ChannelPlan().size()) {
    throw ConfigError("channels must be within 1..8");
  }
  if (c.payload_bytes < 1 || c.payload_bytes > 255) throw ConfigError("payload must be 1..255 bytes");
  if (c.preamble_symbols < 6) throw ConfigError("preamble must be >= 6 symbols");
  if (c.tx_power_dbm > kMaxEirpDbm) throw ConfigError("tx power exceeds 16 dBm");
  if (c.demod_capacity && *c.demod_capacity < 1) throw ConfigError("demod_capacity must be >= 1");
  if (!finite_positive(c.capture_threshold_db)) throw ConfigError("capture threshold must be > 0");
  try {
    validate(c.path_loss);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  validate(c.thresholds);
  if (c.adr.history == 0) throw ConfigError("adr_history must be >= 1");
  if (!finite_positive(c.adr.step_db)) throw ConfigError("adr step must be > 0");
  if (!(c.warmup_fraction >= 0.0 && c.warmup_fraction < 1.0)) {
    throw ConfigError("warmup must be within [0, 1)");
  }
  if (!(c.jitter_fraction >= 0.0 && c.jitter_fraction < 1.0)) {
    throw ConfigError("jitter must be within [0, 1)");
  }
  if (c.duty_cycle && !(*c.duty_cycle > 0.0 && *c.duty_cycle <= 1.0)) {
    throw ConfigError("duty_cycle must be within (0, 1]");
  }
  if (c.node_distance_m && !finite_positive(*c.node_distance_m)) {
    throw ConfigError("node_distance must be > 0");
  }
  if (!c.positions.empty()) {
    if (c.positions.size() != c.num_nodes) {
      throw ConfigError("explicit positions must match the node count");
    }
    for (const auto& p : c.positions) {
      if (!std::isfinite(p.x_m) || !std::isfinite(p.y_m) || (p.x_m == 0.0 && p.y_m == 0.0)) {
        throw ConfigError("node positions must be finite and away from the gateway");
      }
    }
  }
}

void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "nodes") {
    c.num_nodes = parse_count(key, value);
  } else if (key == "radius") {
    c.radius_m = parse_double(key, value);
  } else if (key == "period") {
    c.period_s = parse_double(key, value);
  } else if (key == "scheme") {
    c.scheme = std::string(value);
  } else if (key == "duration") {
    c.duration_s = parse_double(key, value);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(parse_count(key, value));
  } else if (key == "channels") {
    c.channels = static_cast<int>(parse_int(key, value));
  } else if (key == "payload") {
    c.payload_bytes = static_cast<int>(parse_int(key, value));
  } else if (key == "preamble") {
    c.preamble_symbols = static_cast<int>(parse_int(key, value));
  } else if (key == "tx_power") {
    c.tx_power_dbm = parse_double(key, value);
  } else if (key == "demod_capacity") {
    if (value == "unlimited") {
      c.demod_capacity.reset();
    } else {
      c.demod_capacity = static_cast<int>(parse_int(key, value));
    }
  } else if (key == "capture_threshold") {
    c.capture_threshold_db = parse_double(key, value);
  } else if (key == "noise_figure") {
    c.noise_figure_db = parse_double(key, value);
  } else if (key == "d0") {
    c.path_loss.d0_m = parse_double(key, value);
  } else if (key == "lpl0") {
    c.path_loss.lpl0_db = parse_double(key, value);
  } else if (key == "gamma") {
    c.path_loss.gamma = parse_double(key, value);
  } else if (key == "sigma") {
    c.path_loss.sigma_db = parse_double(key, value);
  } else if (key == "mts") {
    c.thresholds.mts = parse_double(key, value);
  } else if (key == "pri") {
    c.thresholds.pri = parse_double(key, value);
  } else if (key == "window") {
    c.thresholds.window = parse_count(key, value);
  } else if (key == "adr_history") {
    c.adr.history = parse_count(key, value);
  } else if (key == "adr_margin") {
    c.adr.device_margin_db = parse_double(key, value);
  } else if (key == "initial_sf") {
    if (value == "feasible") {
      c.initial_sf = InitialSfPolicy::kLowestFeasible;
    } else if (value == "sf12") {
      c.initial_sf = InitialSfPolicy::kAllSf12;
    } else if (value == "random") {
      c.initial_sf = InitialSfPolicy::kRandom;
    } else {
      bad_value(key, value);
    }
  } else if (key == "traffic") {
    if (value == "exponential") {
      c.traffic = TrafficModel::kExponential;
    } else if (value == "jitter") {
      c.traffic = TrafficModel::kJittered;
    } else {
      bad_value(key, value);
    }
  } else if (key == "jitter") {
    c.jitter_fraction = parse_double(key, value);
  } else if (key == "duty_cycle") {
    if (value == "off") {
      c.duty_cycle.reset();
    } else {
      c.duty_cycle = parse_double(key, value);
    }
  } else if (key == "warmup") {
    c.warmup_fraction = parse_double(key, value);
  } else if (key == "node_distance") {
    c.node_distance_m = parse_double(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(ScenarioConfig& config, std::istream& in) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(ScenarioConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_config_text(config, in);
}

std::string_view to_string(InitialSfPolicy policy) {
  switch (policy) {
    case InitialSfPolicy::kLowestFeasible:
      return "feasible";
    case InitialSfPolicy::kAllSf12:
      return "sf12";
    case InitialSfPolicy::kRandom:
      return "random";
  }
  return "feasible";
}

}  // namespace loracell
