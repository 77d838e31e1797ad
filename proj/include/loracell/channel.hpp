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

#include "loracell/radio.hpp"

namespace loracell {

/// Log-distance path loss parameters. Defaults are the dense-deployment
/// calibration: d0 = 40 m, 127.41 dB at d0, exponent 2.08, no shadowing.
struct PathLossParams {
  double d0_m = 40.0;
  double lpl0_db = 127.41;
  double gamma = 2.08;
  double sigma_db = 0.0;
};

/// Throws std::invalid_argument if d0 <= 0 or sigma < 0.
void validate(const PathLossParams& params);

struct Position {
  double x_m = 0.0;
  double y_m = 0.0;

  double distance_to(const Position& other) const;
  friend bool operator==(const Position&, const Position&) = default;
};

/// lpl0 + 10*gamma*log10(d/d0) + shadowing. The caller draws the shadowing
/// term from N(0, sigma^2); pass 0 for a deterministic channel.
double path_loss(const PathLossParams& params, double distance_m, double shadowing_db = 0.0);

inline constexpr double kDefaultNoiseFigureDb = 6.0;

double received_power(double tx_power_dbm, double antenna_gains_db, double loss_db);

/// Thermal noise floor -174 + 10 log10(BW) + NF, in dBm.
double noise_floor(Bandwidth bw, double noise_figure_db = kDefaultNoiseFigureDb);

double snr_estimate(double rssi_dbm, Bandwidth bw, double noise_figure_db = kDefaultNoiseFigureDb);

struct RangeEstimate {
  double distance_m = 0.0;
  /// Set when the link budget cannot even reach d0 (distance < d0).
  bool below_reference = false;
};

/// Distance at which the deterministic received power equals the receiver
/// sensitivity. Requires sigma == 0.
RangeEstimate max_range(SpreadingFactor sf, Bandwidth bw, double tx_power_dbm,
                        const PathLossParams& params, double antenna_gains_db = 0.0);

/// Lowest SF whose sensitivity is met at `distance_m` (sigma = 0 budget), or
/// SF12 when none is.
SpreadingFactor lowest_feasible_sf(double distance_m, Bandwidth bw, double tx_power_dbm,
                                   const PathLossParams& params);

}  // namespace loracell
