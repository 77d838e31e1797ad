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

#include "loracell/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace loracell {

void validate(const PathLossParams& params) {
  if (!(params.d0_m > 0.0)) throw std::invalid_argument("path loss reference distance must be > 0");
  if (!(params.sigma_db >= 0.0)) throw std::invalid_argument("shadowing sigma must be >= 0");
  if (!std::isfinite(params.lpl0_db) || !std::isfinite(params.gamma)) {
    throw std::invalid_argument("path loss parameters must be finite");
  }
}

double Position::distance_to(const Position& other) const {
  return std::hypot(x_m - other.x_m, y_m - other.y_m);
}

double path_loss(const PathLossParams& params, double distance_m, double shadowing_db) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("distance must be > 0");
  return params.lpl0_db + 10.0 * params.gamma * std::log10(distance_m / params.d0_m) +
         shadowing_db;
}

double received_power(double tx_power_dbm, double antenna_gains_db, double loss_db) {
  return tx_power_dbm + antenna_gains_db - loss_db;
}

double noise_floor(Bandwidth bw, double noise_figure_db) {
  return -174.0 + 10.0 * std::log10(hz(bw)) + noise_figure_db;
}

double snr_estimate(double rssi_dbm, Bandwidth bw, double noise_figure_db) {
  return rssi_dbm - noise_floor(bw, noise_figure_db);
}

RangeEstimate max_range(SpreadingFactor sf, Bandwidth bw, double tx_power_dbm,
                        const PathLossParams& params, double antenna_gains_db) {
  validate(params);
  if (params.sigma_db != 0.0) {
    throw std::invalid_argument("max_range needs a deterministic channel (sigma = 0)");
  }
  if (!(params.gamma > 0.0)) throw std::invalid_argument("max_range needs gamma > 0");
  const double margin = tx_power_dbm + antenna_gains_db - sensitivity(sf, bw) - params.lpl0_db;
  RangeEstimate out;
  out.distance_m = params.d0_m * std::pow(10.0, margin / (10.0 * params.gamma));
  out.below_reference = margin < 0.0;
  return out;
}

SpreadingFactor lowest_feasible_sf(double distance_m, Bandwidth bw, double tx_power_dbm,
                                   const PathLossParams& params) {
  const double rssi = received_power(tx_power_dbm, 0.0, path_loss(params, distance_m));
  for (SpreadingFactor sf : all_spreading_factors()) {
    if (rssi >= sensitivity(sf, bw)) return sf;
  }
  return SpreadingFactor{SpreadingFactor::kMax};
}

}  // namespace loracell
