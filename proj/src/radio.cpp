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

#include "loracell/radio.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace loracell {

namespace {

// Rows SF7..SF12, columns 125/250/500 kHz.
constexpr double kSensitivityDbm[SpreadingFactor::kCount][3] = {
    {-123, -120, -116},  //
    {-126, -123, -119},  //
    {-129, -125, -122},  //
    {-132, -128, -125},  //
    {-133, -130, -128},  //
    {-136, -133, -130},
};

std::size_t bandwidth_column(Bandwidth bw) {
  switch (bw) {
    case Bandwidth::k125:
      return 0;
    case Bandwidth::k250:
      return 1;
    case Bandwidth::k500:
      return 2;
  }
  throw std::invalid_argument("unsupported bandwidth");
}

}  // namespace

std::array<SpreadingFactor, SpreadingFactor::kCount> all_spreading_factors() {
  return {SpreadingFactor{7},  SpreadingFactor{8},  SpreadingFactor{9},
          SpreadingFactor{10}, SpreadingFactor{11}, SpreadingFactor{12}};
}

Bandwidth bandwidth_from_khz(int value) {
  switch (value) {
    case 125:
      return Bandwidth::k125;
    case 250:
      return Bandwidth::k250;
    case 500:
      return Bandwidth::k500;
    default:
      throw std::invalid_argument("bandwidth must be 125, 250 or 500 kHz, got " +
                                  std::to_string(value));
  }
}

CodingRate coding_rate_from_denominator(int denom) {
  if (denom < 5 || denom > 8) {
    throw std::invalid_argument("coding rate must be 4/5 .. 4/8");
  }
  return static_cast<CodingRate>(denom);
}

ChannelPlan::ChannelPlan()
    : freqs_{868.1, 868.3, 868.5, 868.7, 868.9, 869.1, 869.3, 869.5} {}

ChannelPlan::ChannelPlan(std::vector<double> center_frequencies_mhz)
    : freqs_(std::move(center_frequencies_mhz)) {
  if (freqs_.empty()) throw std::invalid_argument("channel plan is empty");
  if (std::adjacent_find(freqs_.begin(), freqs_.end(), std::greater_equal<>()) != freqs_.end()) {
    throw std::invalid_argument("channel frequencies must be strictly increasing");
  }
}

double ChannelPlan::frequency_mhz(int channel_index) const {
  if (channel_index < 0 || static_cast<std::size_t>(channel_index) >= freqs_.size()) {
    throw std::invalid_argument("channel index " + std::to_string(channel_index) +
                                " outside channel plan");
  }
  return freqs_[static_cast<std::size_t>(channel_index)];
}

ChannelPlan ChannelPlan::first(std::size_t count) const {
  if (count == 0 || count > freqs_.size()) {
    throw std::invalid_argument("channel count must be within 1.." + std::to_string(freqs_.size()));
  }
  return ChannelPlan(std::vector<double>(freqs_.begin(), freqs_.begin() + static_cast<long>(count)));
}

void validate(const RadioParams& params, const ChannelPlan& plan) {
  if (params.channel_index < 0 || static_cast<std::size_t>(params.channel_index) >= plan.size()) {
    throw std::invalid_argument("channel index outside channel plan");
  }
  if (params.tx_power_dbm > kMaxEirpDbm) {
    throw std::invalid_argument("tx power exceeds 16 dBm maximum EIRP");
  }
}

bool low_dr_optimize_required(SpreadingFactor sf, Bandwidth bw) {
  return bw == Bandwidth::k125 && sf.value() >= 11;
}

double symbol_time(SpreadingFactor sf, Bandwidth bw) {
  return std::ldexp(1.0, sf.value()) / hz(bw);
}

double preamble_time(SpreadingFactor sf, Bandwidth bw, int preamble_symbols) {
  return (preamble_symbols + 4.25) * symbol_time(sf, bw);
}

int payload_symbols(SpreadingFactor sf, CodingRate cr, int payload_len, bool explicit_header,
                    bool low_dr_optimize) {
  const int s = sf.value();
  const int ih = explicit_header ? 0 : 1;
  const int de = low_dr_optimize ? 1 : 0;
  // 16 bits of payload CRC are always on for uplinks.
  const int numerator = 8 * payload_len - 4 * s + 28 + 16 - 20 * ih;
  const int denom = 4 * (s - 2 * de);
  const int blocks = numerator > 0 ? (numerator + denom - 1) / denom : 0;
  return 8 + blocks * denominator(cr);
}

double airtime(const RadioParams& params, int payload_len, const AirtimeOptions& options) {
  if (payload_len < 1) throw std::invalid_argument("payload length must be at least 1 byte");
  if (options.preamble_symbols < 0) throw std::invalid_argument("negative preamble length");
  if (low_dr_optimize_required(params.sf, params.bandwidth) && !options.low_dr_optimize) {
    throw std::invalid_argument("low data rate optimization must be on for SF11/SF12 at 125 kHz");
  }
  const int n_payload = payload_symbols(params.sf, params.coding_rate, payload_len,
                                        options.explicit_header, options.low_dr_optimize);
  const double t_sym = symbol_time(params.sf, params.bandwidth);
  return (options.preamble_symbols + 4.25 + n_payload) * t_sym;
}

double airtime(const RadioParams& params, int payload_len, int preamble_symbols) {
  AirtimeOptions options;
  options.preamble_symbols = preamble_symbols;
  options.low_dr_optimize = low_dr_optimize_required(params.sf, params.bandwidth);
  return airtime(params, payload_len, options);
}

double sensitivity(SpreadingFactor sf, Bandwidth bw) {
  return kSensitivityDbm[sf.index()][bandwidth_column(bw)];
}

std::pair<SpreadingFactor, Bandwidth> dr_to_radio(DataRateIndex dr) {
  if (dr.value == 7) throw std::invalid_argument("DR7 (FSK) is not supported");
  if (dr.value < 0 || dr.value > kMaxLoraDataRate) {
    throw std::invalid_argument("data rate index must be within 0..6");
  }
  if (dr.value == 6) return {SpreadingFactor{7}, Bandwidth::k250};
  return {SpreadingFactor{12 - dr.value}, Bandwidth::k125};
}

DataRateIndex radio_to_dr(SpreadingFactor sf, Bandwidth bw) {
  if (bw == Bandwidth::k125) return DataRateIndex{12 - sf.value()};
  if (bw == Bandwidth::k250 && sf.value() == 7) return DataRateIndex{6};
  throw std::invalid_argument("no EU868 data rate for SF" + std::to_string(sf.value()) + "/" +
                              std::to_string(khz(bw)) + " kHz");
}

}  // namespace loracell
