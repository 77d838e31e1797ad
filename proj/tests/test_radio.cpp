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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "loracell/radio.hpp"

using namespace loracell;

namespace {

// Independent evaluation of the Semtech time-on-air formula in floating point.
double oracle_airtime_ms(int sf, double bw_khz, int cr, int pl, int preamble, bool explicit_header,
                         bool low_dr) {
  const double t_sym_ms = std::pow(2.0, sf) / bw_khz;
  const double ih = explicit_header ? 0.0 : 1.0;
  const double de = low_dr ? 1.0 : 0.0;
  const double num = 8.0 * pl - 4.0 * sf + 28.0 + 16.0 - 20.0 * ih;
  const double n = 8.0 + std::max(std::ceil(num / (4.0 * (sf - 2.0 * de))) * cr, 0.0);
  return (preamble + 4.25 + n) * t_sym_ms;
}

RadioParams radio(int sf, Bandwidth bw = Bandwidth::k125, CodingRate cr = CodingRate::k4_5) {
  RadioParams p;
  p.sf = SpreadingFactor{sf};
  p.bandwidth = bw;
  p.coding_rate = cr;
  return p;
}

}  // namespace

TEST_CASE("spreading factor range") {
  CHECK_THROWS_AS(SpreadingFactor{6}, std::invalid_argument);
  CHECK_THROWS_AS(SpreadingFactor{13}, std::invalid_argument);
  CHECK(SpreadingFactor{7}.index() == 0);
  CHECK(SpreadingFactor{12}.index() == 5);
  CHECK(SpreadingFactor{8} < SpreadingFactor{9});
}

TEST_CASE("airtime reference values") {
  CHECK(airtime(radio(7), 20) * 1e3 == doctest::Approx(56.576).epsilon(1e-12));
  CHECK(airtime(radio(12), 20) * 1e3 == doctest::Approx(1318.912).epsilon(1e-12));
  CHECK(payload_symbols(SpreadingFactor{7}, CodingRate::k4_5, 20, true, false) == 43);
  CHECK(payload_symbols(SpreadingFactor{12}, CodingRate::k4_5, 20, true, true) == 28);
  CHECK(symbol_time(SpreadingFactor{7}, Bandwidth::k125) == doctest::Approx(1.024e-3));
  CHECK(preamble_time(SpreadingFactor{7}, Bandwidth::k125, 8) == doctest::Approx(12.544e-3));
}

TEST_CASE("airtime matches the floating point oracle over the parameter grid") {
  for (int sf = 7; sf <= 12; ++sf) {
    for (Bandwidth bw : {Bandwidth::k125, Bandwidth::k250, Bandwidth::k500}) {
      for (int cr = 5; cr <= 8; ++cr) {
        for (int pl : {1, 5, 13, 20, 51, 100, 222, 255}) {
          for (bool header : {true, false}) {
            const bool low_dr = low_dr_optimize_required(SpreadingFactor{sf}, bw);
            AirtimeOptions opt;
            opt.explicit_header = header;
            opt.low_dr_optimize = low_dr;
            const double got = airtime(radio(sf, bw, coding_rate_from_denominator(cr)), pl, opt);
            const double want = oracle_airtime_ms(sf, khz(bw), cr, pl, 8, header, low_dr);
            CHECK(std::abs(got * 1e3 - want) < 1e-6);
          }
        }
      }
    }
  }
}

TEST_CASE("airtime grows with SF and payload") {
  for (int sf = 7; sf < 12; ++sf) {
    CHECK(airtime(radio(sf), 20) < airtime(radio(sf + 1), 20));
  }
  for (int pl = 1; pl < 200; ++pl) {
    CHECK(airtime(radio(9), pl) <= airtime(radio(9), pl + 1));
  }
}

TEST_CASE("airtime preconditions") {
  CHECK_THROWS_AS(airtime(radio(7), 0), std::invalid_argument);
  AirtimeOptions opt;
  opt.low_dr_optimize = false;
  CHECK_THROWS_AS(airtime(radio(12), 20, opt), std::invalid_argument);
  CHECK_NOTHROW(airtime(radio(12, Bandwidth::k250), 20, opt));
}

TEST_CASE("sensitivity table") {
  CHECK(sensitivity(SpreadingFactor{7}, Bandwidth::k125) == -123);
  CHECK(sensitivity(SpreadingFactor{12}, Bandwidth::k125) == -136);
  CHECK(sensitivity(SpreadingFactor{9}, Bandwidth::k250) == -125);
  CHECK(sensitivity(SpreadingFactor{11}, Bandwidth::k500) == -128);
  for (Bandwidth bw : {Bandwidth::k125, Bandwidth::k250, Bandwidth::k500}) {
    for (int sf = 7; sf < 12; ++sf) {
      CHECK(sensitivity(SpreadingFactor{sf + 1}, bw) < sensitivity(SpreadingFactor{sf}, bw));
    }
  }
}

TEST_CASE("data rate mapping") {
  CHECK(dr_to_radio(DataRateIndex{5}).first == SpreadingFactor{7});
  CHECK(dr_to_radio(DataRateIndex{5}).second == Bandwidth::k125);
  CHECK(dr_to_radio(DataRateIndex{6}).second == Bandwidth::k250);
  CHECK(radio_to_dr(SpreadingFactor{12}, Bandwidth::k125) == DataRateIndex{0});
  for (int dr = 0; dr <= 6; ++dr) {
    const auto [sf, bw] = dr_to_radio(DataRateIndex{dr});
    CHECK(radio_to_dr(sf, bw).value == dr);
  }
  CHECK_THROWS_AS(dr_to_radio(DataRateIndex{7}), std::invalid_argument);
  CHECK_THROWS_AS(dr_to_radio(DataRateIndex{-1}), std::invalid_argument);
  CHECK_THROWS_AS(radio_to_dr(SpreadingFactor{9}, Bandwidth::k500), std::invalid_argument);
}

TEST_CASE("channel plan") {
  ChannelPlan plan;
  CHECK(plan.size() == 8);
  CHECK(plan.frequency_mhz(0) == doctest::Approx(868.1));
  CHECK(plan.frequency_mhz(7) == doctest::Approx(869.5));
  CHECK(plan.first(3).size() == 3);
  CHECK_THROWS_AS(plan.first(0), std::invalid_argument);
  CHECK_THROWS_AS(plan.frequency_mhz(8), std::invalid_argument);
  CHECK_THROWS_AS(ChannelPlan({868.1, 868.1}), std::invalid_argument);

  RadioParams p = radio(7);
  p.tx_power_dbm = 17;
  CHECK_THROWS_AS(validate(p, plan), std::invalid_argument);
  p.tx_power_dbm = 14;
  p.channel_index = 8;
  CHECK_THROWS_AS(validate(p, plan), std::invalid_argument);
}
