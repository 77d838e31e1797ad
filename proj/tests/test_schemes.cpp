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

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "loracell/channel.hpp"
#include "loracell/errors.hpp"
#include "loracell/schemes.hpp"

using namespace loracell;

namespace {

UplinkRecord rec(std::uint32_t fcnt, double rssi = -100.0, double snr = 0.0, int sf = 7) {
  UplinkRecord r;
  r.node_id = 1;
  r.fcnt = fcnt;
  r.rssi_dbm = rssi;
  r.snr_db = snr;
  r.sf = SpreadingFactor{sf};
  return r;
}

// Rebuilds every counter from the assignment map alone.
void check_counts(const ServerState& s) {
  std::array<int, 6> group{};
  std::vector<std::vector<int>> ch(6, std::vector<int>(static_cast<std::size_t>(s.num_channels())));
  for (const auto& [node, a] : s.assignments()) {
    ++group[a.sf.index()];
    ++ch[a.sf.index()][static_cast<std::size_t>(a.channel)];
  }
  for (int sf = 7; sf <= 12; ++sf) {
    const SpreadingFactor f{sf};
    CHECK(s.sf_group(f) == group[f.index()]);
    int sum = 0;
    for (int c = 0; c < s.num_channels(); ++c) {
      CHECK(s.ch_ctrl(f, c) == ch[f.index()][static_cast<std::size_t>(c)]);
      sum += s.ch_ctrl(f, c);
    }
    CHECK(sum == s.sf_group(f));
  }
}

}  // namespace

TEST_CASE("short-term DER") {
  std::vector<UplinkRecord> w;
  for (std::uint32_t f = 16; f <= 25; ++f) w.push_back(rec(f));
  CHECK(*short_term_der(w, 10) == doctest::Approx(1.0));

  w.clear();
  for (std::uint32_t f : {0u, 2u, 4u, 6u, 8u, 10u, 12u, 14u, 16u, 19u}) w.push_back(rec(f));
  CHECK(*short_term_der(w, 10) == doctest::Approx(0.5));

  w.resize(7);
  CHECK_FALSE(short_term_der(w, 10).has_value());

  std::vector<UplinkRecord> bad{rec(5), rec(4)};
  CHECK_THROWS_AS(short_term_der(bad, 2), std::logic_error);
}

TEST_CASE("estimation window drops duplicates and evicts oldest") {
  EstimationWindow win(3);
  CHECK(win.push(rec(1)));
  CHECK_FALSE(win.push(rec(1)));
  CHECK_FALSE(win.push(rec(0)));
  CHECK(win.push(rec(2)));
  CHECK(win.push(rec(5)));
  CHECK(win.full());
  CHECK(win.push(rec(6)));
  CHECK(win.size() == 3);
  CHECK(win.records().front().fcnt == 2);
  CHECK(*short_term_der(win) == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("SF weights and per-SF caps") {
  const int num[] = {224, 128, 72, 40, 22, 12};
  double total = 0;
  for (int sf = 7; sf <= 12; ++sf) {
    // s / 2^s normalised over 7..12.
    double denom = 0;
    for (int k = 7; k <= 12; ++k) denom += k / std::pow(2.0, k);
    const double oracle = (sf / std::pow(2.0, sf)) / denom;
    CHECK(std::abs(alpha(SpreadingFactor{sf}) - oracle) < 1e-12);
    CHECK(std::abs(alpha(SpreadingFactor{sf}) - num[sf - 7] / 498.0) < 1e-12);
    CHECK(alpha_numerator(SpreadingFactor{sf}) == num[sf - 7]);
    total += alpha(SpreadingFactor{sf});
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(sqi(SpreadingFactor{7}, 0) == 0.0);
  CHECK(sqi(SpreadingFactor{7}, 1000) == doctest::Approx(449.80).epsilon(1e-4));
  double caps = 0;
  for (int sf = 7; sf <= 12; ++sf) caps += sqi(SpreadingFactor{sf}, 777);
  CHECK(caps == doctest::Approx(777.0));
}

TEST_CASE("threshold validation") {
  DrccThresholds t;
  CHECK_NOTHROW(validate(t));
  t.mts = 0.9;
  CHECK_THROWS_AS(validate(t), ConfigError);
  t = {};
  t.window = 0;
  CHECK_THROWS_AS(validate(t), ConfigError);
}

TEST_CASE("DRCC data rate step") {
  ServerState s(8, 1500);
  for (NodeId n = 100; n < 200; ++n) s.assign(n, {SpreadingFactor{10}, 0});
  s.assign(1, {SpreadingFactor{9}, 0});

  SUBCASE("low DER moves to a slower SF") {
    CHECK(drcc_data_rate_step(s, 1, 0.30, -100) == SpreadingFactor{10});
  }
  SUBCASE("high DER with margin moves to a faster SF") {
    CHECK(drcc_data_rate_step(s, 1, 0.90, -120) == SpreadingFactor{8});
  }
  SUBCASE("high DER without margin stays") {
    s.assign(2, {SpreadingFactor{8}, 0});
    CHECK_FALSE(drcc_data_rate_step(s, 2, 0.90, -127).has_value());
  }
  SUBCASE("SF12 cannot go slower") {
    s.assign(3, {SpreadingFactor{12}, 0});
    CHECK_FALSE(drcc_data_rate_step(s, 3, 0.10, -100).has_value());
  }
  SUBCASE("mid-band DER stays") { CHECK_FALSE(drcc_data_rate_step(s, 1, 0.6, -100).has_value()); }
  SUBCASE("full target group blocks the move") {
    ServerState small(8, 100);
    small.assign(1, {SpreadingFactor{9}, 0});
    for (NodeId n = 10; n < 18; ++n) small.assign(n, {SpreadingFactor{10}, 0});  // cap 8.03
    CHECK(drcc_data_rate_step(small, 1, 0.3, -100) == SpreadingFactor{10});
    small.assign(18, {SpreadingFactor{10}, 0});
    CHECK_FALSE(drcc_data_rate_step(small, 1, 0.3, -100).has_value());
  }
}

TEST_CASE("initial channel split") {
  auto split = [](int nodes, int channels) {
    ServerState s(channels, static_cast<std::size_t>(nodes));
    std::vector<std::pair<NodeId, SpreadingFactor>> list;
    for (int i = 0; i < nodes; ++i) list.emplace_back(static_cast<NodeId>(i), SpreadingFactor{7});
    initialize_channels(s, list);
    check_counts(s);
    return std::vector<int>(s.ch_ctrl_row(SpreadingFactor{7}).begin(),
                            s.ch_ctrl_row(SpreadingFactor{7}).end());
  };
  CHECK(split(16, 8) == std::vector<int>(8, 2));
  const auto seventeen = split(17, 8);
  CHECK(std::count(seventeen.begin(), seventeen.end(), 3) == 1);
  CHECK(std::count(seventeen.begin(), seventeen.end(), 2) == 7);
  for (int c : {1, 3, 8}) {
    ServerState s(c, 1);
    const std::pair<NodeId, SpreadingFactor> one{5, SpreadingFactor{9}};
    initialize_channels(s, std::span(&one, 1));
    CHECK(s.assignment(5).channel == 0);
  }
}

TEST_CASE("initial channel split stays balanced for random group sizes") {
  std::mt19937 gen(4);
  std::uniform_int_distribution<int> size(0, 300);
  std::uniform_int_distribution<int> chans(1, 16);
  for (int round = 0; round < 200; ++round) {
    const int c = chans(gen);
    std::vector<std::pair<NodeId, SpreadingFactor>> list;
    NodeId id = 0;
    for (int sf = 7; sf <= 12; ++sf) {
      const int n = size(gen);
      for (int i = 0; i < n; ++i) list.emplace_back(id++, SpreadingFactor{sf});
    }
    std::shuffle(list.begin(), list.end(), gen);
    ServerState s(c, list.size());
    initialize_channels(s, list);
    check_counts(s);
    for (int sf = 7; sf <= 12; ++sf) {
      const auto row = s.ch_ctrl_row(SpreadingFactor{sf});
      const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
      CHECK(*hi - *lo <= 1);
    }
  }
}

TEST_CASE("rebalance picks the least loaded channel") {
  ServerState s(8, 100);
  const int load[] = {3, 1, 2, 2, 2, 2, 2, 2};
  NodeId id = 0;
  for (int c = 0; c < 8; ++c) {
    for (int k = 0; k < load[c]; ++k) s.assign(id++, {SpreadingFactor{8}, c});
  }
  s.assign(999, {SpreadingFactor{9}, 4});
  CHECK(rebalance_on_change(s, 999, SpreadingFactor{9}, SpreadingFactor{8}) == 1);
  CHECK(s.assignment(999) == ChannelAssignment{SpreadingFactor{8}, 1});
  check_counts(s);

  ServerState even(4, 10);
  CHECK(rebalance_on_change(even, 1, std::nullopt, SpreadingFactor{7}) == 0);
  CHECK_THROWS_AS(rebalance_on_change(even, 1, SpreadingFactor{9}, SpreadingFactor{7}),
                  std::invalid_argument);
}

TEST_CASE("incremental counts survive random scheme events") {
  std::mt19937 gen(2024);
  std::uniform_int_distribution<int> op(0, 3);
  std::uniform_int_distribution<NodeId> node(0, 60);
  std::uniform_int_distribution<int> sf(7, 12);
  std::uniform_int_distribution<int> ch(0, 7);
  ServerState s(8, 61);
  for (int i = 0; i < 10000; ++i) {
    const NodeId n = node(gen);
    switch (op(gen)) {
      case 0:
        s.assign(n, {SpreadingFactor{sf(gen)}, ch(gen)});
        break;
      case 1:
        s.remove(n);
        break;
      case 2: {
        std::optional<SpreadingFactor> before;
        if (s.has_node(n)) before = s.assignment(n).sf;
        rebalance_on_change(s, n, before, SpreadingFactor{sf(gen)});
        break;
      }
      default:
        if (i % 997 == 0) s.clear_assignments();
        break;
    }
    if (i % 50 == 0) check_counts(s);
  }
  check_counts(s);
  CHECK_THROWS_AS(s.assignment(12345), std::out_of_range);
}

TEST_CASE("basic ADR") {
  RadioParams r;
  r.sf = SpreadingFactor{12};
  std::vector<UplinkRecord> h;
  for (std::uint32_t i = 0; i < 20; ++i) h.push_back(rec(i, -120, -9.0, 12));
  h[7].snr_db = -5.0;
  CHECK(basic_adr_step(h, r) == SpreadingFactor{11});

  h.pop_back();
  CHECK_FALSE(basic_adr_step(h, r).has_value());

  std::vector<UplinkRecord> strong;
  for (std::uint32_t i = 0; i < 20; ++i) strong.push_back(rec(i, -60, 30.0));
  r.sf = SpreadingFactor{7};
  CHECK_FALSE(basic_adr_step(strong, r).has_value());
  r.sf = SpreadingFactor{9};
  CHECK(basic_adr_step(strong, r) == SpreadingFactor{7});

  std::vector<UplinkRecord> weak;
  for (std::uint32_t i = 0; i < 20; ++i) weak.push_back(rec(i, -120, -20.0));
  CHECK_FALSE(basic_adr_step(weak, r).has_value());
}

TEST_CASE("fair SF allocation") {
  std::vector<NodeLink> links;
  for (NodeId i = 0; i < 498; ++i) links.push_back({i, -60.0 - i * 0.01});
  const auto sfs = fair_sf_allocation(links);
  std::map<int, int> hist;
  for (auto sf : sfs) ++hist[sf.value()];
  CHECK(hist[7] == 224);
  CHECK(hist[8] == 128);
  CHECK(hist[9] == 72);
  CHECK(hist[10] == 40);
  CHECK(hist[11] == 22);
  CHECK(hist[12] == 12);
  // Strongest links get the fastest rates.
  CHECK(sfs[0] == SpreadingFactor{7});
  CHECK(sfs[497] == SpreadingFactor{12});

  const std::vector<NodeLink> one{{0, -100.0}};
  CHECK(fair_sf_allocation(one)[0] == SpreadingFactor{7});

  std::vector<NodeLink> far = links;
  far[0].rssi_dbm = -134.0;  // below SF11 sensitivity
  CHECK(fair_sf_allocation(far)[0] == SpreadingFactor{12});

  std::vector<NodeLink> odd(1000, NodeLink{0, -80.0});
  for (NodeId i = 0; i < odd.size(); ++i) odd[i].node_id = i;
  CHECK(fair_sf_allocation(odd).size() == 1000);
}

TEST_CASE("static scheme never commands") {
  SchemeOptions opt;
  opt.total_nodes = 3;
  opt.seed = 5;
  auto scheme = make_scheme("static-sf9", opt);
  CHECK(scheme->name() == "static-sf9");
  std::vector<NodeSetup> nodes(3);
  for (NodeId i = 0; i < 3; ++i) nodes[i].node_id = i;
  scheme->setup(nodes);
  for (const auto& n : nodes) {
    CHECK(n.radio.sf == SpreadingFactor{9});
    CHECK(n.radio.channel_index >= 0);
    CHECK(n.radio.channel_index < 8);
  }
  for (std::uint32_t f = 0; f < 50; ++f) {
    UplinkRecord u = rec(f, -130, -20, 9);
    CHECK_FALSE(scheme->on_uplink(u).has_value());
  }
}

TEST_CASE("DRCC scheme commands after a full window") {
  SchemeOptions opt;
  opt.total_nodes = 20;
  auto drcc = std::make_unique<DrccScheme>(opt);
  std::vector<NodeSetup> nodes(20);
  for (NodeId i = 0; i < 20; ++i) {
    nodes[i].node_id = i;
    nodes[i].radio.sf = SpreadingFactor{i < 10 ? 7 : 9};
    nodes[i].rssi_dbm = -100;
  }
  drcc->setup(nodes);
  CHECK(drcc->state().sf_group(SpreadingFactor{7}) == 10);
  CHECK(drcc->state().sf_group(SpreadingFactor{9}) == 10);

  // Node 0 at SF7 sees 10 receptions over 40 FCnts (DER 0.25).
  std::optional<LinkAdrReq> cmd;
  for (std::uint32_t k = 0; k < 10; ++k) {
    UplinkRecord u = rec(k * 4 + 3, -100, 0, 7);
    u.node_id = 0;
    cmd = drcc->on_uplink(u);
    if (k < 9) CHECK_FALSE(cmd.has_value());
  }
  REQUIRE(cmd.has_value());
  CHECK(cmd->data_rate == 4);  // SF8
  CHECK(cmd->tx_power == kTxPowerIndex14Dbm);
  CHECK(std::popcount(cmd->ch_mask) == 1);
  CHECK(drcc->state().assignment(0).sf == SpreadingFactor{8});
  CHECK(drcc->state().assignment(0).channel == 0);
  check_counts(drcc->state());
}

TEST_CASE("scheme registry") {
  CHECK(is_known_scheme("drcc"));
  CHECK(is_known_scheme("adr"));
  CHECK(is_known_scheme("fadr"));
  CHECK(is_known_scheme("static-sf12"));
  CHECK_FALSE(is_known_scheme("static-sf13"));
  CHECK_FALSE(is_known_scheme("nope"));
  CHECK_THROWS_AS(make_scheme("nope", {}), ConfigError);
  for (const auto& name : known_schemes()) CHECK(make_scheme(name, {})->name() == name);
}
