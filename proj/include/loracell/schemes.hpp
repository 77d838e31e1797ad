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

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loracell/collision.hpp"
#include "loracell/mac.hpp"
#include "loracell/radio.hpp"
#include "loracell/rng.hpp"

namespace loracell {

/// A received, deduplicated uplink as the network server sees it.
struct UplinkRecord {
  NodeId node_id = 0;
  std::uint32_t fcnt = 0;
  double rssi_dbm = 0.0;
  double snr_db = 0.0;
  SpreadingFactor sf{7};
  int channel_index = 0;
  double time_s = 0.0;
};

// ---------------------------------------------------------------------------
// Short-term DER

/// The last `capacity` received uplinks of one node, oldest first.
class EstimationWindow {
 public:
  explicit EstimationWindow(std::size_t capacity = 10);

  /// Appends a record, evicting the oldest when full. Returns false (and
  /// ignores the record) if its FCnt is not newer than the latest one, which
  /// is how duplicates are removed.
  bool push(const UplinkRecord& record);
  void clear() { records_.clear(); }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return records_.size(); }
  bool full() const { return records_.size() == capacity_; }
  const std::deque<UplinkRecord>& records() const { return records_; }

 private:
  std::size_t capacity_;
  std::deque<UplinkRecord> records_;
};

/// P = R / T with R = capacity and T = latest FCnt - oldest FCnt + 1.
/// Returns nullopt until `records` holds `capacity` entries. Throws
/// std::logic_error if FCnts are not strictly increasing.
std::optional<double> short_term_der(std::span<const UplinkRecord> records, std::size_t capacity);
std::optional<double> short_term_der(const EstimationWindow& window);

// ---------------------------------------------------------------------------
// Saturation thresholds

/// Reference share of nodes for `sf`: (s / 2^s) / sum_{i=7..12} (i / 2^i).
double alpha(SpreadingFactor sf);
/// Same share as an exact fraction numerator over 498 (224, 128, 72, 40, 22, 12).
int alpha_numerator(SpreadingFactor sf);
inline constexpr int kAlphaDenominator = 498;

/// Population cap Gamma(s) = alpha(s) * n, kept real-valued.
double sqi(SpreadingFactor sf, std::size_t n);

struct DrccThresholds {
  double mts = 0.40;  // below: move to a slower SF
  double pri = 0.80;  // above: try a faster SF
  std::size_t window = 10;
};

/// Throws ConfigError unless 0 < mts < pri < 1 and window >= 1.
void validate(const DrccThresholds& thresholds);

// ---------------------------------------------------------------------------
// Server bookkeeping

struct ChannelAssignment {
  SpreadingFactor sf{7};
  int channel = 0;
  friend bool operator==(const ChannelAssignment&, const ChannelAssignment&) = default;
};

/// Per-SF and per-(SF, channel) node counts kept consistent with the
/// per-node assignment map.
class ServerState {
 public:
  ServerState(int num_channels, std::size_t total_nodes, DrccThresholds thresholds = {});

  int num_channels() const { return num_channels_; }
  std::size_t total_nodes() const { return total_nodes_; }
  const DrccThresholds& thresholds() const { return thresholds_; }

  int sf_group(SpreadingFactor sf) const { return sf_group_[sf.index()]; }
  int ch_ctrl(SpreadingFactor sf, int channel) const;
  std::span<const int> ch_ctrl_row(SpreadingFactor sf) const;

  bool has_node(NodeId node) const { return assignment_.contains(node); }
  /// Throws std::out_of_range for unknown nodes.
  const ChannelAssignment& assignment(NodeId node) const;
  const std::map<NodeId, ChannelAssignment>& assignments() const { return assignment_; }

  /// Adds or replaces a node's record, updating all counts.
  void assign(NodeId node, ChannelAssignment where);
  /// Deletes a node's record. Returns the removed assignment, if any.
  std::optional<ChannelAssignment> remove(NodeId node);
  void clear_assignments();

  EstimationWindow& window(NodeId node);

 private:
  int num_channels_;
  std::size_t total_nodes_;
  DrccThresholds thresholds_;
  std::array<int, SpreadingFactor::kCount> sf_group_{};
  std::vector<int> ch_ctrl_;  // row-major [sf index][channel]
  std::map<NodeId, ChannelAssignment> assignment_;
  std::map<NodeId, EstimationWindow> windows_;
};

/// SF decision for one node given its short-term DER `der` and the RSSI of
/// its latest uplink. Returns the new SF, or nullopt when it stays put.
/// Throws std::out_of_range for unknown nodes.
std::optional<SpreadingFactor> drcc_data_rate_step(const ServerState& state, NodeId node,
                                                   double der, double latest_rssi_dbm,
                                                   Bandwidth bw = Bandwidth::k125);

/// Groups nodes by SF and splits each group, in the given order, into
/// consecutive blocks on channels 0, 1, ... whose sizes differ by at most one.
/// Replaces all existing assignments.
void initialize_channels(ServerState& state,
                         std::span<const std::pair<NodeId, SpreadingFactor>> nodes);

/// Moves a node to `sf_after` on the least loaded channel for that SF (lowest
/// index on ties) and returns the channel. `sf_before` is nullopt for a node
/// joining mid-run. Throws std::out_of_range if a node with a `sf_before` is
/// unknown, and std::invalid_argument if `sf_before` disagrees with the state.
int rebalance_on_change(ServerState& state, NodeId node, std::optional<SpreadingFactor> sf_before,
                        SpreadingFactor sf_after);

// ---------------------------------------------------------------------------
// Basic ADR

struct AdrParams {
  std::size_t history = 20;
  double device_margin_db = 10.0;
  double step_db = 3.0;
  /// Demodulation floor per SF7..SF12.
  std::array<double, SpreadingFactor::kCount> required_snr_db{-7.5, -10.0, -12.5,
                                                              -15.0, -17.5, -20.0};
};

/// Max-SNR rule over the last `params.history` uplinks. Only SF decreases are
/// produced; power steps are not modelled. nullopt on an under-filled history
/// or when no step is warranted.
std::optional<SpreadingFactor> basic_adr_step(std::span<const UplinkRecord> history,
                                              const RadioParams& current,
                                              const AdrParams& params = {});

// ---------------------------------------------------------------------------
// Fair allocation baseline

struct NodeLink {
  NodeId node_id = 0;
  double rssi_dbm = 0.0;
};

/// Sorts by RSSI (strongest first, node id on ties) and hands out SFs in the
/// alpha proportions: floor(alpha(s) * n) per SF, leftovers by largest remainder.
/// Nodes whose share is infeasible are bumped to their lowest feasible SF.
/// The result is indexed like `nodes`.
std::vector<SpreadingFactor> fair_sf_allocation(std::span<const NodeLink> nodes,
                                                Bandwidth bw = Bandwidth::k125);

// ---------------------------------------------------------------------------
// Pluggable schemes

struct NodeSetup {
  NodeId node_id = 0;
  double distance_m = 0.0;
  /// Deterministic (sigma = 0) received power at the gateway.
  double rssi_dbm = 0.0;
  RadioParams radio;
};

struct SchemeOptions {
  int num_channels = 8;
  std::size_t total_nodes = 0;
  Bandwidth bandwidth = Bandwidth::k125;
  DrccThresholds drcc;
  AdrParams adr;
  std::uint64_t seed = 0;
};

/// Network-server policy. `setup` runs once before the first uplink and may
/// rewrite each node's SF and channel; `on_uplink` sees every received uplink
/// in time order and may answer with a LinkADRReq for that node.
class Scheme {
 public:
  virtual ~Scheme() = default;
  virtual std::string_view name() const = 0;
  virtual void setup(std::span<NodeSetup> nodes) = 0;
  virtual std::optional<LinkAdrReq> on_uplink(const UplinkRecord& uplink) = 0;
};

/// Fixed SF for every node, channel drawn uniformly per node. Never commands.
class StaticScheme final : public Scheme {
 public:
  StaticScheme(SpreadingFactor sf, SchemeOptions options);
  std::string_view name() const override { return name_; }
  void setup(std::span<NodeSetup> nodes) override;
  std::optional<LinkAdrReq> on_uplink(const UplinkRecord&) override { return std::nullopt; }

 private:
  SpreadingFactor sf_;
  SchemeOptions options_;
  std::string name_;
};

/// LoRaWAN-style max-SNR ADR with channels drawn uniformly per node.
class AdrScheme final : public Scheme {
 public:
  explicit AdrScheme(SchemeOptions options);
  std::string_view name() const override { return "adr"; }
  void setup(std::span<NodeSetup> nodes) override;
  std::optional<LinkAdrReq> on_uplink(const UplinkRecord& uplink) override;

 private:
  SchemeOptions options_;
  std::map<NodeId, RadioParams> radios_;
  std::map<NodeId, std::deque<UplinkRecord>> history_;
};

/// Alpha-proportional SF split by RSSI rank, fixed after setup.
class FairScheme final : public Scheme {
 public:
  explicit FairScheme(SchemeOptions options);
  std::string_view name() const override { return "fadr"; }
  void setup(std::span<NodeSetup> nodes) override;
  std::optional<LinkAdrReq> on_uplink(const UplinkRecord&) override { return std::nullopt; }

 private:
  SchemeOptions options_;
};

/// Short-term-DER rate control plus channel load balancing.
class DrccScheme final : public Scheme {
 public:
  explicit DrccScheme(SchemeOptions options);
  std::string_view name() const override { return "drcc"; }
  void setup(std::span<NodeSetup> nodes) override;
  std::optional<LinkAdrReq> on_uplink(const UplinkRecord& uplink) override;

  /// Registers a node that was not present at setup.
  int join(NodeId node, SpreadingFactor sf);

  const ServerState& state() const { return state_; }

 private:
  SchemeOptions options_;
  ServerState state_;
};

/// `static-sf7` .. `static-sf12`, `adr`, `fadr`, `drcc`.
bool is_known_scheme(std::string_view name);
std::vector<std::string> known_schemes();
/// Throws ConfigError for unknown names.
std::unique_ptr<Scheme> make_scheme(std::string_view name, const SchemeOptions& options);

}  // namespace loracell
