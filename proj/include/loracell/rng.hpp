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

namespace loracell {

/// Counter-based SplitMix64 stream. Output i depends only on (seed, key, i),
/// so substreams keyed by node id are unaffected by event interleaving.
/// Distributions are computed here rather than with <random> so that draws
/// are identical across standard library implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_key);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform integer on [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n);
  /// Exponential with the given mean; always > 0.
  double exponential(double mean);
  /// Normal via Box-Muller (one draw per call, no cached spare).
  double normal(double mean, double stddev);

  /// Independent stream derived from this stream's seed and `key`.
  Rng substream(std::uint64_t key) const;

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

/// Stream tags combined with a node id into a substream key.
enum class StreamTag : std::uint64_t {
  kPlacement = 1,
  kTraffic = 2,
  kChannel = 3,
  kShadowing = 4,
  kInitialSf = 5,
};

constexpr std::uint64_t stream_key(StreamTag tag, std::uint64_t node_id) {
  return (static_cast<std::uint64_t>(tag) << 40) ^ node_id;
}

}  // namespace loracell
