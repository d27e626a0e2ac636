// Copyright 2026 The bitrev Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Breadth-first maze router over the public wire graph, plus a seeded
// random-design generator built on it.

#ifndef BITREV_ROUTER_HPP
#define BITREV_ROUTER_HPP

#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitrev/fabric.hpp"
#include "bitrev/netlist.hpp"

namespace bitrev {

/// Decides whether the router may use PIP `pip` of the switch matrix at `sm`.
using PipFilter = std::function<bool(Coord sm, std::size_t pip)>;

class Router {
 public:
  explicit Router(const Fabric& fabric, PipFilter filter = {});

  /// Routes one net from a slice source pin to slice sink pins, all given as
  /// (tile, wire). Sinks already used by earlier nets are avoided and the
  /// sinks of a successful route become occupied. Returns nullopt when some
  /// sink cannot be reached; nothing is occupied in that case.
  std::optional<std::vector<Pip>> route(Coord from, const std::string& source,
                                        const std::vector<std::pair<Coord, std::string>>& sinks);

  /// Routes `sink` from whichever of `sources` reaches it through the fewest
  /// PIPs, earlier sources winning ties. Returns the chosen source's index
  /// and the PIPs, and occupies them.
  std::optional<std::pair<std::size_t, std::vector<Pip>>> route_from_any(
      const std::vector<std::pair<Coord, std::string>>& sources, const std::pair<Coord, std::string>& sink);

  /// Marks every PIP sink of `netlist` as occupied.
  void occupy(const Netlist& netlist);
  bool occupied(Coord sm, const std::string& sink) const { return used_.count({sm, sink}) != 0; }

 private:
  const Fabric& fabric_;
  PipFilter filter_;
  /// [type] source wire -> PIP indices
  std::vector<std::unordered_map<std::string, std::vector<std::size_t>>> by_source_;
  std::set<std::pair<Coord, std::string>> used_;
};

struct RandomDesignOptions {
  int slices = 12;
  int nets = 16;
  int max_fanout = 3;
  /// Sinks are drawn from tiles within this Manhattan distance of the driver.
  int reach = 3;
  double ff_probability = 0.5;
};

/// Seeded random placed-and-routed design on slice sites only. Every net has
/// a slice driver and is fully routed; nets the router cannot complete are
/// dropped.
Netlist random_design(const Fabric& fabric, std::mt19937_64& rng, const RandomDesignOptions& options,
                      const PipFilter& filter = {});

}  // namespace bitrev

#endif  // BITREV_ROUTER_HPP
