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

#include "bitrev/router.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>

namespace bitrev {

namespace {

using Node = std::pair<Coord, std::string>;

struct Step {
  Node prev;
  std::size_t pip;
};

}  // namespace

Router::Router(const Fabric& fabric, PipFilter filter) : fabric_(fabric), filter_(std::move(filter)) {
  by_source_.resize(fabric.types.size());
  for (std::size_t t = 0; t < fabric.types.size(); ++t) {
    const auto& pips = fabric.types[t].pips;
    for (std::size_t i = 0; i < pips.size(); ++i) by_source_[t][pips[i].source].push_back(i);
  }
}

void Router::occupy(const Netlist& netlist) {
  for (const auto& net : netlist.nets)
    for (const auto& pip : net.pips)
      if (auto c = parse_sm_tile(pip.tile)) used_.emplace(*c, pip.sink);
}

std::optional<std::vector<Pip>> Router::route(Coord from, const std::string& source,
                                              const std::vector<Node>& sinks) {
  std::vector<Pip> pips;
  std::set<Node> taken;
  std::vector<Node> tree{{from, source}};

  for (const auto& target : sinks) {
    std::map<Node, Step> parent;
    std::set<Node> seen(tree.begin(), tree.end());
    std::deque<Node> queue(tree.begin(), tree.end());
    std::optional<Step> hit;
    while (!queue.empty() && !hit) {
      Node node = queue.front();
      queue.pop_front();
      const Coord c = node.first;
      const std::uint32_t type = fabric_.placement[fabric_.index_of(c)];
      auto it = by_source_[type].find(node.second);
      if (it == by_source_[type].end()) continue;
      for (std::size_t idx : it->second) {
        const std::string& sink = fabric_.types[type].pips[idx].sink;
        Node sink_node{c, sink};
        if (used_.count(sink_node) || taken.count(sink_node)) continue;
        if (filter_ && !filter_(c, idx)) continue;
        if (sink_node == target) {
          hit = Step{node, idx};
          break;
        }
        auto next = fabric_.static_successor(c, sink);
        if (!next || !seen.insert(*next).second) continue;
        parent.emplace(*next, Step{node, idx});
        queue.push_back(*next);
      }
    }
    if (!hit) return std::nullopt;

    // Walk back to the tree, collecting PIPs.
    std::optional<Step> step = hit;
    while (step) {
      const Coord c = step->prev.first;
      const auto& def = fabric_.type_at(c).pips[step->pip];
      pips.push_back({sm_tile_name(c), def.source, def.sink});
      taken.emplace(c, def.sink);
      auto p = parent.find(step->prev);
      if (p == parent.end()) break;
      tree.push_back(step->prev);
      step = p->second;
    }
  }
  used_.insert(taken.begin(), taken.end());
  return pips;
}

std::optional<std::pair<std::size_t, std::vector<Pip>>> Router::route_from_any(const std::vector<Node>& sources,
                                                                              const Node& sink) {
  std::map<Node, Step> parent;
  std::set<Node> seen(sources.begin(), sources.end());
  std::deque<Node> queue(sources.begin(), sources.end());
  std::optional<Step> hit;
  while (!queue.empty() && !hit) {
    Node node = queue.front();
    queue.pop_front();
    const Coord c = node.first;
    const std::uint32_t type = fabric_.placement[fabric_.index_of(c)];
    auto it = by_source_[type].find(node.second);
    if (it == by_source_[type].end()) continue;
    for (std::size_t idx : it->second) {
      const std::string& wire = fabric_.types[type].pips[idx].sink;
      Node sink_node{c, wire};
      if (used_.count(sink_node) || (filter_ && !filter_(c, idx))) continue;
      if (sink_node == sink) {
        hit = Step{node, idx};
        break;
      }
      auto next = fabric_.static_successor(c, wire);
      if (!next || !seen.insert(*next).second) continue;
      parent.emplace(*next, Step{node, idx});
      queue.push_back(*next);
    }
  }
  if (!hit) return std::nullopt;

  std::vector<Pip> pips;
  Node root;
  for (std::optional<Step> step = hit; step;) {
    const Coord c = step->prev.first;
    const auto& def = fabric_.type_at(c).pips[step->pip];
    pips.push_back({sm_tile_name(c), def.source, def.sink});
    used_.emplace(c, def.sink);
    root = step->prev;
    auto p = parent.find(step->prev);
    step = p == parent.end() ? std::nullopt : std::optional<Step>(p->second);
  }
  const auto index = static_cast<std::size_t>(std::find(sources.begin(), sources.end(), root) - sources.begin());
  return std::pair{index, std::move(pips)};
}

Netlist random_design(const Fabric& fabric, std::mt19937_64& rng, const RandomDesignOptions& options,
                      const PipFilter& filter) {
  Netlist n;
  n.design_name = "random";
  n.device_id = fabric.device_id;

  std::vector<Coord> tiles = fabric.coords();
  deterministic_shuffle(tiles, rng);
  tiles.resize(std::min<std::size_t>(tiles.size(), static_cast<std::size_t>(options.slices)));
  std::map<Coord, std::string> at;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    Instance inst;
    inst.name = "s" + std::to_string(i);
    inst.kind = SiteKind::kSlice;
    inst.tile = clb_tile_name(tiles[i]);
    inst.site = site_name(SiteKind::kSlice, tiles[i]);
    const int k = fabric.slice.lut_inputs;
    const std::uint64_t mask = k == 6 ? ~0ull : (1ull << (1u << k)) - 1;
    for (int l = 0; l < fabric.slice.luts; ++l) {
      if (uniform_below(rng, 10) < 3) continue;
      std::uint64_t bits = rng() & mask;
      inst.luts.emplace(l, TruthTable(k, bits ? bits : 1));
    }
    for (int f = 0; f < fabric.slice.ffs; ++f)
      if (static_cast<double>(uniform_below(rng, 1000)) < options.ff_probability * 1000)
        inst.ffs.emplace(f, FfConfig{});
    at[tiles[i]] = inst.name;
    n.instances.push_back(std::move(inst));
  }
  if (tiles.empty()) return n;

  std::vector<std::string> source_pins, sink_pins;
  for (int l = 0; l < fabric.slice.luts; ++l) {
    source_pins.push_back(slice_pin_name({PinRole::kLutOutput, l, 0}));
    for (int i = 0; i < fabric.slice.lut_inputs; ++i)
      sink_pins.push_back(slice_pin_name({PinRole::kLutInput, l, i}));
  }
  for (int f = 0; f < fabric.slice.ffs; ++f) {
    source_pins.push_back(slice_pin_name({PinRole::kFfOutput, f, 0}));
    sink_pins.push_back(slice_pin_name({PinRole::kFfData, f, 0}));
  }

  Router router(fabric, filter);
  std::set<Node> used_drivers, used_sinks;
  for (int k = 0; k < options.nets; ++k) {
    const Coord from = tiles[uniform_below(rng, tiles.size())];
    const std::string& src = source_pins[uniform_below(rng, source_pins.size())];
    if (!used_drivers.emplace(from, src).second) continue;

    std::vector<Coord> near;
    for (Coord t : tiles)
      if (std::abs(t.x - from.x) + std::abs(t.y - from.y) <= options.reach) near.push_back(t);
    const auto fanout = 1 + uniform_below(rng, static_cast<std::uint64_t>(options.max_fanout));
    std::vector<Node> sinks;
    for (std::uint64_t s = 0; s < fanout; ++s) {
      Node pin{near[uniform_below(rng, near.size())], sink_pins[uniform_below(rng, sink_pins.size())]};
      if (used_sinks.count(pin) || std::find(sinks.begin(), sinks.end(), pin) != sinks.end()) continue;
      sinks.push_back(pin);
    }
    if (sinks.empty()) continue;
    auto pips = router.route(from, src, sinks);
    if (!pips) continue;

    Net net;
    net.name = "net" + std::to_string(k);
    net.outpin = PinRef{at[from], src};
    for (const auto& s : sinks) {
      net.inpins.push_back({at[s.first], s.second});
      used_sinks.insert(s);
    }
    net.pips = std::move(*pips);
    n.nets.push_back(std::move(net));
  }
  n.canonicalize();
  return n;
}

}  // namespace bitrev
