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

#include "bitrev/converter.hpp"

#include <algorithm>

namespace bitrev {

namespace {

using Node = std::pair<Coord, std::string>;

std::string bit_label(std::uint32_t bit) {
  return "bit " + std::to_string(bit) + " (byte " + std::to_string(bit / 8) + ")";
}

std::string pip_label(const EncodingDatabase& db, const ConfiguredPip& p) {
  const auto& names = db.type_of(p.tile).pip_names[p.pip];
  return sm_tile_name(db.coord_of(p.tile)) + " " + names.first + " -> " + names.second;
}

}  // namespace

std::string_view Diagnostic::tag() const {
  switch (kind) {
    case Kind::kUnknownBit: return "UNKNOWN_BIT";
    case Kind::kAmbiguousPip: return "AMBIGUOUS_PIP";
    case Kind::kDanglingNet: return "DANGLING_NET";
  }
  return "?";
}

std::size_t HardwareConfiguration::count(Diagnostic::Kind kind) const {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                [&](const Diagnostic& d) { return d.kind == kind; }));
}

std::string converted_instance_name(Coord c) { return site_name(SiteKind::kSlice, c); }

Bitstream normalize(const Bitstream& target, const Bitstream& reference) {
  if (target.device_id != reference.device_id)
    throw ValidationError("target is for device " + target.device_id + ", reference for " +
                          reference.device_id);
  if (target.frames.size() != reference.frames.size())
    throw ValidationError("target and reference frame lengths differ");
  Bitstream out = target;
  for (std::size_t i = 0; i < out.frames.size(); ++i)
    out.frames[i] = static_cast<std::uint8_t>(target.frames[i] & ~reference.frames[i]);
  return out;
}

BitPositions strip_defaults(const Bitstream& target, const Bitstream& reference) {
  return normalize(target, reference).set_positions();
}

std::vector<ConfiguredPip> extract_pips(const BitPositions& bits, const EncodingDatabase& db,
                                        std::vector<Diagnostic>* diagnostics) {
  if (!db.indexed()) throw Error("database index not built");
  const std::uint64_t frame_bits = db.frame_bytes * 8;
  std::vector<bool> set(frame_bits, false), marked(frame_bits, false), explained(frame_bits, false);
  for (auto b : bits) {
    if (b >= frame_bits) throw ValidationError("bit " + std::to_string(b) + " lies outside the database frames");
    set[b] = true;
  }
  auto report = [&](Diagnostic::Kind kind, std::string message) {
    if (diagnostics) diagnostics->push_back({kind, std::move(message)});
  };

  std::vector<ConfiguredPip> out;
  for (auto b : bits) {
    if (marked[b]) continue;
    std::vector<ConfiguredPip> survivors;
    for (const BitOwner& o : db.owners(b)) {
      if (o.kind != BitOwner::Kind::kPip) {
        explained[b] = true;
        continue;
      }
      const auto& pb = db.pip_bits(o.tile, o.element);
      if (std::all_of(pb.begin(), pb.end(), [&](std::uint32_t x) { return set[x]; }))
        survivors.push_back({o.tile, o.element});
    }
    if (survivors.empty()) continue;
    std::size_t best = 0;
    for (const auto& s : survivors) best = std::max(best, db.pip_bits(s.tile, s.pip).size());
    std::vector<ConfiguredPip> top;
    for (const auto& s : survivors)
      if (db.pip_bits(s.tile, s.pip).size() == best) top.push_back(s);
    if (top.size() > 1) {
      std::string names;
      for (const auto& t : top) names += (names.empty() ? "" : ", ") + pip_label(db, t);
      report(Diagnostic::Kind::kAmbiguousPip,
             bit_label(b) + ": " + std::to_string(top.size()) + " candidates with " +
                 std::to_string(best) + " bits each: " + names);
      for (const auto& t : top)
        for (auto x : db.pip_bits(t.tile, t.pip)) marked[x] = explained[x] = true;
      continue;
    }
    for (auto x : db.pip_bits(top[0].tile, top[0].pip)) marked[x] = explained[x] = true;
    out.push_back(top[0]);
  }
  for (auto b : bits)
    if (!explained[b]) {
      // LUT/FF bits are explained by ownership even if no PIP was scanned here.
      bool logic = false;
      for (const BitOwner& o : db.owners(b)) logic |= o.kind != BitOwner::Kind::kPip;
      if (!logic) report(Diagnostic::Kind::kUnknownBit, bit_label(b) + " has no matching object");
    }
  std::sort(out.begin(), out.end());
  return out;
}

void extract_luts_ffs(const BitPositions& bits, const EncodingDatabase& db,
                      std::map<ElementRef, TruthTable>& luts, std::set<ElementRef>& used_ffs) {
  std::vector<bool> set(db.frame_bytes * 8, false);
  for (auto b : bits)
    if (b < set.size()) set[b] = true;
  for (std::uint32_t t = 0; t < db.lut_map.size(); ++t) {
    for (int l = 0; l < static_cast<int>(db.lut_map[t].size()); ++l) {
      const auto& order = db.lut_map[t][l];
      TruthTable table(db.slice.lut_inputs);
      for (std::size_t i = 0; i < order.size(); ++i)
        if (set.at(order[i])) table.set_bit(i, true);
      if (!table.is_zero()) luts[{t, l}] = table;
    }
  }
  for (std::uint32_t t = 0; t < db.ff_map.size(); ++t)
    for (int f = 0; f < static_cast<int>(db.ff_map[t].size()); ++f)
      if (set.at(db.ff_map[t][f])) used_ffs.insert({t, f});
}

std::vector<Net> reconstruct_nets(const std::vector<ConfiguredPip>& pips, const Fabric& fabric,
                                  std::vector<Diagnostic>* diagnostics) {
  std::map<Node, std::vector<std::size_t>> from;
  std::map<Node, std::size_t> driver_of_sink;
  std::set<Node> fed;
  auto def_of = [&](const ConfiguredPip& p) -> const PipDef& {
    return fabric.type_at(fabric.coord_of(p.tile)).pips.at(p.pip);
  };
  for (std::size_t i = 0; i < pips.size(); ++i) {
    const Coord c = fabric.coord_of(pips[i].tile);
    const PipDef& def = def_of(pips[i]);
    if (!driver_of_sink.emplace(Node{c, def.sink}, i).second)
      throw ValidationError("sink " + def.sink + " of " + sm_tile_name(c) + " is driven by two PIPs");
    from[{c, def.source}].push_back(i);
    if (auto next = fabric.static_successor(c, def.sink)) fed.insert(*next);
  }

  std::vector<bool> visited(pips.size(), false);
  std::vector<Net> nets;
  auto grow = [&](const Node& root) {
    Net net;
    auto pin = decode_slice_pin(fabric.slice, root.second);
    if (pin && pin->is_source()) {
      net.name = "n_" + converted_instance_name(root.first) + "_" + root.second;
      net.outpin = PinRef{converted_instance_name(root.first), root.second};
    } else {
      net.name = "dangling_" + sm_tile_name(root.first) + "_" + root.second;
    }
    std::vector<Node> stack{root};
    std::set<Node> seen{root};
    while (!stack.empty()) {
      Node node = stack.back();
      stack.pop_back();
      auto it = from.find(node);
      if (it == from.end()) continue;
      for (std::size_t i : it->second) {
        if (visited[i]) continue;
        visited[i] = true;
        const PipDef& def = def_of(pips[i]);
        net.pips.push_back({sm_tile_name(node.first), def.source, def.sink});
        auto sink_pin = decode_slice_pin(fabric.slice, def.sink);
        if (sink_pin && !sink_pin->is_source()) {
          net.inpins.push_back({converted_instance_name(node.first), def.sink});
        } else if (auto next = fabric.static_successor(node.first, def.sink)) {
          if (seen.insert(*next).second) stack.push_back(*next);
        }
      }
    }
    std::sort(net.pips.begin(), net.pips.end());
    std::sort(net.inpins.begin(), net.inpins.end());
    if (!net.outpin && diagnostics)
      diagnostics->push_back({Diagnostic::Kind::kDanglingNet,
                              net.name + ": " + std::to_string(net.pips.size()) + " PIPs, " +
                                  std::to_string(net.inpins.size()) + " sink pins, no driver"});
    nets.push_back(std::move(net));
  };

  for (const auto& [node, list] : from)
    if (!fed.count(node)) grow(node);
  // Whatever is left sits on a cycle with no entry point.
  for (std::size_t i = 0; i < pips.size(); ++i)
    if (!visited[i]) grow({fabric.coord_of(pips[i].tile), def_of(pips[i]).source});
  return nets;
}

Conversion convert(const Bitstream& target, const Bitstream& reference, const EncodingDatabase& db) {
  if (target.device_id != db.device_id)
    throw ValidationError("bitstream is for device " + target.device_id + ", database for " +
                          db.device_id);
  if (target.frames.size() != db.frame_bytes)
    throw ValidationError("bitstream frame length does not match the database");
  Conversion result;
  HardwareConfiguration& hw = result.hardware;
  const BitPositions bits = strip_defaults(target, reference);
  hw.pips = extract_pips(bits, db, &hw.diagnostics);
  extract_luts_ffs(bits, db, hw.luts, hw.used_ffs);
  const Fabric fabric = db.public_fabric();
  hw.nets = reconstruct_nets(hw.pips, fabric, &hw.diagnostics);

  Netlist& n = result.netlist;
  n.design_name = "converted";
  n.device_id = db.device_id;
  std::map<std::uint32_t, Instance> instances;
  auto instance_at = [&](std::uint32_t tile) -> Instance& {
    auto it = instances.find(tile);
    if (it != instances.end()) return it->second;
    const Coord c = db.coord_of(tile);
    Instance inst;
    inst.name = converted_instance_name(c);
    inst.kind = SiteKind::kSlice;
    inst.tile = clb_tile_name(c);
    inst.site = site_name(SiteKind::kSlice, c);
    return instances.emplace(tile, std::move(inst)).first->second;
  };
  for (const auto& [ref, table] : hw.luts) instance_at(ref.first).luts[ref.second] = table;
  for (const auto& ref : hw.used_ffs) instance_at(ref.first).ffs[ref.second] = FfConfig{};
  for (const auto& net : hw.nets) {
    auto touch = [&](const PinRef& p) {
      auto site = parse_site(p.instance);
      instance_at(static_cast<std::uint32_t>(db.index_of(site->second)));
    };
    if (net.outpin) touch(*net.outpin);
    for (const auto& p : net.inpins) touch(p);
  }
  for (auto& [tile, inst] : instances) n.instances.push_back(std::move(inst));
  n.nets = hw.nets;
  n.canonicalize();
  return result;
}

}  // namespace bitrev
