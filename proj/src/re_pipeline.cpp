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

#include "bitrev/re_pipeline.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <tuple>

#include "bitrev/parallel.hpp"

namespace bitrev {

namespace {

constexpr Coord kTemplateTile{0, 0};

void log(const ReverseOptions& options, const std::string& line) {
  if (options.log) options.log(line);
}

Instance slice_probe(Coord c) {
  Instance inst;
  inst.name = "probe";
  inst.kind = SiteKind::kSlice;
  inst.tile = clb_tile_name(c);
  inst.site = site_name(SiteKind::kSlice, c);
  return inst;
}

std::uint32_t single_toggle(const Bitstream& a, const Bitstream& b, const std::string& what) {
  auto d = diff_bitstreams(a, b);
  if (d.size() != 1)
    throw Error(what + " toggled " + std::to_string(d.size()) + " bits, expected exactly 1");
  return d.front();
}

}  // namespace

Netlist make_reference_template(const Fabric& fabric) {
  Netlist n;
  n.design_name = "pip_template";
  n.device_id = fabric.device_id;
  Instance pad;
  pad.name = "q";
  pad.kind = SiteKind::kIob;
  pad.tile = clb_tile_name(kTemplateTile);
  pad.site = site_name(SiteKind::kIob, kTemplateTile);
  Instance buf;
  buf.name = "q_OBUF";
  buf.kind = SiteKind::kBlackbox;
  buf.tile = clb_tile_name(kTemplateTile);
  buf.site = site_name(SiteKind::kBlackbox, kTemplateTile);
  n.instances = {std::move(pad), std::move(buf)};
  return n;
}

Netlist make_pip_template(const Fabric& fabric, Coord sm, const std::string& source,
                          const std::string& sink) {
  if (!fabric.contains(sm)) throw ValidationError("switch matrix outside the grid");
  auto report = fabric_report(fabric, sm);
  if (std::find(report.begin(), report.end(), std::pair{source, sink}) == report.end())
    throw ValidationError(sm_tile_name(sm) + " reports no PIP " + source + " -> " + sink);
  Netlist n = make_reference_template(fabric);
  Net net;
  net.name = "q_OBUF";
  net.outpin = PinRef{"q_OBUF", "OQ"};
  net.inpins = {PinRef{"q", "O"}};
  net.pips = {Pip{sm_tile_name(sm), source, sink}};
  n.nets.push_back(std::move(net));
  return n;
}

std::vector<std::uint32_t> SwitchMatrixResult::defaults() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < positions.size(); ++i)
    if (positions[i].empty()) out.push_back(i);
  return out;
}

SwitchMatrixResult reverse_switch_matrix(const BitstreamGenerator& toolchain, const Fabric& fabric,
                                         Coord sm, const Bitstream& reference) {
  SwitchMatrixResult result{sm, {}};
  for (const auto& [source, sink] : fabric_report(fabric, sm)) {
    Bitstream bs = toolchain.bitgen(make_pip_template(fabric, sm, source, sink), true);
    result.positions.push_back(diff_bitstreams(reference, bs));
  }
  return result;
}

TypeTable build_distance_table(const SwitchMatrixType& type, const SwitchMatrixResult& result) {
  if (result.positions.size() != type.pips.size())
    throw Error("switch-matrix result does not cover its type");
  std::optional<std::uint32_t> ref;
  for (std::uint32_t i = 0; i < type.pips.size(); ++i) {
    if (result.positions[i].empty()) continue;
    if (!ref || std::tie(type.pips[i].source, type.pips[i].sink) <
                    std::tie(type.pips[*ref].source, type.pips[*ref].sink))
      ref = i;
  }
  if (!ref) throw Error("every PIP of " + sm_tile_name(result.sm) + " is a default PIP");

  TypeTable table;
  for (const auto& def : type.pips) table.pip_names.emplace_back(def.source, def.sink);
  table.reference_pip = *ref;
  table.defaults = result.defaults();
  const BitPositions& base = result.positions[*ref];
  table.distances.resize(type.pips.size());
  for (std::size_t p = 0; p < type.pips.size(); ++p) {
    const BitPositions& pos = result.positions[p];
    for (std::size_t i = 0; i < pos.size(); ++i)
      table.distances[p].push_back(static_cast<std::int64_t>(pos[i]) -
                                   static_cast<std::int64_t>(base[std::min(i, base.size() - 1)]));
  }
  return table;
}

std::uint64_t analytic_routing_invocations(const std::vector<std::uint64_t>& pips_per_type,
                                           std::uint64_t switch_matrices) {
  std::uint64_t sum = 0;
  for (auto p : pips_per_type) sum += p;
  const std::uint64_t types = pips_per_type.size();
  return sum + (switch_matrices - types) + types;
}

std::uint64_t naive_routing_invocations(const Fabric& fabric) {
  std::uint64_t n = 0;
  for (Coord c : fabric.coords()) n += fabric.type_at(c).pips.size();
  return n;
}

void reverse_fabric_routing(const BitstreamGenerator& toolchain, const Fabric& fabric,
                            const ReverseOptions& options, EncodingDatabase& db,
                            InvocationCounts& counts) {
  const Netlist reference_design = make_reference_template(fabric);

  // Representative switch matrix: first of each type in canonical order.
  std::map<std::uint32_t, Coord> representative;
  for (Coord c : fabric.coords()) representative.emplace(fabric.placement[fabric.index_of(c)], c);
  for (std::uint32_t t = 0; t < fabric.types.size(); ++t)
    if (!representative.count(t)) throw Error("switch-matrix type " + std::to_string(t) + " is never placed");

  // Enumeration: one task per (type, PIP); task 0 of each type also builds
  // that type's reference bitstream.
  struct EnumTask {
    std::uint32_t type;
    std::size_t pip;  // SIZE_MAX: the reference bitstream
  };
  std::vector<EnumTask> tasks;
  for (std::uint32_t t = 0; t < fabric.types.size(); ++t) {
    tasks.push_back({t, SIZE_MAX});
    for (std::size_t p = 0; p < fabric.types[t].pips.size(); ++p) tasks.push_back({t, p});
  }
  log(options, "enumerating " + std::to_string(fabric.types.size()) + " representative switch matrices");
  auto bitstreams = parallel_map(tasks.size(), options.jobs, [&](std::size_t i) {
    const auto& task = tasks[i];
    if (task.pip == SIZE_MAX) return toolchain.bitgen(reference_design, true);
    const Coord sm = representative.at(task.type);
    const auto& def = fabric.types[task.type].pips[task.pip];
    return toolchain.bitgen(make_pip_template(fabric, sm, def.source, def.sink), true);
  });

  std::vector<Bitstream> references(fabric.types.size());
  std::vector<SwitchMatrixResult> results(fabric.types.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& task = tasks[i];
    if (task.pip == SIZE_MAX) {
      references[task.type] = std::move(bitstreams[i]);
      results[task.type].sm = representative.at(task.type);
      ++counts.references;
    } else {
      results[task.type].positions.push_back(diff_bitstreams(references[task.type], bitstreams[i]));
      ++counts.enumeration;
    }
  }
  bitstreams.clear();

  db = EncodingDatabase{};
  db.device_id = fabric.device_id;
  db.width = fabric.width;
  db.height = fabric.height;
  db.slice = fabric.slice;
  db.tracks = fabric.tracks;
  db.placement = fabric.placement;
  db.frame_bytes = references.empty() ? 0 : references.front().frames.size();
  for (std::uint32_t t = 0; t < fabric.types.size(); ++t) {
    db.types.push_back(build_distance_table(fabric.types[t], results[t]));
    log(options, "type " + std::to_string(t) + ": " + std::to_string(db.types.back().defaults.size()) +
                     " default PIPs, reference " +
                     fabric.types[t].pips[db.types.back().reference_pip].source + " -> " +
                     fabric.types[t].pips[db.types.back().reference_pip].sink);
  }

  // Extrapolation: one reference-PIP bitstream per remaining switch matrix.
  std::vector<Coord> others;
  for (Coord c : fabric.coords())
    if (representative[fabric.placement[fabric.index_of(c)]] != c) others.push_back(c);
  log(options, "extrapolating " + std::to_string(others.size()) + " switch matrices");
  auto observed = parallel_map(others.size(), options.jobs, [&](std::size_t i) {
    const Coord sm = others[i];
    const std::uint32_t t = fabric.placement[fabric.index_of(sm)];
    const auto& def = fabric.types[t].pips[db.types[t].reference_pip];
    return diff_bitstreams(references[t],
                           toolchain.bitgen(make_pip_template(fabric, sm, def.source, def.sink), true));
  });

  db.reference_positions.assign(fabric.sm_count(), {});
  for (std::uint32_t t = 0; t < fabric.types.size(); ++t) {
    const Coord sm = representative.at(t);
    db.reference_positions[fabric.index_of(sm)] = results[t].positions[db.types[t].reference_pip];
  }
  for (std::size_t i = 0; i < others.size(); ++i) {
    const Coord sm = others[i];
    const std::uint32_t t = fabric.placement[fabric.index_of(sm)];
    const std::size_t expected = db.types[t].distances[db.types[t].reference_pip].size();
    if (observed[i].size() != expected)
      throw Error("reference PIP at " + sm_tile_name(sm) + " toggled " +
                  std::to_string(observed[i].size()) + " bits, expected " + std::to_string(expected));
    db.reference_positions[fabric.index_of(sm)] = std::move(observed[i]);
    ++counts.extrapolation;
  }
}

void reverse_luts_ffs(const BitstreamGenerator& toolchain, const Fabric& fabric,
                      const ReverseOptions& options, EncodingDatabase& db, InvocationCounts& counts) {
  const SliceShape shape = fabric.slice;
  const std::vector<Coord> tiles = fabric.coords();
  struct TileResult {
    std::vector<BitPositions> luts;
    std::vector<std::uint32_t> ffs;
    std::uint64_t calls = 0;
  };
  log(options, "reversing LUT and FF bits of " + std::to_string(tiles.size()) + " slices");
  auto results = parallel_map(tiles.size(), options.jobs, [&](std::size_t i) {
    const Coord c = tiles[i];
    TileResult r;
    Netlist design;
    design.design_name = "logic_template";
    design.device_id = fabric.device_id;
    design.instances = {slice_probe(c)};
    const Bitstream baseline = toolchain.bitgen(design, true);
    ++r.calls;
    for (int l = 0; l < shape.luts; ++l) {
      BitPositions order;
      for (int e = 0; e < shape.lut_bits(); ++e) {
        design.instances[0].luts = {{l, TruthTable(shape.lut_inputs, 1ull << e)}};
        order.push_back(single_toggle(baseline, toolchain.bitgen(design, true),
                                      site_name(SiteKind::kSlice, c) + " LUT" + std::to_string(l) +
                                          " entry " + std::to_string(e)));
        ++r.calls;
      }
      r.luts.push_back(std::move(order));
    }
    design.instances[0].luts.clear();
    for (int f = 0; f < shape.ffs; ++f) {
      design.instances[0].ffs = {{f, FfConfig{}}};
      r.ffs.push_back(single_toggle(baseline, toolchain.bitgen(design, true),
                                    site_name(SiteKind::kSlice, c) + " FF" + std::to_string(f)));
      ++r.calls;
    }
    return r;
  });

  db.lut_map.assign(fabric.sm_count(), {});
  db.ff_map.assign(fabric.sm_count(), {});
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const std::size_t idx = fabric.index_of(tiles[i]);
    db.lut_map[idx] = std::move(results[i].luts);
    db.ff_map[idx] = std::move(results[i].ffs);
    counts.logic += results[i].calls;
  }
}

EncodingDatabase reverse_fabric(const BitstreamGenerator& toolchain, const Fabric& fabric,
                                const ReverseOptions& options, InvocationCounts* counts) {
  InvocationCounts local;
  InvocationCounts& c = counts ? *counts : local;
  EncodingDatabase db;
  reverse_fabric_routing(toolchain, fabric, options, db, c);
  if (options.logic) reverse_luts_ffs(toolchain, fabric, options, db, c);
  db.build_index();
  return db;
}

}  // namespace bitrev
