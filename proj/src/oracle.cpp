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

#include "bitrev/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bitrev/mock_toolchain.hpp"

namespace bitrev {

DatabaseAudit audit_database(const EncodingDatabase& db, const GroundTruth& truth) {
  DatabaseAudit a;
  const Fabric& f = truth.fabric;
  auto note = [&](const std::string& what) {
    if (a.first_error.empty()) a.first_error = what;
  };
  if (db.width != f.width || db.height != f.height || db.tile_count() != f.sm_count()) {
    note("grid size differs");
    ++a.pip_mismatches;
    return a;
  }
  for (Coord c : f.coords()) {
    const std::size_t tile = f.index_of(c);
    const auto& type = f.type_at(c);
    for (std::uint32_t p = 0; p < type.pips.size(); ++p) {
      const BitPositions want = truth.encoding.pip_bits(f, c, p);
      const bool want_default = want.empty();
      if (want_default != db.is_default(tile, p)) {
        ++a.default_mismatches;
        note(sm_tile_name(c) + " PIP " + std::to_string(p) + " default flag differs");
        continue;
      }
      if (want_default) continue;
      ++a.pips_checked;
      if (db.pip_bits(tile, p) != want) {
        ++a.pip_mismatches;
        note(sm_tile_name(c) + " PIP " + std::to_string(p) + " positions differ");
      }
    }
    for (int l = 0; l < f.slice.luts; ++l) {
      ++a.luts_checked;
      if (tile >= db.lut_map.size() || db.lut_map[tile].size() <= static_cast<std::size_t>(l) ||
          db.lut_map[tile][l] != truth.encoding.lut_bits(c, l)) {
        ++a.lut_mismatches;
        note(clb_tile_name(c) + " LUT " + std::to_string(l) + " order differs");
      }
    }
    for (int ff = 0; ff < f.slice.ffs; ++ff) {
      ++a.ffs_checked;
      if (tile >= db.ff_map.size() || db.ff_map[tile].size() <= static_cast<std::size_t>(ff) ||
          db.ff_map[tile][ff] != truth.encoding.ff_bit(c, ff)) {
        ++a.ff_mismatches;
        note(clb_tile_name(c) + " FF " + std::to_string(ff) + " bit differs");
      }
    }
  }
  return a;
}

RoundTripAudit audit_round_trip(const Netlist& netlist, const Fabric& fabric, const HardwareConfiguration& hw) {
  RoundTripAudit a;
  std::set<ConfiguredPip> want_pips;
  std::map<ElementRef, TruthTable> want_luts;
  std::set<ElementRef> want_ffs;
  for (const auto& net : netlist.nets) {
    if (!net_is_encoded(net)) continue;
    for (const auto& pip : net.pips) {
      auto c = parse_sm_tile(pip.tile);
      auto idx = c ? fabric.type_at(*c).find(pip.source, pip.sink) : std::nullopt;
      if (!idx) throw ValidationError("net \"" + net.name + "\" uses an unknown PIP");
      if (fabric.type_at(*c).pips[*idx].is_default) continue;
      want_pips.insert({static_cast<std::uint32_t>(fabric.index_of(*c)), static_cast<std::uint32_t>(*idx)});
    }
  }
  for (const auto& inst : netlist.instances) {
    if (inst.kind != SiteKind::kSlice) continue;
    auto site = parse_site(inst.site);
    const auto tile = static_cast<std::uint32_t>(fabric.index_of(site->second));
    for (const auto& [l, table] : inst.luts)
      if (!table.is_zero()) want_luts[{tile, l}] = table;
    for (const auto& [ff, cfg] : inst.ffs)
      if (cfg.used) want_ffs.insert({tile, ff});
  }
  const std::set<ConfiguredPip> got(hw.pips.begin(), hw.pips.end());
  a.pips_match = got == want_pips;
  a.luts_match = hw.luts == want_luts;
  a.ffs_match = hw.used_ffs == want_ffs;
  a.unknown_bits = hw.count(Diagnostic::Kind::kUnknownBit);
  a.ambiguous_pips = hw.count(Diagnostic::Kind::kAmbiguousPip);
  if (!a.pips_match)
    a.first_error = "PIP sets differ (" + std::to_string(got.size()) + " recovered, " +
                    std::to_string(want_pips.size()) + " expected)";
  else if (!a.luts_match)
    a.first_error = "LUT tables differ";
  else if (!a.ffs_match)
    a.first_error = "FF usage differs";
  else if (!hw.diagnostics.empty())
    a.first_error = hw.diagnostics.front().to_string();
  return a;
}

}  // namespace bitrev
