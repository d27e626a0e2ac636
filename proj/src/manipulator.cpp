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

#include "bitrev/manipulator.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

namespace bitrev {

namespace {

void check_device(const Bitstream& bs, const EncodingDatabase& db) {
  if (bs.device_id != db.device_id || bs.frames.size() != db.frame_bytes)
    throw ValidationError("bitstream does not match the database device");
}

bool all_set(const Bitstream& bs, const BitPositions& bits) {
  return !bits.empty() && std::all_of(bits.begin(), bits.end(), [&](auto b) { return bs.bit(b); });
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (std::size_t pos = 0;;) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

}  // namespace

bool pip_configured(const Bitstream& bs, const EncodingDatabase& db, Coord sm, std::uint32_t pip) {
  const std::size_t tile = db.index_of(sm);
  if (db.is_default(tile, pip)) return false;
  return all_set(bs, db.pip_bits(tile, pip));
}

std::optional<std::uint32_t> configured_pip_on_sink(const Bitstream& bs, const EncodingDatabase& db,
                                                    Coord sm, std::string_view sink) {
  const std::size_t tile = db.index_of(sm);
  const auto& names = db.type_of(tile).pip_names;
  std::optional<std::uint32_t> best;
  std::size_t best_weight = 0;
  for (std::uint32_t p = 0; p < names.size(); ++p) {
    if (names[p].second != sink || db.is_default(tile, p)) continue;
    const auto& bits = db.pip_bits(tile, p);
    if (all_set(bs, bits) && bits.size() > best_weight) {
      best = p;
      best_weight = bits.size();
    }
  }
  return best;
}

std::uint32_t resolve_pip(const EncodingDatabase& db, Coord sm, std::string_view source,
                          std::string_view sink) {
  auto pip = db.find_pip(db.index_of(sm), source, sink);
  if (!pip)
    throw ValidationError(sm_tile_name(sm) + " has no PIP " + std::string(source) + " -> " +
                          std::string(sink));
  return *pip;
}

Bitstream set_pip(const Bitstream& bs, const EncodingDatabase& db, Coord sm, std::uint32_t pip) {
  check_device(bs, db);
  const std::size_t tile = db.index_of(sm);
  const auto& names = db.type_of(tile).pip_names;
  if (pip >= names.size()) throw ValidationError("unknown PIP index " + std::to_string(pip));
  if (db.is_default(tile, pip))
    throw ValidationError(sm_tile_name(sm) + " " + names[pip].first + " -> " + names[pip].second +
                          " is a default PIP with no configuration bits");
  Bitstream out = bs;
  const auto& bits = db.pip_bits(tile, pip);
  if (auto current = configured_pip_on_sink(bs, db, sm, names[pip].second); current && *current != pip)
    for (auto b : db.pip_bits(tile, *current))
      if (!std::binary_search(bits.begin(), bits.end(), b)) out.set_bit(b, false);
  for (auto b : bits) out.set_bit(b, true);
  return out;
}

Bitstream unset_pip(const Bitstream& bs, const EncodingDatabase& db, Coord sm, std::uint32_t pip) {
  check_device(bs, db);
  const std::size_t tile = db.index_of(sm);
  const auto& names = db.type_of(tile).pip_names;
  if (pip >= names.size()) throw ValidationError("unknown PIP index " + std::to_string(pip));
  if (!pip_configured(bs, db, sm, pip))
    throw ValidationError(sm_tile_name(sm) + " " + names[pip].first + " -> " + names[pip].second +
                          " is not configured");
  // Keep bits that another configured PIP also needs.
  std::vector<std::uint32_t> keep;
  for (auto b : db.pip_bits(tile, pip))
    for (const BitOwner& o : db.owners(b)) {
      if (o.kind == BitOwner::Kind::kPip && !(o.tile == tile && o.element == pip) &&
          all_set(bs, db.pip_bits(o.tile, o.element)) &&
          configured_pip_on_sink(bs, db, db.coord_of(o.tile),
                                 db.type_of(o.tile).pip_names[o.element].second) == o.element &&
          !(o.tile == tile && db.type_of(tile).pip_names[o.element].second == names[pip].second)) {
        keep.push_back(b);
        break;
      }
    }
  Bitstream out = bs;
  for (auto b : db.pip_bits(tile, pip))
    if (std::find(keep.begin(), keep.end(), b) == keep.end()) out.set_bit(b, false);
  return out;
}

Bitstream rewrite_lut(const Bitstream& bs, const EncodingDatabase& db, Coord tile, int lut,
                      const TruthTable& table) {
  check_device(bs, db);
  const std::size_t idx = db.index_of(tile);
  if (idx >= db.lut_map.size() || lut < 0 || lut >= static_cast<int>(db.lut_map[idx].size()))
    throw ValidationError("no LUT" + std::to_string(lut) + " recorded for " + clb_tile_name(tile));
  const auto& order = db.lut_map[idx][lut];
  if (table.size() != order.size())
    throw ValidationError("LUT" + std::to_string(lut) + " has " + std::to_string(order.size()) +
                          " entries, table has arity " + std::to_string(table.arity()));
  Bitstream out = bs;
  for (std::size_t i = 0; i < order.size(); ++i) out.set_bit(order[i], table.bit(i));
  return out;
}

PipAddress parse_pip_address(std::string_view text) {
  auto colon = text.find(':');
  auto arrow = text.find("->");
  if (colon == std::string_view::npos || arrow == std::string_view::npos || arrow < colon)
    throw ValidationError("expected TILE:SRC->SINK, got '" + std::string(text) + "'");
  auto sm = parse_sm_tile(text.substr(0, colon));
  if (!sm) throw ValidationError("unknown switch-matrix tile in '" + std::string(text) + "'");
  return {*sm, std::string(text.substr(colon + 1, arrow - colon - 1)),
          std::string(text.substr(arrow + 2))};
}

LutAddress parse_lut_address(std::string_view text) {
  auto parts = split(text, ':');
  if (parts.size() == 3) parts.insert(parts.begin() + 1, std::string_view{});
  if (parts.size() != 4 || parts[2].substr(0, 3) != "LUT")
    throw ValidationError("expected TILE:SLICE:LUTn:hex, got '" + std::string(text) + "'");
  LutAddress out;
  auto tile = parse_clb_tile(parts[0]);
  if (!tile) throw ValidationError("unknown tile '" + std::string(parts[0]) + "'");
  out.tile = *tile;
  if (!parts[1].empty()) {
    auto site = parse_site(parts[1]);
    if (!site || site->first != SiteKind::kSlice || !(site->second == *tile))
      throw ValidationError("site '" + std::string(parts[1]) + "' is not the slice of " +
                            std::string(parts[0]));
  }
  auto digits = parts[2].substr(3);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out.lut);
  if (ec != std::errc() || p != digits.data() + digits.size() || digits.empty())
    throw ValidationError("bad LUT index in '" + std::string(text) + "'");
  out.table = TruthTable::from_hex(parts[3]);
  return out;
}

}  // namespace bitrev
