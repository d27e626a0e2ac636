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

#include <gtest/gtest.h>

#include <random>

#include "bitrev/converter.hpp"
#include "bitrev/manipulator.hpp"
#include "fixtures.hpp"

namespace bitrev {
namespace {

using testing::desk;

Bitstream random_target(std::uint64_t seed) {
  const auto& r = desk();
  std::mt19937_64 rng(seed);
  return r.toolchain.bitgen(random_design(r.fabric, rng, {}, r.non_default()), false);
}

// A non-default PIP at `sm` whose sink nothing drives in `bs`.
std::optional<std::uint32_t> free_pip(const Bitstream& bs, Coord sm, std::mt19937_64& rng) {
  const auto& db = desk().db;
  const std::size_t tile = db.index_of(sm);
  const auto& names = db.type_of(tile).pip_names;
  for (int attempt = 0; attempt < 50; ++attempt) {
    const auto p = static_cast<std::uint32_t>(uniform_below(rng, names.size()));
    if (db.is_default(tile, p) || configured_pip_on_sink(bs, db, sm, names[p].second)) continue;
    return p;
  }
  return std::nullopt;
}

TEST(Manipulator, SetThenUnsetRestoresTarget) {
  const auto& db = desk().db;
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const Bitstream bs = random_target(100 + i);
    const Coord sm{static_cast<int>(uniform_below(rng, 6)), static_cast<int>(uniform_below(rng, 6))};
    auto p = free_pip(bs, sm, rng);
    if (!p) continue;
    const Bitstream with = set_pip(bs, db, sm, *p);
    EXPECT_TRUE(pip_configured(with, db, sm, *p));
    EXPECT_EQ(unset_pip(with, db, sm, *p), bs) << i;
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(Manipulator, UnsetThenSetRestoresTarget) {
  const auto& db = desk().db;
  for (int i = 0; i < 20; ++i) {
    const Bitstream bs = random_target(200 + i);
    const auto hw = convert(bs, desk().reference(), db).hardware;
    ASSERT_FALSE(hw.pips.empty());
    const ConfiguredPip& p = hw.pips[static_cast<std::size_t>(i) % hw.pips.size()];
    const Coord sm = db.coord_of(p.tile);
    const Bitstream without = unset_pip(bs, db, sm, p.pip);
    EXPECT_FALSE(pip_configured(without, db, sm, p.pip));
    EXPECT_EQ(set_pip(without, db, sm, p.pip), bs) << i;
  }
}

TEST(Manipulator, SettingASinkReplacesItsDriver) {
  const auto& db = desk().db;
  const Coord sm{2, 3};
  const std::size_t tile = db.index_of(sm);
  const auto& names = db.type_of(tile).pip_names;
  std::map<std::string, std::vector<std::uint32_t>> by_sink;
  for (std::uint32_t p = 0; p < names.size(); ++p)
    if (!db.is_default(tile, p)) by_sink[names[p].second].push_back(p);
  int checked = 0;
  for (const auto& [sink, pips] : by_sink) {
    if (pips.size() < 2) continue;
    Bitstream bs = Bitstream::blank(db.device_id, db.frame_bytes);
    bs = set_pip(bs, db, sm, pips[0]);
    bs = set_pip(bs, db, sm, pips[1]);
    EXPECT_EQ(configured_pip_on_sink(bs, db, sm, sink), pips[1]) << sink;
    const auto hw = convert(bs, desk().reference(), db).hardware;
    ASSERT_EQ(hw.pips.size(), 1u) << sink;
    EXPECT_EQ(hw.pips[0].pip, pips[1]);
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(Manipulator, RewriteLutChangesOnlyThatLut) {
  const auto& db = desk().db;
  const Bitstream bs = random_target(31);
  const Coord tile{4, 1};
  const TruthTable table = TruthTable::from_hex("6996");
  const Bitstream out = rewrite_lut(bs, db, tile, 2, table);
  const auto& order = db.lut_map[db.index_of(tile)][2];
  for (auto b : diff_bitstreams(bs, out)) EXPECT_NE(std::find(order.begin(), order.end(), b), order.end());
  const auto hw = convert(out, desk().reference(), db).hardware;
  EXPECT_EQ(hw.luts.at({static_cast<std::uint32_t>(db.index_of(tile)), 2}), table);
  EXPECT_THROW(rewrite_lut(bs, db, tile, 2, TruthTable::from_hex("E")), ValidationError);
  EXPECT_THROW(rewrite_lut(bs, db, tile, 4, table), ValidationError);
}

TEST(Manipulator, Errors) {
  const auto& db = desk().db;
  const Bitstream blank = Bitstream::blank(db.device_id, db.frame_bytes);
  const Coord sm{1, 1};
  const std::size_t tile = db.index_of(sm);
  EXPECT_THROW(unset_pip(blank, db, sm, 0), ValidationError);
  EXPECT_THROW(set_pip(Bitstream::blank("x", db.frame_bytes), db, sm, 0), ValidationError);
  EXPECT_THROW(set_pip(blank, db, sm, 10000), ValidationError);
  const auto& defaults = db.type_of(tile).defaults;
  if (!defaults.empty()) {
    EXPECT_THROW(set_pip(blank, db, sm, defaults[0]), ValidationError);
  }
  EXPECT_THROW(resolve_pip(db, sm, "A", "A"), ValidationError);
  const auto& [src, sink] = db.type_of(tile).pip_names[5];
  EXPECT_EQ(resolve_pip(db, sm, src, sink), 5u);
}

TEST(Addresses, PipAddress) {
  const PipAddress a = parse_pip_address("INT_X3Y4:AQ->E0");
  EXPECT_EQ(a.sm, (Coord{3, 4}));
  EXPECT_EQ(a.source, "AQ");
  EXPECT_EQ(a.sink, "E0");
  EXPECT_THROW(parse_pip_address("INT_X3Y4 AQ->E0"), ValidationError);
  EXPECT_THROW(parse_pip_address("CLB_X3Y4:AQ->E0"), ValidationError);
  EXPECT_THROW(parse_pip_address("INT_X3Y4:AQ"), ValidationError);
}

TEST(Addresses, LutAddress) {
  const LutAddress a = parse_lut_address("CLB_X3Y4:SLICE_X3Y4:LUT2:6996");
  EXPECT_EQ(a.tile, (Coord{3, 4}));
  EXPECT_EQ(a.lut, 2);
  EXPECT_EQ(a.table.to_hex(), "6996");
  EXPECT_EQ(parse_lut_address("CLB_X1Y0:LUT0:8000").table.bits(), 0x8000u);
  EXPECT_THROW(parse_lut_address("CLB_X3Y4:SLICE_X3Y5:LUT2:6996"), ValidationError);
  EXPECT_THROW(parse_lut_address("CLB_X3Y4:FF2:6996"), ValidationError);
  EXPECT_THROW(parse_lut_address("CLB_X3Y4:LUTx:6996"), ValidationError);
  EXPECT_THROW(parse_lut_address("CLB_X3Y4:LUT1:699"), ValidationError);
}

}  // namespace
}  // namespace bitrev
