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

#include <algorithm>
#include <set>

#include "bitrev/fabric.hpp"
#include "bitrev/ground_truth.hpp"
#include "fixtures.hpp"

namespace bitrev {
namespace {

const GroundTruth& desk_truth() {
  static const GroundTruth t = generate_fabric(FabricSpec::desk());
  return t;
}

TEST(Fabric, DeskShape) {
  const Fabric& f = desk_truth().fabric;
  EXPECT_EQ(f.device_id, "syn16x16");
  EXPECT_EQ(f.sm_count(), 256u);
  ASSERT_EQ(f.types.size(), 2u);
  for (const auto& type : f.types) {
    EXPECT_EQ(type.pips.size(), 200u);
    EXPECT_EQ(type.sinks.size(), 36u);
    const auto defaults = std::count_if(type.pips.begin(), type.pips.end(),
                                        [](const PipDef& p) { return p.is_default; });
    EXPECT_EQ(defaults, 2);
  }
  for (std::uint32_t t = 0; t < 2; ++t)
    EXPECT_GT(std::count(f.placement.begin(), f.placement.end(), t), 0) << t;
}

TEST(Fabric, GenerationIsDeterministic) {
  const auto a = generate_fabric(testing::small_spec(11));
  const auto b = generate_fabric(testing::small_spec(11));
  const auto c = generate_fabric(testing::small_spec(12));
  EXPECT_EQ(ground_truth_to_text(a), ground_truth_to_text(b));
  EXPECT_NE(ground_truth_to_text(a), ground_truth_to_text(c));
}

TEST(Fabric, NoUTurnsAndNoDuplicatePips) {
  const Fabric& f = desk_truth().fabric;
  for (const auto& type : f.types) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& p : type.pips) {
      EXPECT_TRUE(seen.emplace(p.source, p.sink).second) << p.source << "->" << p.sink;
      EXPECT_FALSE(p.source == p.sink && decode_track(p.source, f.tracks)) << p.source;
    }
  }
}

// Within one sink, configured PIPs have distinct bit sets and share a pool
// no other sink touches; all bits stay inside the switch-matrix budget.
TEST(GroundTruth, EncodingInvariants) {
  const auto& truth = desk_truth();
  for (std::size_t t = 0; t < truth.fabric.types.size(); ++t) {
    const auto& type = truth.fabric.types[t];
    const auto& local = truth.encoding.pip_local[t];
    std::map<std::uint32_t, std::string> owner_sink;
    for (const auto& [sink, sources] : type.sinks) {
      std::set<std::vector<std::uint32_t>> sets;
      for (auto i : type.pips_on_sink(sink)) {
        const auto& bits = local[i];
        EXPECT_EQ(bits.empty(), type.pips[i].is_default);
        if (bits.empty()) continue;
        EXPECT_TRUE(sets.insert(bits).second) << sink;
        EXPECT_TRUE(std::is_sorted(bits.begin(), bits.end()));
        for (auto b : bits) {
          EXPECT_LT(b, 256u);
          auto [it, fresh] = owner_sink.emplace(b, sink);
          EXPECT_EQ(it->second, sink) << "bit " << b << " shared across sinks";
        }
      }
    }
  }
}

TEST(GroundTruth, SliceBitsAreDisjointFromRouting) {
  const auto& enc = desk_truth().encoding;
  std::set<std::uint32_t> seen;
  for (const auto& lut : enc.lut_local) {
    EXPECT_EQ(lut.size(), 16u);
    for (auto b : lut) EXPECT_TRUE(seen.insert(b).second);
  }
  for (auto b : enc.ff_local) EXPECT_TRUE(seen.insert(b).second);
  EXPECT_TRUE(seen.insert(enc.iob_local).second);
  EXPECT_GE(*seen.begin(), 256u);
  EXPECT_LT(*seen.rbegin(), enc.geometry.tile_bits());
}

TEST(GroundTruth, PositionsAreTranslationsOfLocalBits) {
  const auto& truth = desk_truth();
  const auto& g = truth.encoding.geometry;
  EXPECT_EQ(g.absolute({0, 0}, 5), 5u);
  EXPECT_EQ(g.absolute({0, 1}, 5), g.row_bits + 5);
  EXPECT_EQ(g.absolute({0, 0}, g.row_bits), g.frame_bits());
  EXPECT_EQ(g.absolute({1, 0}, 0), g.frame_bits() * g.frames_per_column);
  EXPECT_EQ(g.frame_bytes() * 8, static_cast<std::size_t>(g.tile_bits()) * 256);
}

TEST(GroundTruth, RejectsImpossibleSpecs) {
  FabricSpec spec = testing::small_spec();
  spec.sm_types = {{200, 36, 7}};
  EXPECT_THROW(generate_fabric(spec), ValidationError);
  spec.sm_types = {{10, 36, 256}};
  EXPECT_THROW(generate_fabric(spec), ValidationError);
  spec = testing::small_spec();
  spec.default_fraction = 1.0;
  EXPECT_THROW(generate_fabric(spec), ValidationError);
  spec = testing::small_spec();
  spec.slice.lut_inputs = 7;
  EXPECT_THROW(generate_fabric(spec), ValidationError);
}

TEST(GroundTruth, PoolLowerBound) {
  EXPECT_GE(minimum_pool_bits(8, 0), 3);
  EXPECT_EQ(minimum_pool_bits(4, 4), 0);
  for (int n = 2; n <= 40; ++n) {
    int log2 = 0;
    while ((1 << log2) < n) ++log2;
    EXPECT_GE(minimum_pool_bits(n, 0), log2) << n;
  }
}

TEST(GroundTruth, TextRoundTrip) {
  const auto truth = generate_fabric(testing::small_spec());
  const auto text = ground_truth_to_text(truth);
  const auto back = ground_truth_from_text(text);
  EXPECT_EQ(back.encoding, truth.encoding);
  EXPECT_EQ(ground_truth_to_text(back), text);
}

TEST(FabricDescription, PublicViewHidesDefaults) {
  const Fabric pub = desk_truth().fabric.public_view();
  for (const auto& type : pub.types)
    for (const auto& p : type.pips) EXPECT_FALSE(p.is_default);
  const std::string text = fabric_description_to_text(desk_truth().fabric);
  EXPECT_EQ(text.find("default"), std::string::npos);
  EXPECT_EQ(fabric_description_to_text(fabric_description_from_text(text)), text);
}

TEST(FabricDescription, RefusesGroundTruthAndGarbage) {
  const auto truth = generate_fabric(testing::small_spec());
  EXPECT_THROW(fabric_description_from_text(ground_truth_to_text(truth)), FormatError);
  EXPECT_THROW(fabric_description_from_text("{"), FormatError);
  EXPECT_THROW(fabric_description_from_text("{\"format\": \"other\"}"), FormatError);
  EXPECT_THROW(ground_truth_from_text(fabric_description_to_text(truth.fabric)), FormatError);
}

TEST(Fabric, StaticSuccessor) {
  const Fabric& f = desk_truth().fabric;
  EXPECT_EQ(f.static_successor({3, 4}, "N1"), (std::pair<Coord, std::string>{{3, 5}, "S1"}));
  EXPECT_EQ(f.static_successor({3, 4}, "S2"), (std::pair<Coord, std::string>{{3, 3}, "N2"}));
  EXPECT_EQ(f.static_successor({3, 4}, "E0"), (std::pair<Coord, std::string>{{4, 4}, "W0"}));
  EXPECT_EQ(f.static_successor({3, 4}, "W3"), (std::pair<Coord, std::string>{{2, 4}, "E3"}));
  EXPECT_FALSE(f.static_successor({0, 0}, "W0"));
  EXPECT_FALSE(f.static_successor({15, 15}, "N0"));
  EXPECT_FALSE(f.static_successor({3, 4}, "A1"));
  EXPECT_FALSE(f.static_successor({3, 4}, "N4"));
}

TEST(Fabric, ReportListsEveryPip) {
  const Fabric& f = desk_truth().fabric;
  const auto report = fabric_report(f, {2, 3});
  ASSERT_EQ(report.size(), 200u);
  const auto& type = f.type_at({2, 3});
  for (std::size_t i = 0; i < report.size(); ++i) EXPECT_EQ(type.find(report[i].first, report[i].second), i);
  EXPECT_THROW(fabric_report(f, {16, 0}), Error);
}

TEST(Names, TilesSitesAndPins) {
  EXPECT_EQ(sm_tile_name({3, 4}), "INT_X3Y4");
  EXPECT_EQ(clb_tile_name({10, 0}), "CLB_X10Y0");
  EXPECT_EQ(site_name(SiteKind::kBlackbox, {8, 8}), "BB_X8Y8");
  EXPECT_EQ(parse_sm_tile("INT_X12Y7"), (Coord{12, 7}));
  EXPECT_FALSE(parse_sm_tile("INT_X1"));
  EXPECT_FALSE(parse_sm_tile("CLB_X1Y1"));
  EXPECT_FALSE(parse_sm_tile("INT_X-1Y2"));
  EXPECT_EQ(parse_site("IOB_X5Y0"), (std::pair{SiteKind::kIob, Coord{5, 0}}));

  const SliceShape shape;
  for (const char* pin : {"A", "DQ", "CX", "B4", "A1"}) {
    auto d = decode_slice_pin(shape, pin);
    ASSERT_TRUE(d) << pin;
    EXPECT_EQ(slice_pin_name(*d), pin);
  }
  EXPECT_EQ(decode_slice_pin(shape, "B3")->input, 2);
  EXPECT_TRUE(decode_slice_pin(shape, "DQ")->is_source());
  EXPECT_FALSE(decode_slice_pin(shape, "E"));
  EXPECT_FALSE(decode_slice_pin(shape, "A5"));
  EXPECT_FALSE(decode_slice_pin(shape, "A0"));
  EXPECT_FALSE(decode_slice_pin(shape, "AZ"));
  EXPECT_EQ(parse_site_kind("BLACKBOX"), SiteKind::kBlackbox);
  EXPECT_FALSE(parse_site_kind("slice"));
}

}  // namespace
}  // namespace bitrev
