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

#include "bitrev/oracle.hpp"
#include "bitrev/re_pipeline.hpp"
#include "fixtures.hpp"

namespace bitrev {
namespace {

using testing::desk;
using testing::small;

TEST(Invocations, AnalyticFormula) {
  // One 3461-PIP type on 2278 switch matrices.
  EXPECT_EQ(analytic_routing_invocations({3461}, 2278), 5739u);
  EXPECT_EQ(analytic_routing_invocations({200, 200}, 256), 656u);
  EXPECT_EQ(analytic_routing_invocations({80, 80}, 36), 196u);
}

TEST(Invocations, DeskCountsMatchFormula) {
  const auto& r = desk();
  EXPECT_EQ(r.counts.enumeration, 400u);
  EXPECT_EQ(r.counts.references, 2u);
  EXPECT_EQ(r.counts.extrapolation, 254u);
  EXPECT_EQ(r.counts.routing(), analytic_routing_invocations({200, 200}, 256));
  EXPECT_EQ(naive_routing_invocations(r.fabric), 51200u);
  EXPECT_GE(naive_routing_invocations(r.fabric), 50 * r.counts.routing());
  // Baseline, 4 x 16 LUT entries and 4 FFs per slice.
  EXPECT_EQ(r.counts.logic, 256u * 69u);
}

TEST(Invocations, CountsMatchToolchainCalls) {
  const auto truth = generate_fabric(testing::small_spec(5));
  MockToolchain tool(truth);
  CountingGenerator counting(tool);
  InvocationCounts counts;
  reverse_fabric(counting, truth.fabric.public_view(), {}, &counts);
  EXPECT_EQ(counting.calls(), counts.total());
}

TEST(Reverse, SmallFabricIsExact) {
  const auto audit = audit_database(small().db, small().truth);
  EXPECT_TRUE(audit.exact()) << audit.first_error;
  EXPECT_EQ(audit.luts_checked, 36u * 4u);
  EXPECT_EQ(audit.ffs_checked, 36u * 4u);
}

TEST(Reverse, DeskFabricIsExact) {
  const auto audit = audit_database(desk().db, desk().truth);
  EXPECT_TRUE(audit.exact()) << audit.first_error;
  // Two defaults per type carry no positions to compare.
  EXPECT_EQ(audit.pips_checked, 256u * 198u);
}

TEST(Reverse, DefaultsMatchHiddenMarkers) {
  const auto& r = desk();
  for (std::uint32_t t = 0; t < r.db.types.size(); ++t) {
    std::vector<std::uint32_t> hidden;
    const auto& pips = r.truth.fabric.types[t].pips;
    for (std::uint32_t i = 0; i < pips.size(); ++i)
      if (pips[i].is_default) hidden.push_back(i);
    EXPECT_EQ(r.db.types[t].defaults, hidden) << t;
  }
}

TEST(Reverse, JobCountDoesNotChangeResult) {
  const auto truth = generate_fabric(testing::small_spec(9));
  MockToolchain tool(truth);
  const Fabric pub = truth.fabric.public_view();
  ReverseOptions one, many;
  many.jobs = 6;
  EXPECT_EQ(database_to_bytes(reverse_fabric(tool, pub, one)),
            database_to_bytes(reverse_fabric(tool, pub, many)));
}

TEST(Reverse, RoutingOnlySkipsLogic) {
  const auto truth = generate_fabric(testing::small_spec(13));
  MockToolchain tool(truth);
  ReverseOptions opts;
  opts.logic = false;
  InvocationCounts counts;
  const auto db = reverse_fabric(tool, truth.fabric.public_view(), opts, &counts);
  EXPECT_EQ(counts.logic, 0u);
  EXPECT_TRUE(db.lut_map.empty());
}

TEST(DistanceTable, ReferenceIsFirstNonDefaultByName) {
  SwitchMatrixType type;
  type.pips = {{"W0", "A1", false}, {"E1", "A1", false}, {"N0", "B2", false}, {"AQ", "B2", false}};
  type.rebuild_index();
  SwitchMatrixResult result{{0, 0}, {{10, 20}, {11, 25, 30}, {40}, {}}};
  const TypeTable t = build_distance_table(type, result);
  // "AQ" is a default here, so "E1" is the smallest named survivor.
  EXPECT_EQ(t.reference_pip, 1u);
  EXPECT_EQ(t.defaults, (std::vector<std::uint32_t>{3}));
  EXPECT_EQ(t.distances[0], (std::vector<std::int64_t>{-1, -5}));
  EXPECT_EQ(t.distances[1], (std::vector<std::int64_t>{0, 0, 0}));
  EXPECT_EQ(t.distances[2], (std::vector<std::int64_t>{29}));
  EXPECT_TRUE(t.distances[3].empty());

  result.positions = {{}, {}, {}, {}};
  EXPECT_THROW(build_distance_table(type, result), Error);
}

// The shorter reference wraps onto its last element for longer PIPs.
TEST(DistanceTable, ExtrapolationClampsReferenceIndex) {
  EncodingDatabase db;
  db.device_id = "d";
  db.width = 2;
  db.height = 1;
  db.frame_bytes = 16;
  db.placement = {0, 0};
  TypeTable t;
  t.pip_names = {{"a", "x"}, {"b", "x"}};
  t.reference_pip = 0;
  t.distances = {{0}, {-2, 3, 5}};
  db.types = {t};
  db.reference_positions = {{10}, {70}};
  EXPECT_EQ(db.extrapolate(0, 1), (BitPositions{8, 13, 15}));
  EXPECT_EQ(db.extrapolate(1, 1), (BitPositions{68, 73, 75}));
  db.reference_positions[1] = {126};
  EXPECT_THROW(db.extrapolate(1, 1), Error);
}

// Sets one extra bit whenever a LUT is configured, so logic templates toggle
// two bits.
class NoisyToolchain : public BitstreamGenerator {
 public:
  explicit NoisyToolchain(const BitstreamGenerator& inner) : inner_(inner) {}
  Bitstream bitgen(const Netlist& n, bool force) const override {
    Bitstream bs = inner_.bitgen(n, force);
    for (const auto& i : n.instances)
      if (!i.luts.empty()) bs.set_bit(0, !bs.bit(0));
    return bs;
  }

 private:
  const BitstreamGenerator& inner_;
};

TEST(Reverse, LogicTemplateWithExtraToggleFails) {
  NoisyToolchain noisy(small().toolchain);
  EncodingDatabase db;
  InvocationCounts counts;
  EXPECT_THROW(reverse_luts_ffs(noisy, small().fabric, {}, db, counts), Error);
}

}  // namespace
}  // namespace bitrev
