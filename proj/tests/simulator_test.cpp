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

#include "bitrev/simulator.hpp"

namespace bitrev {
namespace {

Instance slice(const std::string& name, int x, int y) {
  Instance inst;
  inst.name = name;
  inst.kind = SiteKind::kSlice;
  inst.tile = clb_tile_name({x, y});
  inst.site = site_name(SiteKind::kSlice, {x, y});
  return inst;
}

Instance iob(const std::string& name, int x) {
  return {name, SiteKind::kIob, clb_tile_name({x, 0}), site_name(SiteKind::kIob, {x, 0}), {}, {}};
}

Net wire(const std::string& name, PinRef from, std::vector<PinRef> to) { return {name, from, std::move(to), {}}; }

TEST(Simulator, ConstantOneFlipFlop) {
  Netlist n;
  Instance s = slice("s0", 0, 0);
  s.luts[0] = TruthTable::constant(4, true);
  s.ffs[0] = FfConfig{};
  n.instances.push_back(s);
  n.nets.push_back(wire("d", {"s0", "A"}, {{"s0", "AX"}}));
  const auto trace = simulate(n, std::vector<CycleInputs>(4), {"s0.AQ", "s0.A"});
  ASSERT_EQ(trace.size(), 4u);
  EXPECT_FALSE(trace[0].at("s0.AQ"));
  for (int c = 1; c < 4; ++c) EXPECT_TRUE(trace[c].at("s0.AQ")) << c;
  EXPECT_TRUE(trace[0].at("s0.A"));
}

// Sixteen identity-LUT stages fed from a pad.
Netlist delay_line() {
  Netlist n;
  n.instances.push_back(iob("in", 0));
  for (int k = 0; k < 4; ++k) {
    Instance s = slice("s" + std::to_string(k), k, 1);
    for (int l = 0; l < 4; ++l) {
      s.luts[l] = TruthTable::identity(4, 0);
      s.ffs[l] = FfConfig{};
    }
    n.instances.push_back(s);
  }
  n.nets.push_back(wire("in", {"in", "I"}, {{"s0", "A1"}}));
  for (int st = 0; st < 16; ++st) {
    const std::string inst = "s" + std::to_string(st / 4);
    const int l = st % 4;
    const std::string letter(1, element_letter(l));
    n.nets.push_back(wire("d" + std::to_string(st), {inst, letter}, {{inst, letter + "X"}}));
    if (st < 15) {
      const std::string next = "s" + std::to_string((st + 1) / 4);
      const std::string nl(1, element_letter((st + 1) % 4));
      n.nets.push_back(wire("q" + std::to_string(st), {inst, letter + "Q"}, {{next, nl + "1"}}));
    }
  }
  return n;
}

TEST(Simulator, DelayLineShiftsOneStagePerCycle) {
  const Netlist n = delay_line();
  std::vector<CycleInputs> stimuli(20);
  stimuli[0]["in"] = true;
  const auto trace = simulate(n, stimuli, {"s3.DQ", "s0.AQ"});
  for (int c = 0; c < 20; ++c) {
    EXPECT_EQ(trace[c].at("s3.DQ"), c == 16) << "cycle " << c;
    EXPECT_EQ(trace[c].at("s0.AQ"), c == 1) << "cycle " << c;
  }
}

TEST(Simulator, XorLut) {
  Netlist n;
  n.instances.push_back(iob("a", 0));
  n.instances.push_back(iob("b", 1));
  Instance s = slice("x", 2, 2);
  s.luts[1] = TruthTable(4, 0x6666);  // B1 xor B2
  n.instances.push_back(s);
  n.nets.push_back(wire("a", {"a", "I"}, {{"x", "B1"}}));
  n.nets.push_back(wire("b", {"b", "I"}, {{"x", "B2"}}));
  std::vector<CycleInputs> stimuli{{{"a", false}, {"b", false}},
                                   {{"a", true}, {"b", false}},
                                   {{"a", false}, {"b", true}},
                                   {{"a", true}, {"b", true}}};
  const auto trace = simulate(n, stimuli, {"x.B"});
  EXPECT_FALSE(trace[0].at("x.B"));
  EXPECT_TRUE(trace[1].at("x.B"));
  EXPECT_TRUE(trace[2].at("x.B"));
  EXPECT_FALSE(trace[3].at("x.B"));
}

TEST(Simulator, CombinationalLoopIsNamed) {
  Netlist n;
  Instance s = slice("loop", 0, 0);
  s.luts[0] = TruthTable::identity(4, 0);
  s.luts[1] = TruthTable::identity(4, 0);
  n.instances.push_back(s);
  n.nets.push_back(wire("ab", {"loop", "A"}, {{"loop", "B1"}}));
  n.nets.push_back(wire("ba", {"loop", "B"}, {{"loop", "A1"}}));
  try {
    Simulator sim(n);
    FAIL() << "expected a loop error";
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("combinational loop"), std::string::npos);
    EXPECT_NE(what.find("loop.A"), std::string::npos);
    EXPECT_NE(what.find("loop.B"), std::string::npos);
  }
}

TEST(Simulator, UndrivenInputReadsZeroWithWarning) {
  Netlist n;
  Instance s = slice("s", 0, 0);
  s.luts[0] = TruthTable(4, 0x5555);  // NOT A1
  n.instances.push_back(s);
  Simulator sim(n);
  ASSERT_EQ(sim.warnings().size(), 1u);
  EXPECT_NE(sim.warnings()[0].find("s.A1"), std::string::npos);
  bool out = false;
  sim.step({}, [&](const Simulator& v) { out = v.peek("s", "A"); });
  EXPECT_TRUE(out);
}

TEST(Simulator, InputsTheTableIgnoresDoNotWarn) {
  Netlist n;
  Instance s = slice("s", 0, 0);
  s.luts[0] = TruthTable::constant(4, true);
  n.instances.push_back(s);
  EXPECT_TRUE(Simulator(n).warnings().empty());
}

class Latch : public BlackboxModel {
 public:
  void clock(const Inputs& in, std::map<std::string, bool>& out) override { out["Q"] = in("D"); }
};

TEST(Simulator, BlackboxModelSeesPreEdgeValues) {
  Netlist n;
  n.instances.push_back(iob("d", 0));
  n.instances.push_back({"bb", SiteKind::kBlackbox, clb_tile_name({1, 1}), site_name(SiteKind::kBlackbox, {1, 1}), {}, {}});
  n.nets.push_back(wire("d", {"d", "I"}, {{"bb", "D"}}));
  BlackboxModels models{{"bb", [] { return std::make_unique<Latch>(); }}};
  std::vector<CycleInputs> stimuli{{{"d", true}}, {{"d", false}}, {}};
  const auto trace = simulate(n, stimuli, {"bb.Q"}, models);
  EXPECT_FALSE(trace[0].at("bb.Q"));
  EXPECT_TRUE(trace[1].at("bb.Q"));
  EXPECT_FALSE(trace[2].at("bb.Q"));
}

TEST(Simulator, UnconnectedBlackboxInputTakesStimulus) {
  Netlist n;
  n.instances.push_back({"bb", SiteKind::kBlackbox, clb_tile_name({1, 1}), site_name(SiteKind::kBlackbox, {1, 1}), {}, {}});
  BlackboxModels models{{"bb", [] { return std::make_unique<Latch>(); }}};
  Simulator sim(n, models);
  sim.step({{"bb.D", true}});
  EXPECT_TRUE(sim.peek("bb", "Q"));
  EXPECT_TRUE(sim.warnings().empty());
  sim.step({});
  EXPECT_FALSE(sim.peek("bb", "Q"));
  ASSERT_EQ(sim.warnings().size(), 1u);
  EXPECT_EQ(sim.cycle(), 2u);
}

TEST(Simulator, UnmodeledBlackboxWarns) {
  Netlist n;
  n.instances.push_back({"bb", SiteKind::kBlackbox, clb_tile_name({1, 1}), site_name(SiteKind::kBlackbox, {1, 1}), {}, {}});
  Simulator sim(n);
  ASSERT_EQ(sim.warnings().size(), 1u);
  EXPECT_NE(sim.warnings()[0].find("no behavioral model"), std::string::npos);
}

TEST(Simulator, FlipFlopInitValue) {
  Netlist n;
  Instance s = slice("s", 0, 0);
  s.ffs[2] = FfConfig{true, true};
  n.instances.push_back(s);
  Simulator sim(n);
  EXPECT_TRUE(sim.peek("s", "CQ"));
  sim.step({});
  EXPECT_FALSE(sim.peek("s", "CQ"));  // undriven D
}

}  // namespace
}  // namespace bitrev
