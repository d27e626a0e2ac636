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

#include "bitrev/trojan.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <set>
#include <sstream>
#include <tuple>

#include "bitrev/aes.hpp"
#include "bitrev/parallel.hpp"

namespace bitrev {

namespace {

constexpr SliceShape kWideShape{4, 6, 4};

// Chain r is fed by key input kLaneOrder[r].
constexpr std::array<int, kKeyLanes> kLaneOrder{5, 2, 7, 0, 3, 6, 1, 4};

bool key_bit(const Block& b, int index) { return (b[index / 8] >> (index % 8)) & 1u; }

std::string key_input(int lane) { return "kb" + std::to_string(lane); }

std::string lut_pin(int l) { return slice_pin_name({PinRole::kLutOutput, l, 0}); }
std::string ff_q_pin(int f) { return slice_pin_name({PinRole::kFfOutput, f, 0}); }
std::string ff_d_pin(int f) { return slice_pin_name({PinRole::kFfData, f, 0}); }

Coord slice_coord(const Instance& inst) {
  auto site = parse_site(inst.site);
  if (!site || site->first != SiteKind::kSlice)
    throw ValidationError("instance \"" + inst.name + "\" is not on a slice site");
  return site->second;
}

Block random_block(std::mt19937_64& rng) {
  Block b;
  for (auto& x : b) x = static_cast<std::uint8_t>(uniform_below(rng, 256));
  return b;
}

}  // namespace

std::string FfRef::to_string() const { return instance + "." + ff_q_pin(ff); }
std::string LutRef::to_string() const { return instance + "." + lut_pin(lut); }

// --- self-test spec -------------------------------------------------------

std::string self_test_spec_to_text(const SelfTestSpec& spec) {
  return "p_ref " + to_hex(spec.p_ref) + "\nc_ref " + to_hex(spec.c_ref) + "\nk_st " + to_hex(spec.k_st) +
         "\nk_u " + to_hex(spec.k_u) + "\n";
}

SelfTestSpec self_test_spec_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::map<std::string, Block> fields;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key) || key[0] == '#') continue;
    if (!(ls >> value)) throw FormatError("self-test spec: '" + key + "' has no value");
    fields[key] = block_from_hex(value);
  }
  SelfTestSpec spec;
  for (auto [name, field] : {std::pair{"p_ref", &spec.p_ref}, std::pair{"c_ref", &spec.c_ref},
                             std::pair{"k_st", &spec.k_st}, std::pair{"k_u", &spec.k_u}}) {
    auto it = fields.find(name);
    if (it == fields.end()) throw FormatError(std::string("self-test spec: missing ") + name);
    *field = it->second;
  }
  if (aes128_encrypt(spec.k_st, spec.p_ref) != spec.c_ref)
    throw ValidationError("self-test spec: c_ref is not AES(k_st, p_ref)");
  return spec;
}

// --- behavioral core ------------------------------------------------------

void AesCoreModel::clock(const Inputs& in, std::map<std::string, bool>& out) {
  if (!in("GO")) return;
  Block key{}, plaintext{};
  for (int i = 0; i < 128; ++i) {
    if (in("K" + std::to_string(i))) key[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    if (in("P" + std::to_string(i))) plaintext[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  const Block c = aes128_encrypt(key, plaintext);
  for (int i = 0; i < 128; ++i) out["C" + std::to_string(i)] = key_bit(c, i);
}

BlackboxModels aes_core_models() {
  return {{kAesCore, [] { return std::make_unique<AesCoreModel>(); }}};
}

// --- target ---------------------------------------------------------------

AesTargetBuild build_aes_target(const Fabric& fabric, const Block& k_st, const Block& p_ref,
                                const PipFilter& filter) {
  const int columns = kKeyStages / 4;
  if (fabric.width < std::max(kKeyLanes, 2 * columns + 2) || fabric.height < kKeyLanes + 3)
    throw ValidationError("fabric is too small for the AES target");
  if (fabric.slice.luts < 4 || fabric.slice.ffs < 4)
    throw ValidationError("the AES target needs four LUTs and four FFs per slice");

  Netlist n;
  n.design_name = "aes_target";
  n.device_id = fabric.device_id;
  for (int b = 0; b < kKeyLanes; ++b)
    n.instances.push_back({key_input(b), SiteKind::kIob, clb_tile_name({b, 0}),
                           site_name(SiteKind::kIob, {b, 0}), {}, {}});
  const Coord core{fabric.width / 2, fabric.height / 2};
  n.instances.push_back({kAesCore, SiteKind::kBlackbox, clb_tile_name(core),
                         site_name(SiteKind::kBlackbox, core), {}, {}});

  Router router(fabric, filter);
  auto column = [](int k) { return 2 + 2 * k; };
  auto slice_name = [](int r, int k) { return "ksr" + std::to_string(r) + "_" + std::to_string(k); };
  auto route = [&](Coord from, const std::string& source, Coord to, const std::string& sink) {
    auto pips = router.route(from, source, {{to, sink}});
    if (!pips)
      throw ValidationError("cannot route " + sm_tile_name(from) + " " + source + " to " + sm_tile_name(to) +
                            " " + sink);
    return *pips;
  };

  for (int r = 0; r < kKeyLanes; ++r) {
    const int y = 1 + r * (fabric.height - 3) / (kKeyLanes - 1);
    const int lane = kLaneOrder[r];
    for (int k = 0; k < columns; ++k) {
      Instance slice{slice_name(r, k), SiteKind::kSlice, clb_tile_name({column(k), y}),
                     site_name(SiteKind::kSlice, {column(k), y}), {}, {}};
      for (int l = 0; l < 4; ++l) {
        slice.luts[l] = TruthTable::identity(fabric.slice.lut_inputs, 0);
        slice.ffs[l] = FfConfig{};
      }
      n.instances.push_back(std::move(slice));
    }
    n.nets.push_back({"key_in_" + key_input(lane), PinRef{key_input(lane), "I"},
                      {{slice_name(r, 0), slice_pin_name({PinRole::kLutInput, 0, 0})}}, {}});
    for (int s = 0; s < kKeyStages; ++s) {
      const Coord c{column(s / 4), y};
      const int l = s % 4;
      const std::string inst = slice_name(r, s / 4);
      const std::string stage = "ksr" + std::to_string(r) + "_s" + std::to_string(s);
      n.nets.push_back({stage + "_d", PinRef{inst, lut_pin(l)}, {{inst, ff_d_pin(l)}},
                        route(c, lut_pin(l), c, ff_d_pin(l))});
      Net q{stage + "_q", PinRef{inst, ff_q_pin(l)},
            {{kAesCore, "K" + std::to_string(8 * (kKeyStages - 1 - s) + lane)}}, {}};
      if (s + 1 < kKeyStages) {
        const Coord next{column((s + 1) / 4), y};
        const std::string pin = slice_pin_name({PinRole::kLutInput, (s + 1) % 4, 0});
        q.inpins.push_back({slice_name(r, (s + 1) / 4), pin});
        q.pips = route(c, ff_q_pin(l), next, pin);
      }
      n.nets.push_back(std::move(q));
    }
  }
  n.canonicalize();
  validate_routing(n, fabric);

  AesTargetBuild out;
  out.netlist = std::move(n);
  out.spec.p_ref = p_ref;
  out.spec.k_st = k_st;
  out.spec.c_ref = aes128_encrypt(k_st, p_ref);
  return out;
}

Block simulate_encryption(const Netlist& netlist, const Block& key, const Block& plaintext,
                          std::vector<std::string>* warnings) {
  Simulator sim(netlist, aes_core_models());
  const std::string go = std::string(kAesCore) + ".GO";
  for (int t = 0; t < kKeyStages; ++t) {
    CycleInputs in{{go, false}};
    for (int b = 0; b < kKeyLanes; ++b) in[key_input(b)] = (key[t] >> b) & 1u;
    sim.step(in);
  }
  CycleInputs in{{go, true}};
  for (int i = 0; i < 128; ++i) in[std::string(kAesCore) + ".P" + std::to_string(i)] = key_bit(plaintext, i);
  sim.step(in);
  Block c{};
  for (int i = 0; i < 128; ++i)
    if (sim.peek(kAesCore, "C" + std::to_string(i))) c[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  if (warnings) *warnings = sim.warnings();
  return c;
}

bool self_test(const Netlist& netlist, const SelfTestSpec& spec) {
  return simulate_encryption(netlist, spec.k_st, spec.p_ref) == spec.c_ref;
}

// --- detection ------------------------------------------------------------

std::vector<ShiftChain> detect_shift_registers(const Netlist& netlist, int threshold) {
  std::map<PinRef, const Net*> by_in, by_out;
  for (const auto& net : netlist.nets) {
    if (net.outpin) by_out[*net.outpin] = &net;
    for (const auto& p : net.inpins) by_in[p] = &net;
  }
  auto ff_driving = [&](const Net* net) -> std::optional<FfRef> {
    if (!net || !net->outpin) return std::nullopt;
    const Instance* inst = netlist.find_instance(net->outpin->instance);
    if (!inst || inst->kind != SiteKind::kSlice) return std::nullopt;
    auto pin = decode_slice_pin(kWideShape, net->outpin->pin);
    if (!pin || pin->role != PinRole::kFfOutput) return std::nullopt;
    return FfRef{inst->name, pin->element};
  };

  struct Stage {
    std::optional<LutRef> lut;
    std::optional<FfRef> pred;
    PinRef entry;  // sink on the predecessor's Q net that starts this stage
  };
  std::map<FfRef, Stage> stages;
  for (const auto& inst : netlist.instances) {
    if (inst.kind != SiteKind::kSlice) continue;
    for (int f = 0; f < kWideShape.ffs; ++f) {
      const PinRef d{inst.name, ff_d_pin(f)};
      const bool has_q = by_out.count({inst.name, ff_q_pin(f)}) != 0;
      auto dn = by_in.find(d);
      if (!inst.ffs.count(f) && !has_q && dn == by_in.end()) continue;
      Stage& st = stages[{inst.name, f}];
      if (dn == by_in.end()) continue;
      const Net* dnet = dn->second;
      if (auto ff = ff_driving(dnet)) {
        st.pred = ff;
        st.entry = d;
        continue;
      }
      if (!dnet->outpin || dnet->inpins.size() != 1) continue;
      const Instance* src = netlist.find_instance(dnet->outpin->instance);
      if (!src || src->kind != SiteKind::kSlice) continue;
      auto pin = decode_slice_pin(kWideShape, dnet->outpin->pin);
      if (!pin || pin->role != PinRole::kLutOutput) continue;
      auto table = src->luts.find(pin->element);
      if (table == src->luts.end()) continue;
      auto through = table->second.passthrough_input();
      if (!through) continue;
      st.lut = LutRef{src->name, pin->element};
      const PinRef input{src->name, slice_pin_name({PinRole::kLutInput, pin->element, *through})};
      auto in = by_in.find(input);
      if (in == by_in.end()) continue;
      if (auto ff = ff_driving(in->second)) {
        st.pred = ff;
        st.entry = input;
      }
    }
  }

  std::map<FfRef, int> fanout;
  for (const auto& [ff, st] : stages)
    if (st.pred) ++fanout[*st.pred];
  std::map<FfRef, FfRef> next;
  std::set<FfRef> has_prev;
  for (const auto& [ff, st] : stages)
    if (st.pred && fanout[*st.pred] == 1 && stages.count(*st.pred)) {
      next[*st.pred] = ff;
      has_prev.insert(ff);
    }

  std::vector<ShiftChain> chains;
  for (const auto& [head, st] : stages) {
    if (has_prev.count(head) || !next.count(head)) continue;
    ShiftChain chain;
    for (std::optional<FfRef> at = head; at;) {
      chain.ffs.push_back(*at);
      chain.luts.push_back(stages[*at].lut);
      auto it = next.find(*at);
      at = it == next.end() ? std::nullopt : std::optional<FfRef>(it->second);
    }
    if (static_cast<int>(chain.ffs.size()) < threshold) continue;
    for (std::size_t i = 0; i < chain.ffs.size(); ++i) {
      auto q = by_out.find({chain.ffs[i].instance, ff_q_pin(chain.ffs[i].ff)});
      if (q == by_out.end()) continue;
      const PinRef* entry = i + 1 < chain.ffs.size() ? &stages[chain.ffs[i + 1]].entry : nullptr;
      for (const auto& p : q->second->inpins)
        if (!entry || p != *entry) chain.taps.push_back(p);
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

// --- correlation ----------------------------------------------------------

std::string key_bit_map_to_text(const KeyBitMap& map) {
  std::string out = "# flip-flop key-byte bit\n";
  for (const auto& [ff, kb] : map)
    out += ff.to_string() + " " + std::to_string(kb.byte) + " " + std::to_string(kb.bit) + "\n";
  return out;
}

KeyBitMap key_bit_map_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  KeyBitMap map;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    std::istringstream ls(line);
    std::string ref;
    int byte = 0, bit = 0;
    if (!(ls >> ref) || ref[0] == '#') continue;
    const auto dot = ref.rfind('.');
    auto pin = dot == std::string::npos ? std::nullopt : decode_slice_pin(kWideShape, ref.substr(dot + 1));
    if (!pin || pin->role != PinRole::kFfOutput || !(ls >> byte >> bit))
      throw FormatError("key map line " + std::to_string(number) + ": expected '<inst>.<FF Q pin> <byte> <bit>'");
    if (byte < 0 || byte >= 16 || bit < 0 || bit >= 8)
      throw FormatError("key map line " + std::to_string(number) + ": key bit out of range");
    map[{ref.substr(0, dot), pin->element}] = {byte, bit};
  }
  return map;
}

bool is_key_bijection(const KeyBitMap& map) {
  std::set<KeyBit> seen;
  for (const auto& [ff, kb] : map)
    if (kb.byte < 0 || kb.byte >= 16 || kb.bit < 0 || kb.bit >= 8 || !seen.insert(kb).second) return false;
  return seen.size() == 128;
}

KeyBitMap correlate_key_bits(const Netlist& netlist, const std::vector<ShiftChain>& chains, unsigned jobs) {
  if (chains.size() != kKeyLanes)
    throw CorrelationError("expected " + std::to_string(kKeyLanes) + " key chains, got " +
                           std::to_string(chains.size()));
  for (const auto& chain : chains) {
    if (chain.ffs.size() != kKeyStages)
      throw CorrelationError("chain at " + chain.ffs.front().to_string() + " has " +
                             std::to_string(chain.ffs.size()) + " stages");
    for (const auto& lut : chain.luts)
      if (!lut) throw CorrelationError("chain at " + chain.ffs.front().to_string() + " has a stage without a LUT");
  }

  Block ones;
  ones.fill(0xFF);
  const Block probe = block_from_hex("00112233445566778899aabbccddeeff");
  auto cleared = [&](const LutRef& ref) {
    Netlist copy = netlist;
    Instance* inst = copy.find_instance(ref.instance);
    if (!inst || !inst->luts.count(ref.lut)) throw CorrelationError("LUT " + ref.to_string() + " not found");
    TruthTable& table = inst->luts[ref.lut];
    table = TruthTable::constant(table.arity(), false);
    return simulate_encryption(copy, ones, probe);
  };
  auto expected = [&](auto clear_bits) {
    Block key = ones;
    clear_bits(key);
    return aes128_encrypt(key, probe);
  };
  std::array<Block, kKeyLanes> lane_table;
  for (int b = 0; b < kKeyLanes; ++b)
    lane_table[b] = expected([&](Block& k) {
      for (auto& x : k) x = static_cast<std::uint8_t>(x & ~(1u << b));
    });

  auto results = parallel_map(chains.size(), jobs, [&](std::size_t index) {
    const ShiftChain& chain = chains[index];
    const std::string where = "chain at " + chain.ffs.front().to_string();
    const auto lane_it = std::find(lane_table.begin(), lane_table.end(), cleared(*chain.luts.front()));
    if (lane_it == lane_table.end())
      throw CorrelationError(where + ": clearing " + chain.luts.front()->to_string() +
                             " gives a ciphertext outside the lane table");
    const int lane = static_cast<int>(lane_it - lane_table.begin());
    const std::uint8_t mask = static_cast<std::uint8_t>(~(1u << lane));

    const Block last = cleared(*chain.luts.back());
    int last_byte = -1;
    for (int j = 0; j < 16 && last_byte < 0; ++j)
      if (expected([&](Block& k) { k[j] &= mask; }) == last) last_byte = j;
    if (last_byte != 0 && last_byte != 15)
      throw CorrelationError(where + ": clearing the last stage matches no end byte of lane " +
                             std::to_string(lane));
    auto byte_of = [&](int s) { return last_byte == 0 ? kKeyStages - 1 - s : s; };

    for (int s = 1; s + 1 < kKeyStages; ++s) {
      const Block want = expected([&](Block& k) {
        for (int t = s; t < kKeyStages; ++t) k[byte_of(t)] &= mask;
      });
      if (cleared(*chain.luts[s]) != want)
        throw CorrelationError(where + ": stage " + std::to_string(s) + " does not hold key byte " +
                               std::to_string(byte_of(s)) + " bit " + std::to_string(lane));
    }
    std::vector<std::pair<FfRef, KeyBit>> entries;
    for (int s = 0; s < kKeyStages; ++s) entries.push_back({chain.ffs[s], {byte_of(s), lane}});
    return entries;
  });

  KeyBitMap map;
  for (const auto& entries : results)
    for (const auto& [ff, kb] : entries) map[ff] = kb;
  if (!is_key_bijection(map)) throw CorrelationError("recovered key map is not a bijection");
  return map;
}

// --- payload --------------------------------------------------------------

namespace {

// Drops PIPs that no longer lead to one of the net's inpins.
void prune_unused_pips(Net& net, const Fabric& fabric, const std::map<Coord, std::string>& slice_at) {
  auto coord = [&](const Pip& p) {
    auto c = parse_sm_tile(p.tile);
    if (!c) throw ValidationError("net \"" + net.name + "\" names unknown tile " + p.tile);
    return *c;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = net.pips.begin(); it != net.pips.end(); ++it) {
      const Coord c = coord(*it);
      bool needed = false;
      auto pin = decode_slice_pin(fabric.slice, it->sink);
      if (pin && !pin->is_source()) {
        auto inst = slice_at.find(c);
        needed = inst != slice_at.end() &&
                 std::find(net.inpins.begin(), net.inpins.end(), PinRef{inst->second, it->sink}) != net.inpins.end();
      } else if (auto next = fabric.static_successor(c, it->sink)) {
        needed = std::any_of(net.pips.begin(), net.pips.end(), [&](const Pip& q) {
          return q.source == next->second && coord(q) == next->first;
        });
      }
      if (!needed) {
        net.pips.erase(it);
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

Netlist insert_payload(const Netlist& netlist, const KeyBitMap& map, const Block& k_st, const Fabric& fabric,
                       const PipFilter& filter) {
  if (!is_key_bijection(map)) throw ValidationError("key map is not a bijection onto the 128 key bits");
  Netlist out = netlist;

  std::map<Coord, std::string> slice_at;
  for (const auto& inst : out.instances)
    if (inst.kind == SiteKind::kSlice) slice_at[slice_coord(inst)] = inst.name;

  std::vector<std::pair<int, FfRef>> order;
  for (const auto& [ff, kb] : map) order.push_back({8 * kb.byte + kb.bit, ff});
  std::sort(order.begin(), order.end());

  for (const auto& [index, ff] : order) {
    const Instance* inst = out.find_instance(ff.instance);
    if (!inst || inst->kind != SiteKind::kSlice || ff.ff < 0 || ff.ff >= fabric.slice.ffs)
      throw ValidationError("key flip-flop " + ff.to_string() + " not found");
    const PinRef d{ff.instance, ff_d_pin(ff.ff)};
    for (auto& net : out.nets) {
      auto it = std::find(net.inpins.begin(), net.inpins.end(), d);
      if (it == net.inpins.end()) continue;
      net.inpins.erase(it);
      prune_unused_pips(net, fabric, slice_at);
    }
  }

  // Each payload takes the free LUT output closest in PIPs to its FF. FFs
  // that fail move to the front of the next pass.
  constexpr int kPasses = 8;
  std::vector<Coord> free_sites;
  for (Coord c : fabric.coords())
    if (!slice_at.count(c)) free_sites.push_back(c);
  std::vector<std::pair<Instance, Net>> placed;
  std::vector<std::pair<int, FfRef>> failed;
  for (int pass = 0; pass < kPasses; ++pass) {
    Router router(fabric, filter);
    router.occupy(out);
    std::vector<Coord> free = free_sites;
    placed.clear();
    failed.clear();
    for (const auto& [index, ff] : order) {
      const Coord target = slice_coord(*out.find_instance(ff.instance));
      auto distance = [&](Coord c) { return std::abs(c.x - target.x) + std::abs(c.y - target.y); };
      std::stable_sort(free.begin(), free.end(), [&](Coord a, Coord b) {
        return std::tuple(distance(a), a.y, a.x) < std::tuple(distance(b), b.y, b.x);
      });
      std::vector<std::pair<Coord, std::string>> sources;
      for (Coord c : free)
        for (int l = 0; l < fabric.slice.luts; ++l) sources.push_back({c, lut_pin(l)});
      auto routed = router.route_from_any(sources, {target, ff_d_pin(ff.ff)});
      if (!routed) {
        failed.push_back({index, ff});
        continue;
      }
      const auto [at, pin] = sources[routed->first];
      const int l = decode_slice_pin(fabric.slice, pin)->element;
      const std::string name = "payload_" + std::to_string(index);
      Instance payload{name, SiteKind::kSlice, clb_tile_name(at), site_name(SiteKind::kSlice, at), {}, {}};
      payload.luts[l] = TruthTable::constant(fabric.slice.lut_inputs, key_bit(k_st, index));
      placed.push_back({std::move(payload),
                        Net{name, PinRef{name, pin}, {{ff.instance, ff_d_pin(ff.ff)}}, std::move(routed->second)}});
      free.erase(std::find(free.begin(), free.end(), at));
    }
    if (failed.empty()) break;
    std::vector<std::pair<int, FfRef>> reordered = failed;
    for (const auto& entry : order)
      if (std::find(failed.begin(), failed.end(), entry) == failed.end()) reordered.push_back(entry);
    order = std::move(reordered);
  }
  if (!failed.empty())
    throw ValidationError("cannot route payload LUTs to " + std::to_string(failed.size()) + " key flip-flops, first " +
                          failed.front().second.to_string());
  for (auto& [inst, net] : placed) {
    out.instances.push_back(std::move(inst));
    out.nets.push_back(std::move(net));
  }
  out.canonicalize();
  return out;
}

// --- stealth --------------------------------------------------------------

std::string StealthReport::to_text() const {
  std::ostringstream out;
  out << (self_test_passed ? "PASS" : "FAIL") << " self-test\n";
  out << "decryptable under k_st: " << decryptable << "/" << trials << "\n";
  out << "equal to AES(k_u, p): " << correct << "/" << trials << "\n";
  if (counterexample)
    out << "counterexample: k_u " << to_hex(counterexample->k_u) << " p " << to_hex(counterexample->p) << " c "
        << to_hex(counterexample->c) << " expected " << to_hex(aes128_encrypt(counterexample->k_u, counterexample->p))
        << "\n";
  else
    out << "counterexample: none\n";
  if (degenerate_user_key) out << "note: the user key equals k_st, so the self-test key and user key coincide\n";
  return out.str();
}

StealthReport stealth_report(const Netlist& netlist, const SelfTestSpec& spec, int trials, std::mt19937_64& rng,
                             unsigned jobs) {
  StealthReport report;
  report.self_test_passed = self_test(netlist, spec);
  report.degenerate_user_key = spec.k_u == spec.k_st;
  report.trials = trials;

  std::vector<std::pair<Block, Block>> cases;
  for (int i = 0; i < trials; ++i) {
    Block k = random_block(rng);
    while (k == spec.k_st) k = random_block(rng);
    cases.push_back({k, random_block(rng)});
  }
  auto outputs = parallel_map(cases.size(), jobs, [&](std::size_t i) {
    return simulate_encryption(netlist, cases[i].first, cases[i].second);
  });
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& [k, p] = cases[i];
    const Block& c = outputs[i];
    if (aes128_decrypt(spec.k_st, c) == p) ++report.decryptable;
    if (c == aes128_encrypt(k, p)) ++report.correct;
    else if (!report.counterexample) report.counterexample = StealthReport::Pair{k, p, c};
  }
  return report;
}

// --- bridge ---------------------------------------------------------------

BridgeResult bitstream_bridge(const Netlist& netlist, const BitstreamGenerator& toolchain,
                              const Bitstream& reference, const EncodingDatabase& db) {
  const Conversion conv = convert(toolchain.bitgen(netlist, false), reference, db);
  Netlist out = conv.netlist;
  out.design_name = netlist.design_name;

  std::map<std::string, std::string> site_of;
  std::set<std::string> periphery;
  for (const auto& inst : netlist.instances) {
    if (inst.kind == SiteKind::kSlice) {
      site_of[inst.name] = converted_instance_name(slice_coord(inst));
    } else {
      periphery.insert(inst.name);
      out.instances.push_back(inst);
    }
  }
  auto map_pin = [&](const PinRef& p) {
    if (periphery.count(p.instance)) return p;
    auto it = site_of.find(p.instance);
    if (it == site_of.end()) throw ValidationError("pin on unknown instance " + p.instance);
    if (!out.find_instance(it->second)) {
      auto site = parse_site(it->second);
      out.instances.push_back({it->second, SiteKind::kSlice, clb_tile_name(site->second), it->second, {}, {}});
    }
    return PinRef{it->second, p.pin};
  };

  for (const auto& net : netlist.nets) {
    std::vector<PinRef> off;
    for (const auto& p : net.inpins)
      if (periphery.count(p.instance)) off.push_back(p);
    const bool off_driver = net.outpin && periphery.count(net.outpin->instance);
    if (!off_driver && off.empty()) continue;
    if (off_driver) {
      // Dedicated input wiring: carries no PIPs, so nothing in the bitstream.
      Net n{net.name, net.outpin, {}, {}};
      for (const auto& p : net.inpins) n.inpins.push_back(map_pin(p));
      out.nets.push_back(std::move(n));
      continue;
    }
    Net* target = nullptr;
    if (net.outpin) {
      const PinRef driver = map_pin(*net.outpin);
      for (auto& n : out.nets)
        if (n.outpin == driver) target = &n;
      if (!target) {
        out.nets.push_back({net.name, driver, {}, {}});
        target = &out.nets.back();
      }
    } else {
      out.nets.push_back({net.name, std::nullopt, {}, {}});
      target = &out.nets.back();
    }
    target->inpins.insert(target->inpins.end(), off.begin(), off.end());
  }
  out.canonicalize();
  validate_names(out);
  return {std::move(out), conv.hardware.diagnostics};
}

}  // namespace bitrev
