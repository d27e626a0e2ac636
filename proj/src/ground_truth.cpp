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

#include "bitrev/ground_truth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fabric_json.hpp"

namespace bitrev {

namespace {

int ceil_log2(int n) {
  int bits = 0;
  while ((1 << bits) < n) ++bits;
  return bits;
}

// Binomial coefficient, saturating at a large bound.
std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (r > (1ull << 40)) return 1ull << 40;
  }
  return r;
}

struct SinkPlan {
  int sources = 0;
  int defaults = 0;
  int base_size = 0;
  int oversized = 0;  // PIPs that get base_size + 1 bits
};

SinkPlan plan_sink(int sources, int defaults) {
  SinkPlan p;
  p.sources = sources;
  p.defaults = defaults;
  int lower = ceil_log2(sources);
  p.base_size = std::max(lower, 1);
  int configured = sources - defaults;
  // When the minimum size already exceeds the log2 bound every PIP counts as
  // over-provisioned; otherwise a quarter of them get one extra bit.
  p.oversized = p.base_size == lower ? (configured + 3) / 4 : 0;
  return p;
}

int pool_for(const SinkPlan& p) {
  int configured = p.sources - p.defaults;
  if (configured == 0) return 0;
  int pool = p.base_size + (p.oversized > 0 ? 1 : 0);
  while (choose(pool, p.base_size) < static_cast<std::uint64_t>(configured - p.oversized) ||
         choose(pool, p.base_size + 1) < static_cast<std::uint64_t>(p.oversized))
    ++pool;
  return pool;
}

// Draws `count` distinct `size`-subsets of [0, pool).
std::vector<std::vector<int>> draw_subsets(int pool, int size, int count, std::mt19937_64& rng) {
  std::vector<std::vector<int>> out;
  if (count == 0) return out;
  if (choose(pool, size) <= 20000) {
    std::vector<std::vector<int>> all;
    std::vector<int> combo(size);
    for (int i = 0; i < size; ++i) combo[i] = i;
    while (true) {
      all.push_back(combo);
      int i = size - 1;
      while (i >= 0 && combo[i] == pool - size + i) --i;
      if (i < 0) break;
      ++combo[i];
      for (int j = i + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
    }
    deterministic_shuffle(all, rng);
    all.resize(count);
    return all;
  }
  std::set<std::vector<int>> seen;
  std::vector<int> members(pool);
  while (static_cast<int>(out.size()) < count) {
    for (int i = 0; i < pool; ++i) members[i] = i;
    for (int i = 0; i < size; ++i) std::swap(members[i], members[i + uniform_below(rng, pool - i)]);
    std::vector<int> pick(members.begin(), members.begin() + size);
    std::sort(pick.begin(), pick.end());
    if (seen.insert(pick).second) out.push_back(pick);
  }
  return out;
}

struct Vocabulary {
  std::vector<std::string> sinks;    // generation order
  std::vector<std::string> sources;  // canonical order
};

Vocabulary make_vocabulary(int tracks, const SliceShape& shape) {
  Vocabulary v;
  for (int k = 0; k < tracks; ++k)
    for (Side s : {Side::kSouth, Side::kWest, Side::kNorth, Side::kEast})
      v.sinks.push_back(track_name(s, k));
  for (int l = 0; l < shape.luts; ++l)
    for (int j = 0; j < shape.lut_inputs; ++j)
      v.sinks.push_back(slice_pin_name({PinRole::kLutInput, l, j}));
  for (int f = 0; f < shape.ffs; ++f) v.sinks.push_back(slice_pin_name({PinRole::kFfData, f, 0}));

  for (Side s : {Side::kNorth, Side::kEast, Side::kSouth, Side::kWest})
    for (int k = 0; k < tracks; ++k) v.sources.push_back(track_name(s, k));
  for (int l = 0; l < shape.luts; ++l) v.sources.push_back(slice_pin_name({PinRole::kLutOutput, l, 0}));
  for (int f = 0; f < shape.ffs; ++f) v.sources.push_back(slice_pin_name({PinRole::kFfOutput, f, 0}));
  return v;
}

// Structured sources every sink gets first, so that every fabric can leave
// and enter each tile and feed each flip-flop from its own LUT.
std::vector<std::string> backbone_sources(const std::string& sink, int tracks,
                                          const SliceShape& shape,
                                          const std::vector<std::string>& slice_outputs) {
  std::vector<std::string> out;
  if (auto t = decode_track(sink, tracks)) {
    static constexpr Side kTurn[] = {Side::kEast, Side::kSouth, Side::kWest, Side::kNorth};
    // Leaving south: the turn source arrives from the west.
    Side turn = kTurn[static_cast<int>(t->side)];
    out.push_back(track_name(turn, t->index));
    out.push_back(track_name(opposite(t->side), t->index));
    out.push_back(slice_outputs[(static_cast<std::size_t>(t->side) * tracks + t->index) %
                                slice_outputs.size()]);
    return out;
  }
  auto pin = decode_slice_pin(shape, sink);
  if (pin->role == PinRole::kLutInput) {
    out.push_back(track_name(static_cast<Side>((pin->element + pin->input) % 4),
                             pin->element % tracks));
    int ff = (pin->element + shape.ffs - 1) % shape.ffs;
    out.push_back(slice_pin_name({PinRole::kFfOutput, ff, 0}));
  } else {
    if (pin->element < shape.luts)
      out.push_back(slice_pin_name({PinRole::kLutOutput, pin->element, 0}));
    out.push_back(track_name(static_cast<Side>(pin->element % 4), (pin->element + 1) % tracks));
  }
  return out;
}

bool is_u_turn(const std::string& source, const std::string& sink, int tracks) {
  auto s = decode_track(source, tracks);
  auto k = decode_track(sink, tracks);
  return s && k && s->side == k->side && s->index == k->index;
}

void check_spec(const FabricSpec& spec) {
  if (spec.width < 1 || spec.height < 1) throw ValidationError("grid must be at least 1x1");
  if (spec.sm_types.empty()) throw ValidationError("at least one switch-matrix type required");
  if (spec.tracks < 1 || spec.tracks > 16) throw ValidationError("tracks per side must be 1..16");
  if (spec.slice.luts < 1 || spec.slice.luts > 4 || spec.slice.ffs < 1 || spec.slice.ffs > 4)
    throw ValidationError("slices hold 1..4 LUTs and 1..4 flip-flops");
  if (spec.slice.lut_inputs < 2 || spec.slice.lut_inputs > 6)
    throw ValidationError("LUT arity must be 2..6");
  if (!(spec.default_fraction >= 0.0 && spec.default_fraction < 1.0))
    throw ValidationError("default_fraction must lie in [0, 1)");
  for (const auto& t : spec.sm_types)
    if (t.sink_count < 1 || t.pip_count < t.sink_count)
      throw ValidationError("each type needs pip_count >= sink_count >= 1");
}

}  // namespace

FabricSpec FabricSpec::desk() { return FabricSpec{}; }

std::uint32_t FrameGeometry::absolute(Coord c, std::uint32_t local) const {
  std::uint32_t frame = local / row_bits;
  std::uint32_t offset = local % row_bits;
  std::uint32_t column_frame = static_cast<std::uint32_t>(c.x) * frames_per_column + frame;
  return column_frame * frame_bits() + static_cast<std::uint32_t>(c.y) * row_bits + offset;
}

BitPositions EncodingMap::pip_bits(const Fabric& fabric, Coord sm, std::size_t pip) const {
  const auto& local = pip_local.at(fabric.placement.at(fabric.index_of(sm))).at(pip);
  BitPositions out;
  out.reserve(local.size());
  for (auto l : local) out.push_back(geometry.absolute(sm, l));
  return out;
}

BitPositions EncodingMap::lut_bits(Coord tile, int lut) const {
  BitPositions out;
  for (auto l : lut_local.at(lut)) out.push_back(geometry.absolute(tile, l));
  return out;
}

std::uint32_t EncodingMap::ff_bit(Coord tile, int ff) const {
  return geometry.absolute(tile, ff_local.at(ff));
}

std::uint32_t EncodingMap::iob_bit(Coord tile) const { return geometry.absolute(tile, iob_local); }

int minimum_pool_bits(int sources, int defaults) { return pool_for(plan_sink(sources, defaults)); }

GroundTruth generate_fabric(const FabricSpec& spec) {
  check_spec(spec);
  std::mt19937_64 rng(spec.seed);
  const Vocabulary vocab = make_vocabulary(spec.tracks, spec.slice);
  std::vector<std::string> slice_outputs(vocab.sources.end() - spec.slice.luts - spec.slice.ffs,
                                         vocab.sources.end());

  GroundTruth truth;
  Fabric& fabric = truth.fabric;
  fabric.width = spec.width;
  fabric.height = spec.height;
  fabric.tracks = spec.tracks;
  fabric.slice = spec.slice;
  fabric.seed = spec.seed;
  fabric.device_id = "syn" + std::to_string(spec.width) + "x" + std::to_string(spec.height);

  EncodingMap& enc = truth.encoding;
  int sm_region = 0;
  for (const auto& t : spec.sm_types) sm_region = std::max(sm_region, t.bit_budget);

  for (std::size_t type_id = 0; type_id < spec.sm_types.size(); ++type_id) {
    const SmTypeSpec& ts = spec.sm_types[type_id];
    if (ts.sink_count > static_cast<int>(vocab.sinks.size()))
      throw ValidationError("sink_count " + std::to_string(ts.sink_count) +
                            " exceeds the wire vocabulary (" + std::to_string(vocab.sinks.size()) +
                            " sinks)");
    const int sinks = ts.sink_count;

    std::vector<int> per_sink(sinks, ts.pip_count / sinks);
    std::vector<int> order(sinks);
    for (int i = 0; i < sinks; ++i) order[i] = i;
    deterministic_shuffle(order, rng);
    for (int i = 0; i < ts.pip_count % sinks; ++i) ++per_sink[order[i]];

    SwitchMatrixType type;
    type.id = static_cast<std::uint32_t>(type_id);
    std::vector<std::vector<std::size_t>> sink_pips(sinks);
    for (int s = 0; s < sinks; ++s) {
      const std::string& sink = vocab.sinks[s];
      std::vector<std::string> allowed;
      for (const auto& src : vocab.sources)
        if (!is_u_turn(src, sink, spec.tracks)) allowed.push_back(src);
      if (per_sink[s] > static_cast<int>(allowed.size()))
        throw ValidationError("pip_count too large: sink " + sink + " has only " +
                              std::to_string(allowed.size()) + " possible sources");
      std::vector<std::string> chosen;
      for (auto& b : backbone_sources(sink, spec.tracks, spec.slice, slice_outputs))
        if (std::find(allowed.begin(), allowed.end(), b) != allowed.end() &&
            std::find(chosen.begin(), chosen.end(), b) == chosen.end())
          chosen.push_back(b);
      std::vector<std::string> rest;
      for (const auto& a : allowed)
        if (std::find(chosen.begin(), chosen.end(), a) == chosen.end()) rest.push_back(a);
      deterministic_shuffle(rest, rng);
      chosen.insert(chosen.end(), rest.begin(), rest.end());
      chosen.resize(per_sink[s]);
      for (auto& src : chosen) {
        sink_pips[s].push_back(type.pips.size());
        type.pips.push_back({src, sink, false});
      }
    }

    const int default_count =
        static_cast<int>(std::floor(ts.pip_count * spec.default_fraction + 1e-9));
    std::vector<std::size_t> all(type.pips.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    deterministic_shuffle(all, rng);
    for (int i = 0; i < default_count; ++i) type.pips[all[i]].is_default = true;

    std::vector<SinkPlan> plans(sinks);
    std::vector<int> pools(sinks);
    int needed = 0;
    for (int s = 0; s < sinks; ++s) {
      int defaults = 0;
      for (auto p : sink_pips[s]) defaults += type.pips[p].is_default ? 1 : 0;
      plans[s] = plan_sink(static_cast<int>(sink_pips[s].size()), defaults);
      pools[s] = pool_for(plans[s]);
      needed += pools[s];
    }
    if (needed > ts.bit_budget)
      throw ValidationError("bit_budget " + std::to_string(ts.bit_budget) + " of type " +
                            std::to_string(type_id) + " is below the required " +
                            std::to_string(needed) + " bits");
    std::vector<int> growable;
    for (int s = 0; s < sinks; ++s)
      if (pools[s] > 0) growable.push_back(s);
    deterministic_shuffle(growable, rng);
    for (int extra = ts.bit_budget - needed, i = 0; extra > 0 && !growable.empty(); --extra, ++i)
      ++pools[growable[i % growable.size()]];

    std::vector<std::uint32_t> local(ts.bit_budget);
    for (int i = 0; i < ts.bit_budget; ++i) local[i] = static_cast<std::uint32_t>(i);
    deterministic_shuffle(local, rng);

    std::vector<std::vector<std::uint32_t>> pip_local(type.pips.size());
    std::size_t cursor = 0;
    for (int s = 0; s < sinks; ++s) {
      std::vector<std::uint32_t> pool(local.begin() + cursor, local.begin() + cursor + pools[s]);
      cursor += pools[s];
      std::vector<std::size_t> configured;
      for (auto p : sink_pips[s])
        if (!type.pips[p].is_default) configured.push_back(p);
      deterministic_shuffle(configured, rng);
      const SinkPlan& plan = plans[s];
      int normal = static_cast<int>(configured.size()) - plan.oversized;
      auto small = draw_subsets(pools[s], plan.base_size, normal, rng);
      auto big = draw_subsets(pools[s], plan.base_size + 1, plan.oversized, rng);
      for (std::size_t i = 0; i < configured.size(); ++i) {
        const auto& members = static_cast<int>(i) < normal ? small[i] : big[i - normal];
        auto& bits = pip_local[configured[i]];
        for (int m : members) bits.push_back(pool[m]);
        std::sort(bits.begin(), bits.end());
      }
    }
    enc.pip_local.push_back(std::move(pip_local));
    fabric.types.push_back(std::move(type));
  }

  // Slice region: LUT truth-table bits, FF usage bits and the IOB usage bit,
  // scattered in one fabric-wide order.
  const int lut_bits = spec.slice.luts * spec.slice.lut_bits();
  const int slice_region = lut_bits + spec.slice.ffs + 1;
  std::vector<std::uint32_t> slots(slice_region);
  for (int i = 0; i < slice_region; ++i) slots[i] = static_cast<std::uint32_t>(sm_region + i);
  deterministic_shuffle(slots, rng);
  std::size_t cursor = 0;
  enc.lut_local.assign(spec.slice.luts, {});
  for (int l = 0; l < spec.slice.luts; ++l)
    for (int b = 0; b < spec.slice.lut_bits(); ++b) enc.lut_local[l].push_back(slots[cursor++]);
  for (int f = 0; f < spec.slice.ffs; ++f) enc.ff_local.push_back(slots[cursor++]);
  enc.iob_local = slots[cursor++];

  enc.geometry.width = spec.width;
  enc.geometry.height = spec.height;
  enc.geometry.row_bits = 64;
  const std::uint32_t tile_bits = static_cast<std::uint32_t>(sm_region + slice_region);
  enc.geometry.frames_per_column = (tile_bits + enc.geometry.row_bits - 1) / enc.geometry.row_bits;

  const std::size_t types = spec.sm_types.size();
  fabric.placement.resize(fabric.sm_count());
  for (auto& t : fabric.placement) t = static_cast<std::uint32_t>(uniform_below(rng, types));
  if (fabric.sm_count() >= types) {
    for (std::uint32_t t = 0; t < types; ++t) {
      if (std::count(fabric.placement.begin(), fabric.placement.end(), t) > 0) continue;
      while (true) {
        std::size_t at = uniform_below(rng, fabric.sm_count());
        auto current = fabric.placement[at];
        if (std::count(fabric.placement.begin(), fabric.placement.end(), current) > 1) {
          fabric.placement[at] = t;
          break;
        }
      }
    }
  }
  fabric.rebuild_indices();
  return truth;
}

std::string ground_truth_to_text(const GroundTruth& truth) {
  nlohmann::ordered_json j;
  j["format"] = detail::kGroundTruthFormat;
  j["version"] = detail::kFabricVersion;
  j["fabric"] = detail::fabric_to_json(truth.fabric, true);
  const auto& e = truth.encoding;
  nlohmann::ordered_json enc;
  enc["geometry"] = {{"width", e.geometry.width},
                     {"height", e.geometry.height},
                     {"row_bits", e.geometry.row_bits},
                     {"frames_per_column", e.geometry.frames_per_column}};
  enc["pip_local"] = e.pip_local;
  enc["lut_local"] = e.lut_local;
  enc["ff_local"] = e.ff_local;
  enc["iob_local"] = e.iob_local;
  j["encoding"] = std::move(enc);
  return j.dump(1) + "\n";
}

GroundTruth ground_truth_from_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("ground-truth file is not valid JSON: ") + e.what());
  }
  if (j.value("format", std::string()) != detail::kGroundTruthFormat)
    throw FormatError("not a ground-truth file");
  if (j.value("version", 0) != detail::kFabricVersion)
    throw FormatError("unsupported ground-truth version");
  GroundTruth truth;
  truth.fabric = detail::fabric_from_json(j.at("fabric"), true);
  try {
    const auto& enc = j.at("encoding");
    const auto& g = enc.at("geometry");
    truth.encoding.geometry = {g.at("width").get<int>(), g.at("height").get<int>(),
                               g.at("row_bits").get<std::uint32_t>(),
                               g.at("frames_per_column").get<std::uint32_t>()};
    enc.at("pip_local").get_to(truth.encoding.pip_local);
    enc.at("lut_local").get_to(truth.encoding.lut_local);
    enc.at("ff_local").get_to(truth.encoding.ff_local);
    truth.encoding.iob_local = enc.at("iob_local").get<std::uint32_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed ground-truth encoding: ") + e.what());
  }
  return truth;
}

GroundTruth load_ground_truth(const std::string& path) {
  return ground_truth_from_text(read_text_file(path));
}

void save_ground_truth(const GroundTruth& truth, const std::string& path) {
  write_text_file(path, ground_truth_to_text(truth));
}

}  // namespace bitrev
