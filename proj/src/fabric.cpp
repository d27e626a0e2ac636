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

#include "bitrev/fabric.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fabric_json.hpp"

namespace bitrev {

namespace {

std::string pip_key(std::string_view source, std::string_view sink) {
  std::string key;
  key.reserve(source.size() + sink.size() + 1);
  key.append(source).push_back('\x1f');
  key.append(sink);
  return key;
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// "<prefix>X<int>Y<int>"
std::optional<Coord> parse_xy(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  name.remove_prefix(prefix.size());
  if (name.empty() || name[0] != 'X') return std::nullopt;
  auto ypos = name.find('Y');
  if (ypos == std::string_view::npos) return std::nullopt;
  auto x = parse_int(name.substr(1, ypos - 1));
  auto y = parse_int(name.substr(ypos + 1));
  if (!x || !y || *x < 0 || *y < 0) return std::nullopt;
  return Coord{*x, *y};
}

std::string xy_name(std::string_view prefix, Coord c) {
  return std::string(prefix) + "X" + std::to_string(c.x) + "Y" + std::to_string(c.y);
}

constexpr char kSideLetters[] = {'N', 'E', 'S', 'W'};

}  // namespace

std::optional<std::size_t> SwitchMatrixType::find(std::string_view source,
                                                  std::string_view sink) const {
  auto it = by_name_.find(pip_key(source, sink));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::size_t>& SwitchMatrixType::pips_on_sink(std::string_view sink) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = by_sink_.find(std::string(sink));
  return it == by_sink_.end() ? kEmpty : it->second;
}

void SwitchMatrixType::rebuild_index() {
  by_name_.clear();
  by_sink_.clear();
  sinks.clear();
  for (std::size_t i = 0; i < pips.size(); ++i) {
    const auto& p = pips[i];
    if (!by_name_.emplace(pip_key(p.source, p.sink), i).second)
      throw ValidationError("duplicate PIP " + p.source + " -> " + p.sink + " in type " +
                            std::to_string(id));
    by_sink_[p.sink].push_back(i);
    sinks[p.sink].push_back(p.source);
  }
}

std::string_view site_kind_name(SiteKind kind) {
  switch (kind) {
    case SiteKind::kSlice: return "SLICE";
    case SiteKind::kIob: return "IOB";
    case SiteKind::kBlackbox: return "BLACKBOX";
  }
  return "?";
}

std::optional<SiteKind> parse_site_kind(std::string_view name) {
  if (name == "SLICE") return SiteKind::kSlice;
  if (name == "IOB") return SiteKind::kIob;
  if (name == "BLACKBOX") return SiteKind::kBlackbox;
  return std::nullopt;
}

char element_letter(int index) { return static_cast<char>('A' + index); }

std::optional<SlicePin> decode_slice_pin(const SliceShape& shape, std::string_view pin) {
  if (pin.empty() || pin[0] < 'A' || pin[0] > 'Z') return std::nullopt;
  int element = pin[0] - 'A';
  std::string_view rest = pin.substr(1);
  if (rest.empty()) {
    if (element < shape.luts) return SlicePin{PinRole::kLutOutput, element, 0};
    return std::nullopt;
  }
  if (rest == "Q") {
    if (element < shape.ffs) return SlicePin{PinRole::kFfOutput, element, 0};
    return std::nullopt;
  }
  if (rest == "X") {
    if (element < shape.ffs) return SlicePin{PinRole::kFfData, element, 0};
    return std::nullopt;
  }
  auto input = parse_int(rest);
  if (input && element < shape.luts && *input >= 1 && *input <= shape.lut_inputs)
    return SlicePin{PinRole::kLutInput, element, *input - 1};
  return std::nullopt;
}

std::string slice_pin_name(const SlicePin& pin) {
  std::string name(1, element_letter(pin.element));
  switch (pin.role) {
    case PinRole::kLutOutput: break;
    case PinRole::kFfOutput: name += 'Q'; break;
    case PinRole::kFfData: name += 'X'; break;
    case PinRole::kLutInput: name += std::to_string(pin.input + 1); break;
  }
  return name;
}

std::optional<TrackWire> decode_track(std::string_view wire, int tracks) {
  if (wire.size() < 2) return std::nullopt;
  int side = -1;
  for (int i = 0; i < 4; ++i)
    if (wire[0] == kSideLetters[i]) side = i;
  if (side < 0) return std::nullopt;
  auto index = parse_int(wire.substr(1));
  if (!index || *index < 0 || *index >= tracks) return std::nullopt;
  return TrackWire{static_cast<Side>(side), *index};
}

std::string track_name(Side side, int index) {
  return std::string(1, kSideLetters[static_cast<int>(side)]) + std::to_string(index);
}

Side opposite(Side side) { return static_cast<Side>((static_cast<int>(side) + 2) % 4); }

std::string sm_tile_name(Coord c) { return xy_name("INT_", c); }
std::string clb_tile_name(Coord c) { return xy_name("CLB_", c); }

std::string site_name(SiteKind kind, Coord c) {
  switch (kind) {
    case SiteKind::kSlice: return xy_name("SLICE_", c);
    case SiteKind::kIob: return xy_name("IOB_", c);
    case SiteKind::kBlackbox: return xy_name("BB_", c);
  }
  return {};
}

std::optional<Coord> parse_sm_tile(std::string_view name) { return parse_xy(name, "INT_"); }
std::optional<Coord> parse_clb_tile(std::string_view name) { return parse_xy(name, "CLB_"); }

std::optional<std::pair<SiteKind, Coord>> parse_site(std::string_view name) {
  if (auto c = parse_xy(name, "SLICE_")) return std::pair{SiteKind::kSlice, *c};
  if (auto c = parse_xy(name, "IOB_")) return std::pair{SiteKind::kIob, *c};
  if (auto c = parse_xy(name, "BB_")) return std::pair{SiteKind::kBlackbox, *c};
  return std::nullopt;
}

const SwitchMatrixType& Fabric::type_at(Coord c) const {
  if (!contains(c)) throw Error("coordinate " + sm_tile_name(c) + " outside the grid");
  return types.at(placement.at(index_of(c)));
}

std::vector<Coord> Fabric::coords() const {
  std::vector<Coord> out;
  out.reserve(sm_count());
  for (int x = 0; x < width; ++x)
    for (int y = 0; y < height; ++y) out.push_back({x, y});
  return out;
}

std::optional<std::pair<Coord, std::string>> Fabric::static_successor(Coord c,
                                                                      std::string_view sink) const {
  auto track = decode_track(sink, tracks);
  if (!track) return std::nullopt;
  Coord n = c;
  switch (track->side) {
    case Side::kNorth: ++n.y; break;
    case Side::kSouth: --n.y; break;
    case Side::kEast: ++n.x; break;
    case Side::kWest: --n.x; break;
  }
  if (!contains(n)) return std::nullopt;
  return std::pair{n, track_name(opposite(track->side), track->index)};
}

Fabric Fabric::public_view() const {
  Fabric copy = *this;
  for (auto& type : copy.types)
    for (auto& pip : type.pips) pip.is_default = false;
  copy.rebuild_indices();
  return copy;
}

void Fabric::rebuild_indices() {
  for (auto& type : types) type.rebuild_index();
}

std::vector<std::pair<std::string, std::string>> fabric_report(const Fabric& fabric, Coord c) {
  const auto& type = fabric.type_at(c);
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(type.pips.size());
  for (const auto& pip : type.pips) out.emplace_back(pip.source, pip.sink);
  return out;
}

namespace detail {

nlohmann::ordered_json fabric_to_json(const Fabric& fabric, bool with_defaults) {
  nlohmann::ordered_json j;
  j["device"] = fabric.device_id;
  j["width"] = fabric.width;
  j["height"] = fabric.height;
  j["tracks"] = fabric.tracks;
  j["seed"] = fabric.seed;
  j["slice"] = {{"luts", fabric.slice.luts},
                {"lut_inputs", fabric.slice.lut_inputs},
                {"ffs", fabric.slice.ffs}};
  auto types = nlohmann::ordered_json::array();
  for (const auto& type : fabric.types) {
    nlohmann::ordered_json t;
    t["id"] = type.id;
    auto pips = nlohmann::ordered_json::array();
    auto defaults = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < type.pips.size(); ++i) {
      pips.push_back({type.pips[i].source, type.pips[i].sink});
      if (type.pips[i].is_default) defaults.push_back(i);
    }
    t["pips"] = std::move(pips);
    if (with_defaults) t["defaults"] = std::move(defaults);
    types.push_back(std::move(t));
  }
  j["types"] = std::move(types);
  j["placement"] = fabric.placement;
  return j;
}

Fabric fabric_from_json(const nlohmann::json& j, bool with_defaults) {
  try {
    Fabric f;
    f.device_id = j.at("device").get<std::string>();
    f.width = j.at("width").get<int>();
    f.height = j.at("height").get<int>();
    f.tracks = j.at("tracks").get<int>();
    f.seed = j.at("seed").get<std::uint64_t>();
    const auto& s = j.at("slice");
    f.slice = {s.at("luts").get<int>(), s.at("lut_inputs").get<int>(), s.at("ffs").get<int>()};
    for (const auto& t : j.at("types")) {
      SwitchMatrixType type;
      type.id = t.at("id").get<std::uint32_t>();
      for (const auto& p : t.at("pips"))
        type.pips.push_back({p.at(0).get<std::string>(), p.at(1).get<std::string>(), false});
      if (with_defaults)
        for (const auto& d : t.at("defaults")) type.pips.at(d.get<std::size_t>()).is_default = true;
      f.types.push_back(std::move(type));
    }
    f.placement = j.at("placement").get<std::vector<std::uint32_t>>();
    if (f.width <= 0 || f.height <= 0 || f.placement.size() != f.sm_count())
      throw FormatError("fabric grid and placement disagree");
    for (auto t : f.placement)
      if (t >= f.types.size()) throw FormatError("placement names unknown type " + std::to_string(t));
    for (std::size_t i = 0; i < f.types.size(); ++i)
      if (f.types[i].id != i) throw FormatError("switch-matrix type ids must be dense");
    f.rebuild_indices();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed fabric description: ") + e.what());
  }
}

}  // namespace detail

std::string fabric_description_to_text(const Fabric& fabric) {
  nlohmann::ordered_json j;
  j["format"] = detail::kFabricFormat;
  j["version"] = detail::kFabricVersion;
  j["fabric"] = detail::fabric_to_json(fabric, false);
  return j.dump(1) + "\n";
}

Fabric fabric_description_from_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("fabric description is not valid JSON: ") + e.what());
  }
  auto format = j.value("format", std::string());
  if (format == detail::kGroundTruthFormat)
    throw FormatError("refusing to load a ground-truth file as a fabric description");
  if (format != detail::kFabricFormat) throw FormatError("not a fabric description");
  if (j.value("version", 0) != detail::kFabricVersion)
    throw FormatError("unsupported fabric description version");
  return detail::fabric_from_json(j.at("fabric"), false);
}

Fabric load_fabric_description(const std::string& path) {
  return fabric_description_from_text(read_text_file(path));
}

void save_fabric_description(const Fabric& fabric, const std::string& path) {
  write_text_file(path, fabric_description_to_text(fabric));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("short write to " + path);
}

}  // namespace bitrev
