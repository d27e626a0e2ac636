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

// Public description of the synthetic FPGA fabric: tile grid, switch-matrix
// types and their PIPs, slice shape, and the static wire topology. Nothing
// in this header reveals where configuration lives in a bitstream; that is
// the job of ground_truth.hpp, which only the mock toolchain may use.
//
// Wire naming inside a switch matrix:
//   track sources  N0..N{T-1}, E.., S.., W..   signal arriving from that side
//   track sinks    N0..N{T-1}, E.., S.., W..   signal leaving through that side
//   slice sources  A B C D (LUT outputs), AQ BQ CQ DQ (FF outputs)
//   slice sinks    A1..A4 .. D1..D4 (LUT inputs), AX BX CX DX (FF data)
// A track sink leaving side S of tile (x,y) arrives as track source N of
// tile (x,y-1). Sources and sinks are separate namespaces, so "S0" as a
// source and "S0" as a sink are different wires.

#ifndef BITREV_FABRIC_HPP
#define BITREV_FABRIC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitrev/common.hpp"

namespace bitrev {

struct SliceShape {
  int luts = 4;
  int lut_inputs = 4;
  int ffs = 4;

  int lut_bits() const { return 1 << lut_inputs; }
  bool operator==(const SliceShape&) const = default;
};

struct PipDef {
  std::string source;
  std::string sink;
  bool is_default = false;  // true => zero configuration bits

  bool operator==(const PipDef&) const = default;
};

struct SwitchMatrixType {
  std::uint32_t id = 0;
  std::vector<PipDef> pips;
  /// sink wire -> source wires connectable to it, in PIP-list order.
  std::map<std::string, std::vector<std::string>> sinks;

  std::optional<std::size_t> find(std::string_view source, std::string_view sink) const;
  /// Indices of every PIP that drives `sink`.
  const std::vector<std::size_t>& pips_on_sink(std::string_view sink) const;

  void rebuild_index();

 private:
  std::unordered_map<std::string, std::size_t> by_name_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_sink_;
};

enum class SiteKind { kSlice, kIob, kBlackbox };

std::string_view site_kind_name(SiteKind kind);
std::optional<SiteKind> parse_site_kind(std::string_view name);

enum class PinRole { kLutInput, kLutOutput, kFfOutput, kFfData };

/// A slice pin decoded from its wire name.
struct SlicePin {
  PinRole role;
  int element = 0;  // LUT or FF index
  int input = 0;    // LUT input index (0-based) for kLutInput

  bool is_source() const { return role == PinRole::kLutOutput || role == PinRole::kFfOutput; }
};

std::optional<SlicePin> decode_slice_pin(const SliceShape& shape, std::string_view pin);
std::string slice_pin_name(const SlicePin& pin);
char element_letter(int index);

/// Side of a track wire.
enum class Side { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

struct TrackWire {
  Side side;
  int index;
};

std::optional<TrackWire> decode_track(std::string_view wire, int tracks);
std::string track_name(Side side, int index);
Side opposite(Side side);

std::string sm_tile_name(Coord c);       // INT_X3Y4
std::string clb_tile_name(Coord c);      // CLB_X3Y4
std::string site_name(SiteKind kind, Coord c);  // SLICE_X3Y4, IOB_X3Y4, BB_X3Y4
std::optional<Coord> parse_sm_tile(std::string_view name);
std::optional<Coord> parse_clb_tile(std::string_view name);
std::optional<std::pair<SiteKind, Coord>> parse_site(std::string_view name);

class Fabric {
 public:
  std::string device_id;
  int width = 0;
  int height = 0;
  int tracks = 4;
  SliceShape slice;
  std::uint64_t seed = 0;
  std::vector<SwitchMatrixType> types;
  /// Row-major type id per grid coordinate: placement[y * width + x].
  std::vector<std::uint32_t> placement;

  bool contains(Coord c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  std::size_t sm_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t index_of(Coord c) const { return static_cast<std::size_t>(c.y) * width + c.x; }
  Coord coord_of(std::size_t index) const {
    return {static_cast<int>(index % width), static_cast<int>(index / width)};
  }

  const SwitchMatrixType& type_at(Coord c) const;

  /// Every switch-matrix coordinate in canonical (x, then y) order.
  std::vector<Coord> coords() const;

  /// Where a track sink leaving `c` arrives, or nullopt at the grid edge.
  std::optional<std::pair<Coord, std::string>> static_successor(Coord c,
                                                                std::string_view sink) const;

  /// Copy with default-PIP markers cleared: what a reverse engineer can see.
  Fabric public_view() const;

  void rebuild_indices();
};

/// Lists every PIP of the switch matrix at `c` as (source, sink), including
/// defaults, in the type's stable PIP order. Throws Error for coordinates
/// outside the grid.
std::vector<std::pair<std::string, std::string>> fabric_report(const Fabric& fabric, Coord c);

/// Serializes the public fabric description (no encoding information).
std::string fabric_description_to_text(const Fabric& fabric);
/// Refuses ground-truth files; see ground_truth.hpp for those.
Fabric fabric_description_from_text(std::string_view text);
Fabric load_fabric_description(const std::string& path);
void save_fabric_description(const Fabric& fabric, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace bitrev

#endif  // BITREV_FABRIC_HPP
