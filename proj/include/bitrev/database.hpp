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

// The recovered encoding database. PIP positions are stored once per
// switch-matrix type as offsets from a reference PIP, plus one absolute
// reference vector per switch matrix:
//
//   pos(sm, pip)[i] = reference_position(sm)[min(i, r-1)] + distance(type, pip)[i]
//
// where r is the reference PIP's bit count. The on-disk layout is described
// in docs/database-format.md.

#ifndef BITREV_DATABASE_HPP
#define BITREV_DATABASE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitrev/common.hpp"
#include "bitrev/fabric.hpp"

namespace bitrev {

inline constexpr std::uint16_t kDatabaseVersion = 1;

struct TypeTable {
  /// (source, sink) per PIP, in report order.
  std::vector<std::pair<std::string, std::string>> pip_names;
  std::uint32_t reference_pip = 0;
  /// [pip] element-wise offsets from the reference PIP; empty for defaults.
  std::vector<std::vector<std::int64_t>> distances;
  /// Sorted indices of PIPs whose template produced no bit toggle.
  std::vector<std::uint32_t> defaults;

  bool operator==(const TypeTable&) const = default;
};

/// An object that owns a configuration bit.
struct BitOwner {
  enum class Kind : std::uint8_t { kPip, kLut, kFf };
  Kind kind;
  std::uint32_t tile;     // grid index
  std::uint32_t element;  // PIP index, LUT index or FF index
  std::uint32_t slot;     // truth-table entry for LUT bits, 0 otherwise
};

class EncodingDatabase {
 public:
  std::string device_id;
  int width = 0;
  int height = 0;
  std::uint64_t frame_bytes = 0;
  int tracks = 0;
  SliceShape slice;
  /// Type id per grid index (row-major, same as Fabric::placement).
  std::vector<std::uint32_t> placement;
  std::vector<TypeTable> types;
  /// [grid index] absolute positions of the type's reference PIP.
  std::vector<BitPositions> reference_positions;
  /// [grid index][lut] positions ordered by truth-table index.
  std::vector<std::vector<BitPositions>> lut_map;
  /// [grid index][ff] usage bit.
  std::vector<std::vector<std::uint32_t>> ff_map;

  std::size_t tile_count() const { return placement.size(); }
  std::size_t index_of(Coord c) const;
  Coord coord_of(std::size_t index) const {
    return {static_cast<int>(index % width), static_cast<int>(index / width)};
  }
  bool contains(Coord c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
  const TypeTable& type_of(std::size_t tile) const { return types.at(placement.at(tile)); }
  bool is_default(std::size_t tile, std::uint32_t pip) const;
  /// PIP index by name within the type at `tile`.
  std::optional<std::uint32_t> find_pip(std::size_t tile, std::string_view source,
                                        std::string_view sink) const;

  /// The public fabric description implied by the database: grid, names,
  /// wire topology. Sufficient for net reconstruction.
  Fabric public_fabric() const;

  /// Reconstructs absolute positions by reference plus distance. Throws
  /// Error for default PIPs and for positions outside the frames.
  BitPositions extrapolate(std::size_t tile, std::uint32_t pip) const;

  /// Builds the inverse bit index and caches every PIP's positions. Called
  /// by load_database and by the pipeline; must be called again after
  /// editing the tables by hand.
  void build_index();
  bool indexed() const { return !owners_offset_.empty(); }
  std::span<const BitOwner> owners(std::uint32_t bit) const;
  const BitPositions& pip_bits(std::size_t tile, std::uint32_t pip) const;

  /// Compares stored tables only; the derived index is ignored.
  bool operator==(const EncodingDatabase& other) const;

 private:
  std::vector<std::uint32_t> owners_offset_;  // CSR offsets, size frame_bits + 1
  std::vector<BitOwner> owners_;
  std::vector<std::vector<BitPositions>> pip_cache_;  // [tile][pip]
};

std::vector<std::uint8_t> database_to_bytes(const EncodingDatabase& db);
/// Throws FormatError on bad magic, unsupported version, truncation or a
/// checksum mismatch. The returned database is indexed.
EncodingDatabase database_from_bytes(std::span<const std::uint8_t> bytes);
void save_database(const EncodingDatabase& db, const std::string& path);
EncodingDatabase load_database(const std::string& path);

}  // namespace bitrev

#endif  // BITREV_DATABASE_HPP
