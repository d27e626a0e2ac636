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

#include "bitrev/database.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "binio.hpp"

namespace bitrev {

namespace {

constexpr std::uint8_t kMagic[4] = {'B', 'R', 'D', 'B'};

enum Section : std::uint32_t {
  kMeta = 1,
  kTypes = 2,
  kReferences = 3,
  kDefaults = 4,
  kLuts = 5,
  kFfs = 6,
};

void check_bit(const EncodingDatabase& db, std::int64_t pos, std::size_t tile) {
  if (pos < 0 || static_cast<std::uint64_t>(pos) >= db.frame_bytes * 8) {
    throw Error("position " + std::to_string(pos) + " for tile " + std::to_string(tile) +
                " lies outside the configuration frames");
  }
}

}  // namespace

std::size_t EncodingDatabase::index_of(Coord c) const {
  if (!contains(c)) throw Error("tile (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                                ") is outside the database grid");
  return static_cast<std::size_t>(c.y) * width + c.x;
}

bool EncodingDatabase::is_default(std::size_t tile, std::uint32_t pip) const {
  const auto& d = type_of(tile).defaults;
  return std::binary_search(d.begin(), d.end(), pip);
}

std::optional<std::uint32_t> EncodingDatabase::find_pip(std::size_t tile, std::string_view source,
                                                        std::string_view sink) const {
  const auto& names = type_of(tile).pip_names;
  for (std::uint32_t i = 0; i < names.size(); ++i)
    if (names[i].first == source && names[i].second == sink) return i;
  return std::nullopt;
}

Fabric EncodingDatabase::public_fabric() const {
  Fabric f;
  f.device_id = device_id;
  f.width = width;
  f.height = height;
  f.tracks = tracks;
  f.slice = slice;
  f.placement = placement;
  for (std::uint32_t t = 0; t < types.size(); ++t) {
    SwitchMatrixType type;
    type.id = t;
    for (const auto& [src, sink] : types[t].pip_names) type.pips.push_back({src, sink, false});
    f.types.push_back(std::move(type));
  }
  f.rebuild_indices();
  return f;
}

BitPositions EncodingDatabase::extrapolate(std::size_t tile, std::uint32_t pip) const {
  const TypeTable& type = type_of(tile);
  if (pip >= type.distances.size()) throw Error("PIP index " + std::to_string(pip) + " out of range");
  const auto& dist = type.distances[pip];
  if (dist.empty()) throw Error("PIP " + std::to_string(pip) + " is a default PIP with no bits");
  const BitPositions& ref = reference_positions.at(tile);
  if (ref.empty()) throw Error("no reference position recorded for tile " + std::to_string(tile));
  BitPositions out;
  out.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    std::int64_t pos = static_cast<std::int64_t>(ref[std::min(i, ref.size() - 1)]) + dist[i];
    check_bit(*this, pos, tile);
    out.push_back(static_cast<std::uint32_t>(pos));
  }
  return out;
}

void EncodingDatabase::build_index() {
  const std::uint64_t frame_bits = frame_bytes * 8;
  pip_cache_.assign(tile_count(), {});
  std::vector<std::uint32_t> counts(frame_bits + 1, 0);
  auto visit = [&](auto&& emit) {
    for (std::size_t t = 0; t < tile_count(); ++t) {
      const auto& type = type_of(t);
      for (std::uint32_t p = 0; p < type.distances.size(); ++p)
        for (auto b : pip_cache_[t][p]) emit(b, BitOwner{BitOwner::Kind::kPip, std::uint32_t(t), p, 0});
      if (t < lut_map.size())
        for (std::uint32_t l = 0; l < lut_map[t].size(); ++l)
          for (std::uint32_t i = 0; i < lut_map[t][l].size(); ++i)
            emit(lut_map[t][l][i], BitOwner{BitOwner::Kind::kLut, std::uint32_t(t), l, i});
      if (t < ff_map.size())
        for (std::uint32_t f = 0; f < ff_map[t].size(); ++f)
          emit(ff_map[t][f], BitOwner{BitOwner::Kind::kFf, std::uint32_t(t), f, 0});
    }
  };

  for (std::size_t t = 0; t < tile_count(); ++t) {
    const auto& type = type_of(t);
    pip_cache_[t].resize(type.distances.size());
    for (std::uint32_t p = 0; p < type.distances.size(); ++p)
      if (!type.distances[p].empty()) pip_cache_[t][p] = extrapolate(t, p);
  }
  visit([&](std::uint32_t b, const BitOwner& o) {
    check_bit(*this, b, o.tile);
    ++counts[b];
  });
  owners_offset_.assign(frame_bits + 1, 0);
  for (std::uint64_t b = 0; b < frame_bits; ++b) owners_offset_[b + 1] = owners_offset_[b] + counts[b];
  owners_.resize(owners_offset_.back());
  std::vector<std::uint32_t> fill(owners_offset_.begin(), owners_offset_.end() - 1);
  visit([&](std::uint32_t b, const BitOwner& o) { owners_[fill[b]++] = o; });
}

std::span<const BitOwner> EncodingDatabase::owners(std::uint32_t bit) const {
  if (!indexed()) throw Error("database index not built");
  if (bit + 1 >= owners_offset_.size()) return {};
  return std::span(owners_).subspan(owners_offset_[bit], owners_offset_[bit + 1] - owners_offset_[bit]);
}

const BitPositions& EncodingDatabase::pip_bits(std::size_t tile, std::uint32_t pip) const {
  if (!indexed()) throw Error("database index not built");
  return pip_cache_.at(tile).at(pip);
}

bool EncodingDatabase::operator==(const EncodingDatabase& o) const {
  return device_id == o.device_id && width == o.width && height == o.height &&
         frame_bytes == o.frame_bytes && tracks == o.tracks && slice == o.slice && placement == o.placement &&
         types == o.types && reference_positions == o.reference_positions && lut_map == o.lut_map &&
         ff_map == o.ff_map;
}

// ---------------------------------------------------------------------------
// Serialization

std::vector<std::uint8_t> database_to_bytes(const EncodingDatabase& db) {
  detail::ByteWriter w;
  w.bytes(kMagic);
  w.u16(kDatabaseVersion);
  auto section = [&](Section id, auto&& body) {
    w.u32(id);
    const std::size_t len_at = w.size();
    w.u32(0);
    body();
    w.patch_u32(len_at, static_cast<std::uint32_t>(w.size() - len_at - 4));
  };
  auto positions = [&](const BitPositions& v) {
    w.u32(static_cast<std::uint32_t>(v.size()));
    for (auto b : v) w.u32(b);
  };

  section(kMeta, [&] {
    w.str16(db.device_id);
    w.u32(static_cast<std::uint32_t>(db.width));
    w.u32(static_cast<std::uint32_t>(db.height));
    w.u64(db.frame_bytes);
    w.u32(static_cast<std::uint32_t>(db.tracks));
    w.u32(static_cast<std::uint32_t>(db.slice.luts));
    w.u32(static_cast<std::uint32_t>(db.slice.lut_inputs));
    w.u32(static_cast<std::uint32_t>(db.slice.ffs));
    w.u32(static_cast<std::uint32_t>(db.placement.size()));
    for (auto t : db.placement) w.u32(t);
  });
  section(kTypes, [&] {
    w.u32(static_cast<std::uint32_t>(db.types.size()));
    for (const auto& t : db.types) {
      w.u32(t.reference_pip);
      if (t.distances.size() != t.pip_names.size())
        throw Error("database type table has names and distances of different lengths");
      w.u32(static_cast<std::uint32_t>(t.distances.size()));
      for (std::size_t p = 0; p < t.distances.size(); ++p) {
        const auto& d = t.distances[p];
        w.str16(t.pip_names[p].first);
        w.str16(t.pip_names[p].second);
        w.u32(static_cast<std::uint32_t>(d.size()));
        for (auto v : d) w.i64(v);
      }
    }
  });
  section(kReferences, [&] {
    w.u32(static_cast<std::uint32_t>(db.reference_positions.size()));
    for (const auto& r : db.reference_positions) positions(r);
  });
  section(kDefaults, [&] {
    w.u32(static_cast<std::uint32_t>(db.types.size()));
    for (const auto& t : db.types) {
      w.u32(static_cast<std::uint32_t>(t.defaults.size()));
      for (auto p : t.defaults) w.u32(p);
    }
  });
  section(kLuts, [&] {
    w.u32(static_cast<std::uint32_t>(db.lut_map.size()));
    for (const auto& tile : db.lut_map) {
      w.u32(static_cast<std::uint32_t>(tile.size()));
      for (const auto& l : tile) positions(l);
    }
  });
  section(kFfs, [&] {
    w.u32(static_cast<std::uint32_t>(db.ff_map.size()));
    for (const auto& tile : db.ff_map) positions(tile);
  });
  w.u32(detail::crc32_of(w.data()));
  return std::move(w.data());
}

EncodingDatabase database_from_bytes(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "database");
  auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic)))
    throw FormatError("not an encoding database (bad magic)");
  if (auto v = r.u16(); v != kDatabaseVersion)
    throw FormatError("database version " + std::to_string(v) + " is not supported (expected " +
                      std::to_string(kDatabaseVersion) + ")");
  if (bytes.size() < 4) throw FormatError("database truncated");
  const std::uint32_t stored_crc =
      static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
      static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8 |
      static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16 |
      static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24;
  if (stored_crc != detail::crc32_of(bytes.first(bytes.size() - 4)))
    throw FormatError("database checksum mismatch");

  EncodingDatabase db;
  auto section = [&](Section id, auto&& body) {
    if (r.u32() != id) throw FormatError("database section " + std::to_string(id) + " missing");
    const std::uint32_t len = r.u32();
    const std::size_t start = r.pos();
    body();
    if (r.pos() - start != len)
      throw FormatError("database section " + std::to_string(id) + " has the wrong length");
  };
  auto positions = [&] {
    BitPositions v(r.count(4));
    for (auto& b : v) b = r.u32();
    return v;
  };

  section(kMeta, [&] {
    db.device_id = r.str16();
    db.width = static_cast<int>(r.u32());
    db.height = static_cast<int>(r.u32());
    db.frame_bytes = r.u64();
    db.tracks = static_cast<int>(r.u32());
    db.slice.luts = static_cast<int>(r.u32());
    db.slice.lut_inputs = static_cast<int>(r.u32());
    db.slice.ffs = static_cast<int>(r.u32());
    db.placement.resize(r.count(4));
    for (auto& t : db.placement) t = r.u32();
  });
  section(kTypes, [&] {
    db.types.resize(r.count(8));
    for (auto& t : db.types) {
      t.reference_pip = r.u32();
      t.distances.resize(r.count(8));
      t.pip_names.resize(t.distances.size());
      for (std::size_t p = 0; p < t.distances.size(); ++p) {
        auto& d = t.distances[p];
        t.pip_names[p].first = r.str16();
        t.pip_names[p].second = r.str16();
        d.resize(r.count(8));
        for (auto& v : d) v = r.i64();
      }
    }
  });
  section(kReferences, [&] {
    db.reference_positions.resize(r.count(4));
    for (auto& p : db.reference_positions) p = positions();
  });
  section(kDefaults, [&] {
    if (r.u32() != db.types.size()) throw FormatError("database defaults/type count mismatch");
    for (auto& t : db.types) {
      t.defaults.resize(r.count(4));
      for (auto& p : t.defaults) p = r.u32();
    }
  });
  section(kLuts, [&] {
    db.lut_map.resize(r.count(4));
    for (auto& tile : db.lut_map) {
      tile.resize(r.count(4));
      for (auto& l : tile) l = positions();
    }
  });
  section(kFfs, [&] {
    db.ff_map.resize(r.count(4));
    for (auto& tile : db.ff_map) tile = positions();
  });
  r.u32();  // checksum, verified above
  if (r.remaining() != 0) throw FormatError("trailing bytes after database checksum");

  if (db.width < 0 || db.height < 0 ||
      db.placement.size() != static_cast<std::size_t>(db.width) * static_cast<std::size_t>(db.height))
    throw FormatError("database placement does not cover the grid");
  for (auto t : db.placement)
    if (t >= db.types.size()) throw FormatError("database placement names an unknown type");
  for (const auto& t : db.types)
    if (!t.distances.empty() && t.reference_pip >= t.distances.size())
      throw FormatError("database reference PIP out of range");
  if (db.reference_positions.size() != db.placement.size())
    throw FormatError("database reference table does not cover the grid");
  try {
    db.build_index();
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("inconsistent database: ") + e.what());
  }
  return db;
}

void save_database(const EncodingDatabase& db, const std::string& path) {
  auto bytes = database_to_bytes(db);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path);
}

EncodingDatabase load_database(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
  return database_from_bytes(bytes);
}

}  // namespace bitrev
