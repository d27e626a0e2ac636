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

#include <filesystem>

#include "bitrev/database.hpp"
#include "fixtures.hpp"

namespace bitrev {
namespace {

using testing::small;

TEST(Database, BytesRoundTrip) {
  const auto bytes = database_to_bytes(small().db);
  const EncodingDatabase back = database_from_bytes(bytes);
  EXPECT_EQ(back, small().db);
  EXPECT_TRUE(back.indexed());
  EXPECT_EQ(database_to_bytes(back), bytes);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "BRDB");
}

TEST(Database, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "bitrev_database_test.db";
  save_database(small().db, path.string());
  EXPECT_EQ(load_database(path.string()), small().db);
  std::filesystem::remove(path);
  EXPECT_THROW(load_database(path.string()), Error);
}

TEST(Database, RejectsCorruptFiles) {
  const auto good = database_to_bytes(small().db);

  auto magic = good;
  magic[1] = 'X';
  EXPECT_THROW(database_from_bytes(magic), FormatError);

  auto version = good;
  version[4] = 9;
  EXPECT_THROW(database_from_bytes(version), FormatError);

  auto flipped = good;
  flipped[good.size() / 3] ^= 0x01;
  EXPECT_THROW(database_from_bytes(flipped), FormatError);

  for (std::size_t keep : {std::size_t{3}, std::size_t{8}, good.size() / 2, good.size() - 1}) {
    auto truncated = good;
    truncated.resize(keep);
    EXPECT_THROW(database_from_bytes(truncated), FormatError) << keep;
  }
}

TEST(Database, RejectsInconsistentTables) {
  EncodingDatabase db = small().db;
  db.placement[0] = 99;
  EXPECT_THROW(database_from_bytes(database_to_bytes(db)), FormatError);

  db = small().db;
  db.reference_positions.pop_back();
  EXPECT_THROW(database_from_bytes(database_to_bytes(db)), FormatError);

  db = small().db;
  db.reference_positions[0][0] = static_cast<std::uint32_t>(db.frame_bytes * 8 + 5);
  EXPECT_THROW(database_from_bytes(database_to_bytes(db)), FormatError);
}

TEST(Database, IndexListsEveryOwner) {
  const EncodingDatabase& db = small().db;
  for (std::size_t tile = 0; tile < db.tile_count(); tile += 5) {
    const auto& type = db.type_of(tile);
    for (std::uint32_t p = 0; p < type.distances.size(); ++p) {
      if (db.is_default(tile, p)) {
        EXPECT_TRUE(db.pip_bits(tile, p).empty());
        continue;
      }
      EXPECT_EQ(db.pip_bits(tile, p), db.extrapolate(tile, p));
      for (auto b : db.pip_bits(tile, p)) {
        bool found = false;
        for (const auto& o : db.owners(b))
          found |= o.kind == BitOwner::Kind::kPip && o.tile == tile && o.element == p;
        EXPECT_TRUE(found) << tile << " " << p << " bit " << b;
      }
    }
    for (int l = 0; l < db.slice.luts; ++l)
      for (std::uint32_t slot = 0; slot < db.lut_map[tile][l].size(); ++slot) {
        const auto owners = db.owners(db.lut_map[tile][l][slot]);
        ASSERT_EQ(owners.size(), 1u);
        EXPECT_EQ(owners[0].kind, BitOwner::Kind::kLut);
        EXPECT_EQ(owners[0].slot, slot);
      }
  }
  EXPECT_TRUE(db.owners(static_cast<std::uint32_t>(db.frame_bytes * 8 + 100)).empty());
}

TEST(Database, PublicFabricAndLookups) {
  const EncodingDatabase& db = small().db;
  Fabric f = db.public_fabric();
  f.seed = small().fabric.seed;  // the database does not record the generator seed
  EXPECT_EQ(fabric_description_to_text(f), fabric_description_to_text(small().fabric));
  const std::size_t tile = db.index_of({2, 4});
  const auto& [src, sink] = db.type_of(tile).pip_names[17];
  EXPECT_EQ(db.find_pip(tile, src, sink), 17u);
  EXPECT_FALSE(db.find_pip(tile, "A", "A"));
  EXPECT_THROW(db.index_of({6, 0}), Error);
  EXPECT_EQ(db.coord_of(tile), (Coord{2, 4}));
}

TEST(Database, UnindexedAccessThrows) {
  EncodingDatabase db = small().db;  // copying keeps the index
  EXPECT_TRUE(db.indexed());
  EncodingDatabase blank;
  EXPECT_FALSE(blank.indexed());
  EXPECT_THROW(blank.owners(0), Error);
}

}  // namespace
}  // namespace bitrev
