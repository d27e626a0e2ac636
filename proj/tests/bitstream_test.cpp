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

#include <cstdio>
#include <filesystem>

#include "bitrev/bitstream.hpp"

namespace bitrev {
namespace {

// Bitwise reflected CRC-32 (polynomial 0xEDB88320).
std::uint32_t reference_crc32(std::span<const std::uint8_t> data) {
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::uint8_t b : data) {
    crc ^= b;
    for (int k = 0; k < 8; ++k) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
  }
  return ~crc;
}

Bitstream sample() {
  Bitstream bs = Bitstream::blank("dev", 32);
  for (std::uint64_t p : {0u, 7u, 8u, 100u, 255u}) bs.set_bit(p, true);
  return bs;
}

TEST(Bitstream, BlankCarriesOneSyncWord) {
  const Bitstream bs = Bitstream::blank("dev", 16);
  EXPECT_EQ(bs.frame_bits(), 128u);
  EXPECT_TRUE(bs.set_positions().empty());
  EXPECT_EQ(find_sync_word(bs.header), bs.sync_word_pos);
  EXPECT_EQ(bs.sync_word_pos % 8, 0u);
  const auto at = bs.sync_word_pos / 8;
  EXPECT_EQ(bs.header[at], 0xAA);
  EXPECT_EQ(bs.header[at + 3], 0x66);
}

TEST(Bitstream, BitsAreLsbFirst) {
  Bitstream bs = Bitstream::blank("dev", 4);
  bs.set_bit(9, true);
  EXPECT_EQ(bs.frames[1], 0x02);
  EXPECT_TRUE(bs.bit(9));
  bs.set_bit(9, false);
  EXPECT_EQ(bs.frames[1], 0x00);
  EXPECT_THROW(bs.bit(32), Error);
  EXPECT_THROW(bs.set_bit(32, true), Error);
}

TEST(Bitstream, SetPositionsSorted) {
  EXPECT_EQ(sample().set_positions(), (BitPositions{0, 7, 8, 100, 255}));
}

TEST(Bitstream, BytesRoundTrip) {
  const Bitstream bs = sample();
  const auto bytes = bitstream_to_bytes(bs);
  EXPECT_EQ(bitstream_from_bytes(bytes), bs);
  ASSERT_GE(bytes.size(), 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "MBIT");
  const std::uint32_t stored = bytes[bytes.size() - 4] | bytes[bytes.size() - 3] << 8 |
                               bytes[bytes.size() - 2] << 16 |
                               static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24;
  EXPECT_EQ(stored, reference_crc32(std::span(bytes).first(bytes.size() - 4)));
}

TEST(Bitstream, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "bitrev_bitstream_test.bit";
  write_bitstream(sample(), path.string());
  EXPECT_EQ(read_bitstream(path.string()), sample());
  std::filesystem::remove(path);
}

TEST(Bitstream, CorruptionIsFormatError) {
  const auto good = bitstream_to_bytes(sample());
  auto flipped = good;
  flipped[flipped.size() / 2] ^= 0x10;
  EXPECT_THROW(bitstream_from_bytes(flipped), FormatError);

  auto magic = good;
  magic[0] = 'X';
  EXPECT_THROW(bitstream_from_bytes(magic), FormatError);

  auto truncated = good;
  truncated.resize(truncated.size() - 5);
  EXPECT_THROW(bitstream_from_bytes(truncated), FormatError);

  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(bitstream_from_bytes(trailing), FormatError);
}

TEST(Bitstream, SyncWordMustBeUnique) {
  std::vector<std::uint8_t> header{0xAA, 0x99, 0x55, 0x66, 0x00, 0xAA, 0x99, 0x55, 0x66};
  EXPECT_THROW(find_sync_word(header), FormatError);
  EXPECT_THROW(find_sync_word(std::vector<std::uint8_t>{1, 2, 3}), FormatError);
  header.resize(4);
  EXPECT_EQ(find_sync_word(header), 0u);
}

TEST(Bitstream, DiffListsChangedBits) {
  const Bitstream a = sample();
  Bitstream b = a;
  b.set_bit(7, false);
  b.set_bit(64, true);
  EXPECT_EQ(diff_bitstreams(a, b), (BitPositions{7, 64}));
  EXPECT_TRUE(diff_bitstreams(a, a).empty());
  EXPECT_THROW(diff_bitstreams(a, Bitstream::blank("other", 32)), ValidationError);
  EXPECT_THROW(diff_bitstreams(a, Bitstream::blank("dev", 8)), ValidationError);
}

}  // namespace
}  // namespace bitrev
