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

// Bitstream container. On disk:
//
//   "MBIT" | u16 version | u16 len + device_id | u32 header_len | header
//          | u32 frames_len | frames | u32 crc32 (of everything before it)
//
// All integers little-endian. Bit position b addresses frames[b / 8],
// bit b % 8, LSB first.

#ifndef BITREV_BITSTREAM_HPP
#define BITREV_BITSTREAM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bitrev/common.hpp"

namespace bitrev {

inline constexpr std::uint32_t kSyncWord = 0xAA995566;
inline constexpr std::uint16_t kBitstreamVersion = 1;

struct Bitstream {
  std::string device_id;
  std::vector<std::uint8_t> header;
  /// Bit offset of the sync word inside the header.
  std::uint64_t sync_word_pos = 0;
  std::vector<std::uint8_t> frames;

  /// All-zero frames behind the standard 16-byte preamble and sync word.
  static Bitstream blank(std::string device_id, std::size_t frame_bytes);

  std::uint64_t frame_bits() const { return frames.size() * 8ull; }
  bool bit(std::uint64_t pos) const;
  void set_bit(std::uint64_t pos, bool value);
  /// Sorted positions of every set frame bit.
  BitPositions set_positions() const;

  bool operator==(const Bitstream&) const = default;
};

/// Locates the sync word in `header`; throws FormatError unless it occurs
/// exactly once.
std::uint64_t find_sync_word(std::span<const std::uint8_t> header);

std::vector<std::uint8_t> bitstream_to_bytes(const Bitstream& bs);
Bitstream bitstream_from_bytes(std::span<const std::uint8_t> bytes);
void write_bitstream(const Bitstream& bs, const std::string& path);
Bitstream read_bitstream(const std::string& path);

/// Sorted positions where the two frame arrays differ. Throws ValidationError
/// if device ids or frame lengths differ.
BitPositions diff_bitstreams(const Bitstream& a, const Bitstream& b);

}  // namespace bitrev

#endif  // BITREV_BITSTREAM_HPP
