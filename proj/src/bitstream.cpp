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

#include "bitrev/bitstream.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include "binio.hpp"

namespace bitrev {

namespace {

using detail::crc32_of;

constexpr std::uint8_t kMagic[4] = {'M', 'B', 'I', 'T'};
constexpr std::uint8_t kPreamble[16] = {0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF,
                                        0x00, 0x00, 0x00, 0xBB, 0x11, 0x22, 0x00, 0x44};

}  // namespace

Bitstream Bitstream::blank(std::string device_id, std::size_t frame_bytes) {
  Bitstream bs;
  bs.device_id = std::move(device_id);
  bs.header.assign(std::begin(kPreamble), std::end(kPreamble));
  for (int i = 3; i >= 0; --i) bs.header.push_back(static_cast<std::uint8_t>(kSyncWord >> (8 * i)));
  bs.sync_word_pos = sizeof(kPreamble) * 8;
  bs.frames.assign(frame_bytes, 0);
  return bs;
}

bool Bitstream::bit(std::uint64_t pos) const {
  if (pos >= frame_bits()) throw Error("bit position " + std::to_string(pos) + " beyond frames");
  return (frames[pos / 8] >> (pos % 8)) & 1u;
}

void Bitstream::set_bit(std::uint64_t pos, bool value) {
  if (pos >= frame_bits()) throw Error("bit position " + std::to_string(pos) + " beyond frames");
  auto mask = static_cast<std::uint8_t>(1u << (pos % 8));
  if (value) frames[pos / 8] |= mask;
  else frames[pos / 8] &= static_cast<std::uint8_t>(~mask);
}

BitPositions Bitstream::set_positions() const {
  BitPositions out;
  for (std::size_t i = 0; i < frames.size(); ++i)
    for (unsigned byte = frames[i]; byte; byte &= byte - 1)
      out.push_back(static_cast<std::uint32_t>(i * 8 + std::countr_zero(byte)));
  return out;
}

std::uint64_t find_sync_word(std::span<const std::uint8_t> header) {
  std::optional<std::uint64_t> found;
  for (std::size_t i = 0; i + 4 <= header.size(); ++i) {
    std::uint32_t w = static_cast<std::uint32_t>(header[i]) << 24 |
                      static_cast<std::uint32_t>(header[i + 1]) << 16 |
                      static_cast<std::uint32_t>(header[i + 2]) << 8 | header[i + 3];
    if (w != kSyncWord) continue;
    if (found) throw FormatError("sync word occurs more than once in the header");
    found = i * 8;
  }
  if (!found) throw FormatError("sync word not found");
  return *found;
}

std::vector<std::uint8_t> bitstream_to_bytes(const Bitstream& bs) {
  detail::ByteWriter w;
  w.bytes(kMagic);
  w.u16(kBitstreamVersion);
  w.str16(bs.device_id);
  w.u32(static_cast<std::uint32_t>(bs.header.size()));
  w.bytes(bs.header);
  w.u32(static_cast<std::uint32_t>(bs.frames.size()));
  w.bytes(bs.frames);
  w.u32(crc32_of(w.data()));
  return std::move(w.data());
}

Bitstream bitstream_from_bytes(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "bitstream");
  auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic)))
    throw FormatError("not a bitstream file (bad magic)");
  if (auto v = r.u16(); v != kBitstreamVersion)
    throw FormatError("unsupported bitstream version " + std::to_string(v));
  Bitstream bs;
  bs.device_id = r.str16();
  auto header = r.bytes(r.u32());
  bs.header.assign(header.begin(), header.end());
  auto frames = r.bytes(r.u32());
  bs.frames.assign(frames.begin(), frames.end());
  const std::size_t body = r.pos();
  if (r.u32() != crc32_of(bytes.first(body))) throw FormatError("bitstream checksum mismatch");
  if (r.pos() != bytes.size()) throw FormatError("trailing bytes after bitstream checksum");
  bs.sync_word_pos = find_sync_word(bs.header);
  return bs;
}

void write_bitstream(const Bitstream& bs, const std::string& path) {
  auto bytes = bitstream_to_bytes(bs);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path);
}

Bitstream read_bitstream(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
  return bitstream_from_bytes(bytes);
}

BitPositions diff_bitstreams(const Bitstream& a, const Bitstream& b) {
  if (a.device_id != b.device_id)
    throw ValidationError("cannot diff bitstreams of devices " + a.device_id + " and " + b.device_id);
  if (a.frames.size() != b.frames.size())
    throw ValidationError("cannot diff bitstreams with different frame lengths");
  BitPositions out;
  for (std::size_t i = 0; i < a.frames.size(); ++i)
    for (unsigned x = a.frames[i] ^ b.frames[i]; x; x &= x - 1)
      out.push_back(static_cast<std::uint32_t>(i * 8 + std::countr_zero(x)));
  return out;
}

}  // namespace bitrev
