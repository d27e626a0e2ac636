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

// Fabric generation and the hidden bit-level encoding of the synthetic
// device. Only the mock toolchain and test harnesses include this header;
// the reverse-engineering libraries are built without access to it.

#ifndef BITREV_GROUND_TRUTH_HPP
#define BITREV_GROUND_TRUTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bitrev/fabric.hpp"

namespace bitrev {

struct SmTypeSpec {
  int pip_count = 200;
  int sink_count = 36;
  int bit_budget = 256;  // configuration bits owned by one switch matrix
};

struct FabricSpec {
  std::uint64_t seed = 42;
  int width = 16;
  int height = 16;
  std::vector<SmTypeSpec> sm_types{{200, 36, 256}, {200, 36, 256}};
  double default_fraction = 0.01;
  int tracks = 4;
  SliceShape slice;

  /// 16x16 grid, two switch-matrix types with 200 PIPs each, 1% defaults.
  static FabricSpec desk();
};

/// Column-major frame layout. Each tile owns `row_bits` bits in each of the
/// `frames_per_column` frames of its column; a tile-local bit index l lives
/// in frame l / row_bits at offset l % row_bits. Absolute positions are a
/// translation of local positions, which is what makes same-type switch
/// matrices share one distance table.
struct FrameGeometry {
  int width = 0;
  int height = 0;
  std::uint32_t row_bits = 64;
  std::uint32_t frames_per_column = 0;

  std::uint32_t tile_bits() const { return row_bits * frames_per_column; }
  std::uint32_t frame_bits() const { return row_bits * static_cast<std::uint32_t>(height); }
  std::size_t frame_bytes() const {
    return static_cast<std::size_t>(frame_bits()) * frames_per_column * width / 8;
  }
  std::uint32_t absolute(Coord c, std::uint32_t local) const;

  bool operator==(const FrameGeometry&) const = default;
};

/// Hidden ground truth: where every configurable object lives.
struct EncodingMap {
  FrameGeometry geometry;
  /// [type][pip] sorted tile-local bit positions; empty for default PIPs.
  std::vector<std::vector<std::vector<std::uint32_t>>> pip_local;
  /// [lut] tile-local positions ordered by truth-table index.
  std::vector<std::vector<std::uint32_t>> lut_local;
  /// [ff] tile-local usage bit.
  std::vector<std::uint32_t> ff_local;
  std::uint32_t iob_local = 0;

  BitPositions pip_bits(const Fabric& fabric, Coord sm, std::size_t pip) const;
  BitPositions lut_bits(Coord tile, int lut) const;
  std::uint32_t ff_bit(Coord tile, int ff) const;
  std::uint32_t iob_bit(Coord tile) const;

  bool operator==(const EncodingMap&) const = default;
};

struct GroundTruth {
  Fabric fabric;  // includes default-PIP markers
  EncodingMap encoding;
};

/// Deterministically builds a fabric and its hidden encoding. Throws
/// ValidationError for impossible specs (including a bit budget below the
/// ceil(log2(N)) lower bound).
GroundTruth generate_fabric(const FabricSpec& spec);

/// Smallest per-sink pool satisfying the encoding invariants for a sink with
/// `sources` PIPs of which `defaults` carry no bits.
int minimum_pool_bits(int sources, int defaults);

std::string ground_truth_to_text(const GroundTruth& truth);
GroundTruth ground_truth_from_text(std::string_view text);
GroundTruth load_ground_truth(const std::string& path);
void save_ground_truth(const GroundTruth& truth, const std::string& path);

}  // namespace bitrev

#endif  // BITREV_GROUND_TRUTH_HPP
