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

#ifndef BITREV_COMMON_HPP
#define BITREV_COMMON_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bitrev {

/// Base class for every domain error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that does not follow a file format (bitstream, database, fabric).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A structurally valid object that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Grid coordinate of a tile. Ordered by x, then y.
struct Coord {
  int x = 0;
  int y = 0;

  auto operator<=>(const Coord&) const = default;
};

/// A sorted list of absolute bit positions in the configuration frames.
using BitPositions = std::vector<std::uint32_t>;

/// 16-byte AES block / key.
using Block = std::array<std::uint8_t, 16>;

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);
Block block_from_hex(std::string_view hex);

/// Uniform integer in [0, bound) drawn from a 64-bit engine by rejection, so
/// results do not depend on the standard library's distribution code.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_below(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace bitrev

#endif  // BITREV_COMMON_HPP
