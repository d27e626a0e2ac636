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

// Bitstream-to-netlist conversion using a recovered database.

#ifndef BITREV_CONVERTER_HPP
#define BITREV_CONVERTER_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bitrev/bitstream.hpp"
#include "bitrev/database.hpp"
#include "bitrev/netlist.hpp"

namespace bitrev {

struct Diagnostic {
  enum class Kind { kUnknownBit, kAmbiguousPip, kDanglingNet };
  Kind kind;
  std::string message;

  /// Machine-readable prefix: UNKNOWN_BIT, AMBIGUOUS_PIP or DANGLING_NET.
  std::string_view tag() const;
  std::string to_string() const { return std::string(tag()) + " " + message; }
};

struct ConfiguredPip {
  std::uint32_t tile;  // grid index
  std::uint32_t pip;   // index within the tile's type

  auto operator<=>(const ConfiguredPip&) const = default;
};

/// (grid index, element index)
using ElementRef = std::pair<std::uint32_t, int>;

struct HardwareConfiguration {
  std::vector<ConfiguredPip> pips;
  std::map<ElementRef, TruthTable> luts;  // non-zero tables only
  std::set<ElementRef> used_ffs;
  std::vector<Net> nets;
  std::vector<Diagnostic> diagnostics;

  std::size_t count(Diagnostic::Kind kind) const;
};

/// target AND NOT reference: keeps bits set in the target that the empty
/// configuration does not already set. Idempotent.
Bitstream normalize(const Bitstream& target, const Bitstream& reference);
/// Positions of the normalized bitstream.
BitPositions strip_defaults(const Bitstream& target, const Bitstream& reference);

/// PIP extraction. Scans `bits` in ascending order; for each set bit not yet
/// consumed, a candidate PIP survives only if all of its bits are set, and
/// the survivor with the most bits wins and consumes its bits. Equal-weight
/// survivors are all rejected with an AMBIGUOUS_PIP diagnostic; set bits no
/// object explains produce UNKNOWN_BIT. Result sorted by (tile, pip).
std::vector<ConfiguredPip> extract_pips(const BitPositions& bits, const EncodingDatabase& db,
                                        std::vector<Diagnostic>* diagnostics = nullptr);

/// Truth tables and FF usage read from the ordered LUT positions and usage
/// bits. All-zero tables are omitted.
void extract_luts_ffs(const BitPositions& bits, const EncodingDatabase& db,
                      std::map<ElementRef, TruthTable>& luts, std::set<ElementRef>& used_ffs);

/// Groups configured PIPs into nets over the static wire graph. A component
/// whose root is a slice output wire becomes a net with that outpin; slice
/// input wires it reaches become inpins. Components rooted elsewhere are
/// emitted as dangling nets with a DANGLING_NET diagnostic. Throws
/// ValidationError if two PIPs drive one sink.
std::vector<Net> reconstruct_nets(const std::vector<ConfiguredPip>& pips, const Fabric& fabric,
                                  std::vector<Diagnostic>* diagnostics = nullptr);

struct Conversion {
  HardwareConfiguration hardware;
  Netlist netlist;
};

/// Full conversion. Recovered slice instances are named after their sites;
/// nets are named after their driving pin.
Conversion convert(const Bitstream& target, const Bitstream& reference, const EncodingDatabase& db);

/// Slice instance name used by the converter for the site at `c`.
std::string converted_instance_name(Coord c);

}  // namespace bitrev

#endif  // BITREV_CONVERTER_HPP
