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

// In-place bitstream patching through the recovered database.

#ifndef BITREV_MANIPULATOR_HPP
#define BITREV_MANIPULATOR_HPP

#include <optional>
#include <string>
#include <string_view>

#include "bitrev/bitstream.hpp"
#include "bitrev/database.hpp"
#include "bitrev/netlist.hpp"

namespace bitrev {

/// PIPs are considered configured when every one of their bits is set.
bool pip_configured(const Bitstream& bs, const EncodingDatabase& db, Coord sm, std::uint32_t pip);

/// The PIP the converter would report on `sink` of the switch matrix at
/// `sm`: all bits set, most bits wins.
std::optional<std::uint32_t> configured_pip_on_sink(const Bitstream& bs, const EncodingDatabase& db,
                                                    Coord sm, std::string_view sink);

/// Sets every bit of the PIP. If another PIP currently occupies the same
/// sink, its bits not shared with the new PIP are cleared first. Throws
/// ValidationError for default PIPs.
Bitstream set_pip(const Bitstream& bs, const EncodingDatabase& db, Coord sm, std::uint32_t pip);

/// Clears the PIP's bits, keeping bits shared with other configured PIPs.
/// Throws ValidationError if the PIP is not configured.
Bitstream unset_pip(const Bitstream& bs, const EncodingDatabase& db, Coord sm, std::uint32_t pip);

/// Writes `table` into the ordered bit positions of LUT `lut` at `tile`.
/// Throws ValidationError on arity mismatch.
Bitstream rewrite_lut(const Bitstream& bs, const EncodingDatabase& db, Coord tile, int lut,
                      const TruthTable& table);

/// Resolves a PIP given by name. Throws ValidationError if unknown.
std::uint32_t resolve_pip(const EncodingDatabase& db, Coord sm, std::string_view source,
                          std::string_view sink);

/// "INT_X3Y4:SRC->SINK"
struct PipAddress {
  Coord sm;
  std::string source;
  std::string sink;
};
PipAddress parse_pip_address(std::string_view text);

/// "CLB_X3Y4:SLICE_X3Y4:LUT2:6996"; the site may be omitted as
/// "CLB_X3Y4:LUT2:6996".
struct LutAddress {
  Coord tile;
  int lut = 0;
  TruthTable table;
};
LutAddress parse_lut_address(std::string_view text);

}  // namespace bitrev

#endif  // BITREV_MANIPULATOR_HPP
