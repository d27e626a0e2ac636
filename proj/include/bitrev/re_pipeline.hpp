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

// Black-box recovery of the encoding database. The toolchain is only ever
// called through BitstreamGenerator; nothing here can see the hidden map.
//
// Routing is recovered per switch-matrix type: one representative switch
// matrix is enumerated PIP by PIP, the resulting positions become a distance
// table relative to a reference PIP, and every other switch matrix of that
// type costs a single bitstream (its reference PIP).

#ifndef BITREV_RE_PIPELINE_HPP
#define BITREV_RE_PIPELINE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bitrev/bitstream.hpp"
#include "bitrev/database.hpp"
#include "bitrev/fabric.hpp"
#include "bitrev/netlist.hpp"
#include "bitrev/toolchain.hpp"

namespace bitrev {

/// Two fixed arbitrary instances plus one net that names an outpin, an
/// inpin and the single PIP `source -> sink` of the switch matrix at `sm`.
/// Throws ValidationError if that PIP is not in the switch matrix's report.
Netlist make_pip_template(const Fabric& fabric, Coord sm, const std::string& source,
                          const std::string& sink);
/// The template's instances without the net: the reference design.
Netlist make_reference_template(const Fabric& fabric);

/// Per-PIP positions of one switch matrix; empty vectors mark defaults.
struct SwitchMatrixResult {
  Coord sm;
  std::vector<BitPositions> positions;

  std::vector<std::uint32_t> defaults() const;
};

/// One template, bitgen and diff per PIP of the switch matrix at `sm`.
SwitchMatrixResult reverse_switch_matrix(const BitstreamGenerator& toolchain, const Fabric& fabric,
                                         Coord sm, const Bitstream& reference);

/// Picks the lexicographically first non-default (source, sink) PIP as the
/// reference and expresses every other PIP relative to it. Throws Error if
/// every PIP is a default.
TypeTable build_distance_table(const SwitchMatrixType& type, const SwitchMatrixResult& result);

struct InvocationCounts {
  std::uint64_t enumeration = 0;    // templates for representative switch matrices
  std::uint64_t extrapolation = 0;  // one reference-PIP template per other switch matrix
  std::uint64_t references = 0;     // instances-only reference bitstreams, one per type
  std::uint64_t logic = 0;          // LUT and FF templates including their baselines

  std::uint64_t routing() const { return enumeration + extrapolation + references; }
  std::uint64_t total() const { return routing() + logic; }
};

/// sum(pip_count) + (switch matrices - types) + types.
std::uint64_t analytic_routing_invocations(const std::vector<std::uint64_t>& pips_per_type,
                                           std::uint64_t switch_matrices);
/// One template per PIP of every switch matrix.
std::uint64_t naive_routing_invocations(const Fabric& fabric);

struct ReverseOptions {
  unsigned jobs = 1;
  bool logic = true;  // also recover LUT and FF bits
  std::function<void(const std::string&)> log;
};

/// Routing recovery. Fills device, grid, types, references and defaults of
/// `db`.
void reverse_fabric_routing(const BitstreamGenerator& toolchain, const Fabric& fabric,
                            const ReverseOptions& options, EncodingDatabase& db,
                            InvocationCounts& counts);

/// LUT and FF recovery over every slice site: an instance-only baseline, one
/// template per truth-table entry and one per flip-flop. Throws Error when a
/// template toggles anything other than exactly one bit.
void reverse_luts_ffs(const BitstreamGenerator& toolchain, const Fabric& fabric,
                      const ReverseOptions& options, EncodingDatabase& db, InvocationCounts& counts);

/// Full Phase-1 run. `fabric` is the public description. The returned
/// database is indexed.
EncodingDatabase reverse_fabric(const BitstreamGenerator& toolchain, const Fabric& fabric,
                                const ReverseOptions& options, InvocationCounts* counts = nullptr);

}  // namespace bitrev

#endif  // BITREV_RE_PIPELINE_HPP
