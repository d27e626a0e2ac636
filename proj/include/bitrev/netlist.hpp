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

// XDL-like netlist model and its text grammar:
//
//   design "<name>" <device> [<version>] ;
//   inst "<name>" "<kind>", placed <tile> <site> [, cfg "LUT<i>:<hex>" "FF<i>:<init>" ...] ;
//   net "<name>", [outpin "<inst>" <pin>,] [inpin "<inst>" <pin>,]* [pip <tile> <src> -> <sink>,]* ;
//
// Truth tables are stored LSB-first by input-vector index; the hex string
// prints the most significant nibble first. Lines starting with '#' are
// comments. Tile and site names are opaque tokens at this level.

#ifndef BITREV_NETLIST_HPP
#define BITREV_NETLIST_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bitrev/common.hpp"
#include "bitrev/fabric.hpp"

namespace bitrev {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class TruthTable {
 public:
  TruthTable() = default;
  explicit TruthTable(int arity, std::uint64_t bits = 0);

  static TruthTable constant(int arity, bool value);
  /// Output equals input `input` (0-based).
  static TruthTable identity(int arity, int input);
  static TruthTable from_hex(std::string_view hex);

  int arity() const { return arity_; }
  std::size_t size() const { return std::size_t{1} << arity_; }
  bool bit(std::size_t index) const { return (bits_ >> index) & 1u; }
  void set_bit(std::size_t index, bool value);
  std::uint64_t bits() const { return bits_; }
  bool is_zero() const { return bits_ == 0; }
  bool evaluate(std::uint32_t inputs) const { return bit(inputs & (size() - 1)); }
  /// Index of the input this table passes through unchanged, if any.
  std::optional<int> passthrough_input() const;
  std::string to_hex() const;

  bool operator==(const TruthTable&) const = default;

 private:
  int arity_ = 0;
  std::uint64_t bits_ = 0;
};

struct FfConfig {
  bool used = true;
  bool init = false;
  bool operator==(const FfConfig&) const = default;
};

struct Instance {
  std::string name;
  SiteKind kind = SiteKind::kSlice;
  std::string tile;
  std::string site;
  std::map<int, TruthTable> luts;
  std::map<int, FfConfig> ffs;

  bool operator==(const Instance&) const = default;
};

struct PinRef {
  std::string instance;
  std::string pin;

  auto operator<=>(const PinRef&) const = default;
};

struct Pip {
  std::string tile;
  std::string source;
  std::string sink;

  auto operator<=>(const Pip&) const = default;
};

struct Net {
  std::string name;
  std::optional<PinRef> outpin;
  std::vector<PinRef> inpins;
  std::vector<Pip> pips;

  bool operator==(const Net&) const = default;
};

struct Netlist {
  std::string design_name;
  std::string device_id;
  std::vector<Instance> instances;
  std::vector<Net> nets;

  const Instance* find_instance(std::string_view name) const;
  Instance* find_instance(std::string_view name);
  const Net* find_net(std::string_view name) const;
  Net* find_net(std::string_view name);

  /// Sorts instances, nets, inpins and pips into the canonical order used by
  /// write_netlist.
  void canonicalize();

  bool operator==(const Netlist&) const = default;
};

/// Throws ParseError for syntax errors and for pins naming undeclared
/// instances.
Netlist parse_netlist(std::string_view text);
/// Canonical text: instances, then nets, both in lexicographic order.
std::string write_netlist(const Netlist& netlist);

/// Fabric-independent invariants: unique instance and net names, pins that
/// name existing instances. Throws ValidationError.
void validate_names(const Netlist& netlist);

/// Invariants checked against a fabric on every toolchain run, forced or not:
/// sites exist and match the instance kind, one instance per site, pins and
/// configuration fit the slice shape, PIPs exist, and at most one PIP per
/// (switch matrix, sink) across the whole design.
void validate_structure(const Netlist& netlist, const Fabric& fabric);

/// Full check used by non-forced bitstream generation: structure plus
/// routing. A net whose driver is a slice pin must reach every slice inpin
/// through its own PIPs and the static wires, with no unreachable PIP. IOB
/// and BLACKBOX pins attach through dedicated wiring and need no PIPs; a net
/// without a slice driver must carry no PIPs.
void validate_routing(const Netlist& netlist, const Fabric& fabric);

/// True for pins that sit on fabric wires (slice pins).
bool is_fabric_pin(const Netlist& netlist, const PinRef& pin);

}  // namespace bitrev

#endif  // BITREV_NETLIST_HPP
