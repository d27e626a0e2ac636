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

// Checks of recovered artifacts against the hidden ground truth. Used by
// the selfcheck command and the test suites; never by the recovery code.

#ifndef BITREV_ORACLE_HPP
#define BITREV_ORACLE_HPP

#include <cstddef>
#include <string>

#include "bitrev/converter.hpp"
#include "bitrev/database.hpp"
#include "bitrev/ground_truth.hpp"

namespace bitrev {

struct DatabaseAudit {
  std::size_t pips_checked = 0;
  std::size_t pip_mismatches = 0;      // non-default PIPs with wrong positions
  std::size_t default_mismatches = 0;  // PIPs misclassified as default or not
  std::size_t luts_checked = 0;
  std::size_t lut_mismatches = 0;
  std::size_t ffs_checked = 0;
  std::size_t ff_mismatches = 0;
  std::string first_error;

  bool exact() const { return pip_mismatches + default_mismatches + lut_mismatches + ff_mismatches == 0; }
};

DatabaseAudit audit_database(const EncodingDatabase& db, const GroundTruth& truth);

struct RoundTripAudit {
  bool pips_match = false;
  bool luts_match = false;
  bool ffs_match = false;
  std::size_t unknown_bits = 0;
  std::size_t ambiguous_pips = 0;
  std::string first_error;

  bool exact() const { return pips_match && luts_match && ffs_match && unknown_bits == 0 && ambiguous_pips == 0; }
};

/// Compares the hardware recovered from a bitstream with what `netlist`
/// configures: PIPs of encoded nets, non-zero LUT tables and used FFs.
RoundTripAudit audit_round_trip(const Netlist& netlist, const Fabric& fabric, const HardwareConfiguration& hw);

}  // namespace bitrev

#endif  // BITREV_ORACLE_HPP
