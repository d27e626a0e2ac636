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

// Key-path Trojan case study on a self-test-protected AES design.
//
// The target loads its key byte-serially through eight parallel 16-stage
// shift registers (one per bit lane). Every stage is a pass-through LUT in
// front of a flip-flop; the 128 flip-flop outputs feed a behavioral AES-128
// core. The Trojan replaces the data input of each key flip-flop with a
// constant LUT so the device always encrypts under one fixed key.
//
// Key loading: in cycle t (0..15) input kb{b} carries bit b of key byte t.
// In cycle 16 the core samples its key pins, the plaintext pins and GO.
// Core pin K{8j+b} is bit b (LSB = 0) of key byte j; P and C likewise.

#ifndef BITREV_TROJAN_HPP
#define BITREV_TROJAN_HPP

#include <compare>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bitrev/bitstream.hpp"
#include "bitrev/common.hpp"
#include "bitrev/converter.hpp"
#include "bitrev/database.hpp"
#include "bitrev/netlist.hpp"
#include "bitrev/router.hpp"
#include "bitrev/simulator.hpp"
#include "bitrev/toolchain.hpp"

namespace bitrev {

inline constexpr int kKeyLanes = 8;
inline constexpr int kKeyStages = 16;
inline constexpr const char* kAesCore = "aes_core";

/// Raised when probing cannot tie a flip-flop to a key bit.
class CorrelationError : public Error {
 public:
  using Error::Error;
};

struct SelfTestSpec {
  Block p_ref{};
  Block c_ref{};  // AES(k_st, p_ref)
  Block k_st{};
  Block k_u{};
};

std::string self_test_spec_to_text(const SelfTestSpec& spec);
SelfTestSpec self_test_spec_from_text(std::string_view text);

struct FfRef {
  std::string instance;
  int ff = 0;

  std::string to_string() const;  // "inst.AQ"
  auto operator<=>(const FfRef&) const = default;
};

struct LutRef {
  std::string instance;
  int lut = 0;

  std::string to_string() const;  // "inst.A"
  auto operator<=>(const LutRef&) const = default;
};

/// Behavioral AES-128 core. On a clock edge with GO high it latches
/// AES(K, P) onto C; otherwise C holds.
class AesCoreModel : public BlackboxModel {
 public:
  void clock(const Inputs& in, std::map<std::string, bool>& out) override;
};

BlackboxModels aes_core_models();

/// Builds the target on `fabric`. The eight chains are spread over rows 1 to
/// height-2, stage s sits in slice column 2 + 2*(s/4) at element s%4, and
/// each chain is fed by a permuted key input so lane assignment is not
/// positional. Interior rows and spaced columns leave routing room for the
/// payload. All routing avoids PIPs rejected by `filter`. Throws
/// ValidationError if the fabric is too small or routing fails.
struct AesTargetBuild {
  Netlist netlist;
  SelfTestSpec spec;
};
AesTargetBuild build_aes_target(const Fabric& fabric, const Block& k_st, const Block& p_ref,
                                const PipFilter& filter = {});

/// Loads `key` byte-serially, encrypts `plaintext` and returns the core's
/// ciphertext.
Block simulate_encryption(const Netlist& netlist, const Block& key, const Block& plaintext,
                          std::vector<std::string>* warnings = nullptr);

/// Loads k_st, encrypts p_ref and compares against c_ref.
bool self_test(const Netlist& netlist, const SelfTestSpec& spec);

struct ShiftChain {
  std::vector<FfRef> ffs;                  // input end first
  std::vector<std::optional<LutRef>> luts;  // pass-through LUT in front of each FF
  std::vector<PinRef> taps;                // other sinks of stage outputs
};

/// Maximal FF delay lines (FF -> optional pass-through LUT -> FF, each stage
/// feeding exactly one next stage) of length >= threshold, ordered by their
/// first flip-flop.
std::vector<ShiftChain> detect_shift_registers(const Netlist& netlist, int threshold = 4);

struct KeyBit {
  int byte = 0;
  int bit = 0;

  auto operator<=>(const KeyBit&) const = default;
};
using KeyBitMap = std::map<FfRef, KeyBit>;

std::string key_bit_map_to_text(const KeyBitMap& map);
KeyBitMap key_bit_map_from_text(std::string_view text);
/// True when `map` covers all 128 (byte, bit) pairs exactly once.
bool is_key_bijection(const KeyBitMap& map);

/// Probes each chain by clearing pass-through LUTs on copies of `netlist`,
/// loading the all-ones key and matching ciphertexts against precomputed
/// tables: clearing the first LUT identifies the bit lane, clearing the last
/// LUT identifies stage order, and clearing every other stage verifies the
/// prediction. Throws CorrelationError on any mismatch.
KeyBitMap correlate_key_bits(const Netlist& netlist, const std::vector<ShiftChain>& chains,
                             unsigned jobs = 1);

/// Detaches the data input of every mapped FF (pruning the PIPs that only
/// served it) and drives it from a new constant payload LUT holding the
/// matching bit of k_st. Payload instance payload_{8*byte+bit} takes the
/// free slice LUT output that reaches its FF through the fewest PIPs. Throws ValidationError for a
/// non-bijective map, a missing FF or failed routing.
Netlist insert_payload(const Netlist& netlist, const KeyBitMap& map, const Block& k_st,
                       const Fabric& fabric, const PipFilter& filter = {});

struct StealthReport {
  bool self_test_passed = false;
  int trials = 0;
  int decryptable = 0;  // outputs that decrypt to p under k_st
  int correct = 0;      // outputs equal to AES(k_u, p)
  bool degenerate_user_key = false;  // spec.k_u == spec.k_st
  struct Pair {
    Block k_u, p, c;
  };
  std::optional<Pair> counterexample;  // c != AES(k_u, p)

  std::string to_text() const;
};

/// Runs the self-test and `trials` encryptions under random user keys that
/// differ from k_st.
StealthReport stealth_report(const Netlist& netlist, const SelfTestSpec& spec, int trials,
                             std::mt19937_64& rng, unsigned jobs = 1);

/// Encodes `netlist` with the toolchain, converts the bitstream back with
/// `db`, and reattaches the off-fabric periphery (IOB and BLACKBOX instances
/// and their dedicated connections), which no configuration bit describes.
struct BridgeResult {
  Netlist netlist;
  std::vector<Diagnostic> diagnostics;
};
BridgeResult bitstream_bridge(const Netlist& netlist, const BitstreamGenerator& toolchain,
                              const Bitstream& reference, const EncodingDatabase& db);

}  // namespace bitrev

#endif  // BITREV_TROJAN_HPP
