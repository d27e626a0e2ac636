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

// The black-box "vendor" encoder. It knows the hidden encoding and mimics
// the vendor flow's quirks: in forced mode only structural checks run, and a
// net's PIPs are encoded only when the net names both an outpin and at least
// one inpin, whether or not the routing actually connects them.

#ifndef BITREV_MOCK_TOOLCHAIN_HPP
#define BITREV_MOCK_TOOLCHAIN_HPP

#include <atomic>

#include "bitrev/ground_truth.hpp"
#include "bitrev/toolchain.hpp"

namespace bitrev {

class MockToolchain : public BitstreamGenerator {
 public:
  explicit MockToolchain(GroundTruth truth) : truth_(std::move(truth)) {}

  Bitstream bitgen(const Netlist& netlist, bool force) const override;

  const GroundTruth& truth() const { return truth_; }
  std::uint64_t invocations() const { return invocations_.load(); }

 private:
  GroundTruth truth_;
  mutable std::atomic<std::uint64_t> invocations_{0};
};

/// True when bitgen would encode this net's PIPs.
bool net_is_encoded(const Net& net);

}  // namespace bitrev

#endif  // BITREV_MOCK_TOOLCHAIN_HPP
