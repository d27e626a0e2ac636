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

#ifndef BITREV_TOOLCHAIN_HPP
#define BITREV_TOOLCHAIN_HPP

#include <atomic>
#include <cstdint>

#include "bitrev/bitstream.hpp"
#include "bitrev/netlist.hpp"

namespace bitrev {

/// Opaque netlist-to-bitstream encoder. Implementations must be safe to call
/// concurrently.
class BitstreamGenerator {
 public:
  virtual ~BitstreamGenerator() = default;
  virtual Bitstream bitgen(const Netlist& netlist, bool force) const = 0;
};

/// Forwards to another generator and counts invocations.
class CountingGenerator : public BitstreamGenerator {
 public:
  explicit CountingGenerator(const BitstreamGenerator& inner) : inner_(inner) {}

  Bitstream bitgen(const Netlist& netlist, bool force) const override {
    calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.bitgen(netlist, force);
  }
  std::uint64_t calls() const { return calls_.load(); }

 private:
  const BitstreamGenerator& inner_;
  mutable std::atomic<std::uint64_t> calls_{0};
};

}  // namespace bitrev

#endif  // BITREV_TOOLCHAIN_HPP
