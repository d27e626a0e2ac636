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

// Shared fabrics and recovered databases for the test binaries. Building
// the desk fabric and reversing it takes a fraction of a second, so each
// binary does it at most once.

#ifndef BITREV_TESTS_FIXTURES_HPP
#define BITREV_TESTS_FIXTURES_HPP

#include <random>

#include "bitrev/database.hpp"
#include "bitrev/ground_truth.hpp"
#include "bitrev/mock_toolchain.hpp"
#include "bitrev/re_pipeline.hpp"
#include "bitrev/router.hpp"

namespace bitrev::testing {

inline FabricSpec small_spec(std::uint64_t seed = 7) {
  FabricSpec spec;
  spec.seed = seed;
  spec.width = 6;
  spec.height = 6;
  spec.sm_types = {{80, 36, 192}, {80, 36, 192}};
  spec.default_fraction = 0.02;
  return spec;
}

struct Recovered {
  GroundTruth truth;
  MockToolchain toolchain;
  Fabric fabric;  // public view
  EncodingDatabase db;
  InvocationCounts counts;

  explicit Recovered(const FabricSpec& spec)
      : truth(generate_fabric(spec)), toolchain(truth), fabric(truth.fabric.public_view()) {
    db = reverse_fabric(toolchain, fabric, ReverseOptions{}, &counts);
  }

  PipFilter non_default() const {
    return [this](Coord c, std::size_t pip) { return !db.is_default(db.index_of(c), static_cast<std::uint32_t>(pip)); };
  }

  Netlist empty() const {
    Netlist n;
    n.design_name = "empty";
    n.device_id = fabric.device_id;
    return n;
  }

  Bitstream reference() const { return toolchain.bitgen(empty(), false); }
};

inline const Recovered& desk() {
  static const Recovered r(FabricSpec::desk());
  return r;
}

inline const Recovered& small() {
  static const Recovered r(small_spec());
  return r;
}

}  // namespace bitrev::testing

#endif  // BITREV_TESTS_FIXTURES_HPP
