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

// Cycle-based simulation of a netlist's LUT/FF network. Connectivity comes
// from net pins only; PIPs are ignored.
//
// Each cycle: apply stimulus, evaluate LUTs in topological order, let the
// caller sample, then clock every flip-flop and every blackbox model.

#ifndef BITREV_SIMULATOR_HPP
#define BITREV_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bitrev/netlist.hpp"

namespace bitrev {

/// Behavioral model for a BLACKBOX instance.
class BlackboxModel {
 public:
  using Inputs = std::function<bool(std::string_view pin)>;
  virtual ~BlackboxModel() = default;
  /// Clock edge. `in` reads the current value of an input pin; `out` holds
  /// output pin values and persists between edges.
  virtual void clock(const Inputs& in, std::map<std::string, bool>& out) = 0;
};

/// blackbox instance name -> model factory
using BlackboxModels = std::map<std::string, std::function<std::unique_ptr<BlackboxModel>()>>;

/// Input assignments for one cycle. Keys are IOB instance names (value on
/// the pad's "I" pin) or "instance.pin" for unconnected blackbox inputs.
using CycleInputs = std::map<std::string, bool>;

class Simulator {
 public:
  /// Throws ValidationError for combinational loops, naming the LUTs on the
  /// loop.
  Simulator(const Netlist& netlist, const BlackboxModels& models = {});
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  /// Applies `inputs`, evaluates the combinational logic, calls `sample`
  /// (if set) and then clocks all state.
  void step(const CycleInputs& inputs, const std::function<void(const Simulator&)>& sample = {});

  /// Current value of an output pin: LUT output, FF Q, IOB "I" or a
  /// blackbox output. Unknown pins read 0.
  bool peek(std::string_view instance, std::string_view pin) const;

  std::uint64_t cycle() const;
  /// Undriven inputs (read as 0) and unmodeled blackboxes, one line each.
  const std::vector<std::string>& warnings() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Runs `stimuli.size()` cycles and records `probes` ("instance.pin") after
/// evaluation in every cycle.
std::vector<std::map<std::string, bool>> simulate(const Netlist& netlist,
                                                  const std::vector<CycleInputs>& stimuli,
                                                  const std::vector<std::string>& probes,
                                                  const BlackboxModels& models = {},
                                                  std::vector<std::string>* warnings = nullptr);

}  // namespace bitrev

#endif  // BITREV_SIMULATOR_HPP
