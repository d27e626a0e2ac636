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

#include "bitrev/simulator.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace bitrev {

namespace {

// Wide enough to decode any slice pin name the fabric can produce.
constexpr SliceShape kDecodeShape{4, 6, 4};

enum class SourceKind { kNone, kLut, kFf, kIob, kBlackbox };

struct Source {
  SourceKind kind = SourceKind::kNone;
  std::size_t index = 0;  // node index
  std::string pin;        // blackbox output pin
};

bool depends_on(const TruthTable& t, int input) {
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.bit(i) != t.bit(i ^ (std::size_t{1} << input))) return true;
  return false;
}

}  // namespace

struct Simulator::Impl {
  struct Lut {
    std::string label;
    TruthTable table;
    std::vector<int> inputs;  // signal per input, -1 undriven
    int out = -1;             // net or -1
    bool value = false;
  };
  struct Ff {
    std::string label;
    bool state = false;
    int d = -1;
    int q = -1;
  };
  struct Iob {
    std::string name;
    int net = -1;
    bool value = false;
  };
  struct Box {
    std::string name;
    std::unique_ptr<BlackboxModel> model;
    std::map<std::string, bool> outputs;
    std::map<std::string, int> inputs;                          // connected pin -> net
    std::vector<std::pair<std::string, int>> output_nets;       // pin -> net
  };

  std::vector<std::uint8_t> values;  // per net
  std::vector<Source> drivers;       // per net
  std::vector<Lut> luts;
  std::vector<Ff> ffs;
  std::vector<Iob> iobs;
  std::vector<Box> boxes;
  std::vector<std::size_t> order;  // LUT evaluation order
  std::map<std::pair<std::string, std::string>, Source> outputs;
  std::map<std::string, std::size_t, std::less<>> box_index;
  std::vector<std::string> warnings;
  std::set<std::string> warned;
  std::uint64_t cycle = 0;

  void warn(const std::string& line) {
    if (warned.insert(line).second) warnings.push_back(line);
  }

  bool signal(int net) const { return net >= 0 && values[static_cast<std::size_t>(net)]; }

  bool read(const Source& s) const {
    switch (s.kind) {
      case SourceKind::kLut: return luts[s.index].value;
      case SourceKind::kFf: return ffs[s.index].state;
      case SourceKind::kIob: return iobs[s.index].value;
      case SourceKind::kBlackbox: {
        auto it = boxes[s.index].outputs.find(s.pin);
        return it != boxes[s.index].outputs.end() && it->second;
      }
      case SourceKind::kNone: return false;
    }
    return false;
  }

  void evaluate() {
    for (std::size_t n = 0; n < drivers.size(); ++n)
      if (drivers[n].kind != SourceKind::kLut) values[n] = read(drivers[n]);
    for (std::size_t i : order) {
      Lut& lut = luts[i];
      std::uint32_t index = 0;
      for (std::size_t k = 0; k < lut.inputs.size(); ++k)
        if (signal(lut.inputs[k])) index |= 1u << k;
      lut.value = lut.table.arity() == 0 ? lut.table.bit(0) : lut.table.evaluate(index);
      if (lut.out >= 0) values[static_cast<std::size_t>(lut.out)] = lut.value;
    }
  }
};

Simulator::Simulator(const Netlist& netlist, const BlackboxModels& models) : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  validate_names(netlist);
  std::map<PinRef, int> in_net, out_net;
  for (std::size_t n = 0; n < netlist.nets.size(); ++n) {
    const Net& net = netlist.nets[n];
    if (net.outpin) out_net[*net.outpin] = static_cast<int>(n);
    for (const auto& p : net.inpins) in_net[p] = static_cast<int>(n);
  }
  auto net_in = [&](const std::string& inst, const std::string& pin) {
    auto it = in_net.find({inst, pin});
    return it == in_net.end() ? -1 : it->second;
  };
  auto net_out = [&](const std::string& inst, const std::string& pin) {
    auto it = out_net.find({inst, pin});
    return it == out_net.end() ? -1 : it->second;
  };

  s.values.assign(netlist.nets.size(), 0);
  s.drivers.assign(netlist.nets.size(), {});
  auto drive = [&](int net, Source src, const std::string& inst, const std::string& pin) {
    s.outputs[{inst, pin}] = src;
    if (net >= 0) s.drivers[static_cast<std::size_t>(net)] = std::move(src);
  };

  for (const auto& inst : netlist.instances) {
    switch (inst.kind) {
      case SiteKind::kSlice: {
        for (int l = 0; l < kDecodeShape.luts; ++l) {
          const std::string out_pin = slice_pin_name({PinRole::kLutOutput, l, 0});
          auto cfg = inst.luts.find(l);
          const int out = net_out(inst.name, out_pin);
          if (cfg == inst.luts.end() && out < 0) continue;
          Impl::Lut lut;
          lut.label = inst.name + "." + out_pin;
          lut.table = cfg == inst.luts.end() ? TruthTable(0) : cfg->second;
          lut.out = out;
          for (int k = 0; k < lut.table.arity(); ++k) {
            const std::string pin = slice_pin_name({PinRole::kLutInput, l, k});
            lut.inputs.push_back(net_in(inst.name, pin));
            if (lut.inputs.back() < 0 && depends_on(lut.table, k))
              s.warn("undriven input " + inst.name + "." + pin + " reads 0");
          }
          drive(out, {SourceKind::kLut, s.luts.size(), {}}, inst.name, out_pin);
          s.luts.push_back(std::move(lut));
        }
        for (int f = 0; f < kDecodeShape.ffs; ++f) {
          const std::string q_pin = slice_pin_name({PinRole::kFfOutput, f, 0});
          const std::string d_pin = slice_pin_name({PinRole::kFfData, f, 0});
          auto cfg = inst.ffs.find(f);
          const int q = net_out(inst.name, q_pin);
          const int d = net_in(inst.name, d_pin);
          if (cfg == inst.ffs.end() && q < 0 && d < 0) continue;
          Impl::Ff ff;
          ff.label = inst.name + "." + q_pin;
          ff.state = cfg != inst.ffs.end() && cfg->second.init;
          ff.d = d;
          ff.q = q;
          if (d < 0) s.warn("undriven input " + inst.name + "." + d_pin + " reads 0");
          drive(q, {SourceKind::kFf, s.ffs.size(), {}}, inst.name, q_pin);
          s.ffs.push_back(std::move(ff));
        }
        break;
      }
      case SiteKind::kIob: {
        const int net = net_out(inst.name, "I");
        drive(net, {SourceKind::kIob, s.iobs.size(), {}}, inst.name, "I");
        s.iobs.push_back({inst.name, net, false});
        break;
      }
      case SiteKind::kBlackbox: {
        Impl::Box box;
        box.name = inst.name;
        if (auto it = models.find(inst.name); it != models.end()) box.model = it->second();
        else s.warn("blackbox " + inst.name + " has no behavioral model; outputs read 0");
        const std::size_t index = s.boxes.size();
        s.box_index[inst.name] = index;
        for (std::size_t n = 0; n < netlist.nets.size(); ++n) {
          const Net& net = netlist.nets[n];
          if (net.outpin && net.outpin->instance == inst.name) {
            box.output_nets.emplace_back(net.outpin->pin, static_cast<int>(n));
            drive(static_cast<int>(n), {SourceKind::kBlackbox, index, net.outpin->pin}, inst.name,
                  net.outpin->pin);
          }
          for (const auto& p : net.inpins)
            if (p.instance == inst.name) box.inputs[p.pin] = static_cast<int>(n);
        }
        s.boxes.push_back(std::move(box));
        break;
      }
    }
  }
  for (std::size_t n = 0; n < netlist.nets.size(); ++n)
    if (s.drivers[n].kind == SourceKind::kNone && !netlist.nets[n].inpins.empty())
      s.warn("net " + netlist.nets[n].name + " has no driver; its sinks read 0");

  // Topological order of the LUT network.
  std::vector<std::vector<std::size_t>> preds(s.luts.size()), succs(s.luts.size());
  for (std::size_t i = 0; i < s.luts.size(); ++i)
    for (int in : s.luts[i].inputs) {
      if (in < 0) continue;
      const Source& d = s.drivers[static_cast<std::size_t>(in)];
      if (d.kind == SourceKind::kLut) {
        preds[i].push_back(d.index);
        succs[d.index].push_back(i);
      }
    }
  std::vector<std::size_t> indegree(s.luts.size());
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < s.luts.size(); ++i)
    if ((indegree[i] = preds[i].size()) == 0) ready.push_back(i);
  while (!ready.empty()) {
    std::size_t i = ready.front();
    ready.pop_front();
    s.order.push_back(i);
    for (std::size_t j : succs[i])
      if (--indegree[j] == 0) ready.push_back(j);
  }
  if (s.order.size() != s.luts.size()) {
    // Walk predecessors among the unresolved LUTs until one repeats.
    std::size_t at = 0;
    while (indegree[at] == 0) ++at;
    std::vector<std::size_t> path;
    std::vector<int> pos(s.luts.size(), -1);
    while (pos[at] < 0) {
      pos[at] = static_cast<int>(path.size());
      path.push_back(at);
      for (std::size_t p : preds[at])
        if (indegree[p] != 0) {
          at = p;
          break;
        }
    }
    std::string loop;
    for (std::size_t k = static_cast<std::size_t>(pos[at]); k < path.size(); ++k)
      loop = s.luts[path[k]].label + (loop.empty() ? "" : " -> ") + loop;
    throw ValidationError("combinational loop: " + loop + " -> " + s.luts[at].label);
  }
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

void Simulator::step(const CycleInputs& inputs, const std::function<void(const Simulator&)>& sample) {
  Impl& s = *impl_;
  for (auto& iob : s.iobs) {
    auto it = inputs.find(iob.name);
    iob.value = it != inputs.end() && it->second;
  }
  s.evaluate();
  if (sample) sample(*this);

  std::vector<bool> next(s.ffs.size());
  for (std::size_t i = 0; i < s.ffs.size(); ++i) next[i] = s.signal(s.ffs[i].d);
  for (auto& box : s.boxes) {
    if (!box.model) continue;
    box.model->clock(
        [&](std::string_view pin) {
          if (auto it = box.inputs.find(std::string(pin)); it != box.inputs.end()) return s.signal(it->second);
          if (auto it = inputs.find(box.name + "." + std::string(pin)); it != inputs.end()) return it->second;
          s.warn("undriven input " + box.name + "." + std::string(pin) + " reads 0");
          return false;
        },
        box.outputs);
  }
  for (std::size_t i = 0; i < s.ffs.size(); ++i) s.ffs[i].state = next[i];
  ++s.cycle;
}

bool Simulator::peek(std::string_view instance, std::string_view pin) const {
  auto it = impl_->outputs.find({std::string(instance), std::string(pin)});
  if (it != impl_->outputs.end()) return impl_->read(it->second);
  // Blackbox outputs need not be connected to be observable.
  if (auto box = impl_->box_index.find(instance); box != impl_->box_index.end())
    return impl_->read({SourceKind::kBlackbox, box->second, std::string(pin)});
  return false;
}

std::uint64_t Simulator::cycle() const { return impl_->cycle; }

const std::vector<std::string>& Simulator::warnings() const { return impl_->warnings; }

std::vector<std::map<std::string, bool>> simulate(const Netlist& netlist,
                                                  const std::vector<CycleInputs>& stimuli,
                                                  const std::vector<std::string>& probes,
                                                  const BlackboxModels& models,
                                                  std::vector<std::string>* warnings) {
  Simulator sim(netlist, models);
  std::vector<std::map<std::string, bool>> trace;
  for (const auto& inputs : stimuli) {
    sim.step(inputs, [&](const Simulator& view) {
      std::map<std::string, bool> row;
      for (const auto& probe : probes) {
        auto dot = probe.find('.');
        if (dot == std::string::npos) throw ValidationError("probe '" + probe + "' is not instance.pin");
        row[probe] = view.peek(probe.substr(0, dot), probe.substr(dot + 1));
      }
      trace.push_back(std::move(row));
    });
  }
  if (warnings) *warnings = sim.warnings();
  return trace;
}

}  // namespace bitrev
