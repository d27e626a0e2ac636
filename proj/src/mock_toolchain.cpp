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

#include "bitrev/mock_toolchain.hpp"

namespace bitrev {

bool net_is_encoded(const Net& net) { return net.outpin.has_value() && !net.inpins.empty(); }

Bitstream MockToolchain::bitgen(const Netlist& netlist, bool force) const {
  invocations_.fetch_add(1, std::memory_order_relaxed);
  const Fabric& fabric = truth_.fabric;
  const EncodingMap& enc = truth_.encoding;
  if (netlist.device_id != fabric.device_id)
    throw ValidationError("netlist targets device " + netlist.device_id + ", fabric is " +
                          fabric.device_id);
  if (force) validate_structure(netlist, fabric);
  else validate_routing(netlist, fabric);

  Bitstream bs = Bitstream::blank(fabric.device_id, enc.geometry.frame_bytes());
  for (const auto& inst : netlist.instances) {
    Coord c = parse_site(inst.site)->second;
    switch (inst.kind) {
      case SiteKind::kIob:
        bs.set_bit(enc.iob_bit(c), true);
        break;
      case SiteKind::kSlice: {
        for (const auto& [idx, table] : inst.luts) {
          auto bits = enc.lut_bits(c, idx);
          for (std::size_t i = 0; i < bits.size(); ++i)
            if (table.bit(i)) bs.set_bit(bits[i], true);
        }
        for (const auto& [idx, ff] : inst.ffs)
          if (ff.used) bs.set_bit(enc.ff_bit(c, idx), true);
        break;
      }
      case SiteKind::kBlackbox:
        break;
    }
  }
  for (const auto& net : netlist.nets) {
    if (!net_is_encoded(net)) continue;
    for (const auto& pip : net.pips) {
      Coord c = *parse_sm_tile(pip.tile);
      std::size_t idx = *fabric.type_at(c).find(pip.source, pip.sink);
      for (auto b : enc.pip_bits(fabric, c, idx)) bs.set_bit(b, true);
    }
  }
  return bs;
}

}  // namespace bitrev
