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

// bitrev: command-line front end for every workflow stage.
//
// Exit status: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "bitrev/aes.hpp"
#include "bitrev/converter.hpp"
#include "bitrev/database.hpp"
#include "bitrev/manipulator.hpp"
#include "bitrev/mock_toolchain.hpp"
#include "bitrev/oracle.hpp"
#include "bitrev/re_pipeline.hpp"
#include "bitrev/router.hpp"
#include "bitrev/trojan.hpp"

namespace {

using namespace bitrev;

struct Globals {
  unsigned jobs = 1;
  std::uint64_t seed = 42;
  bool verbose = false;
};
Globals g;

void log(const std::string& stage, const std::string& message) {
  if (g.verbose) std::cerr << "[" << stage << "] " << message << "\n";
}

PipFilter non_default(const EncodingDatabase& db) {
  return [&db](Coord c, std::size_t pip) { return !db.is_default(db.index_of(c), static_cast<std::uint32_t>(pip)); };
}

Netlist read_netlist(const std::string& path) { return parse_netlist(read_text_file(path)); }

Netlist empty_design(const std::string& device) {
  Netlist n;
  n.design_name = "empty";
  n.device_id = device;
  return n;
}

// --- fabric -----------------------------------------------------------------

struct FabricArgs {
  int width = 16, height = 16, types = 2, pips = 200, sinks = 36, budget = 256, tracks = 4;
  double defaults = 0.01;
  std::string truth_path, public_path;
};

int fabric_gen(const FabricArgs& a) {
  FabricSpec spec;
  spec.seed = g.seed;
  spec.width = a.width;
  spec.height = a.height;
  spec.tracks = a.tracks;
  spec.default_fraction = a.defaults;
  spec.sm_types.assign(static_cast<std::size_t>(a.types), SmTypeSpec{a.pips, a.sinks, a.budget});
  const GroundTruth truth = generate_fabric(spec);
  save_ground_truth(truth, a.truth_path);
  log("fabric", "wrote ground truth " + a.truth_path);
  if (!a.public_path.empty()) {
    save_fabric_description(truth.fabric.public_view(), a.public_path);
    log("fabric", "wrote public description " + a.public_path);
  }
  std::cout << "device " << truth.fabric.device_id << " " << truth.fabric.width << "x" << truth.fabric.height
            << ", " << truth.fabric.types.size() << " switch-matrix types\n";
  return 0;
}

int fabric_report(const std::string& path, const std::string& tile) {
  const Fabric fabric = load_fabric_description(path);
  auto c = parse_sm_tile(tile);
  if (!c) throw ValidationError("'" + tile + "' is not a switch-matrix tile name");
  for (const auto& [src, sink] : ::bitrev::fabric_report(fabric, *c)) std::cout << tile << " " << src << " -> " << sink << "\n";
  return 0;
}

// --- toolchain and recovery -------------------------------------------------

int bitgen(const std::string& truth_path, const std::string& input, const std::string& output, bool force) {
  const MockToolchain toolchain(load_ground_truth(truth_path));
  const Netlist n = input.empty() ? empty_design(toolchain.truth().fabric.device_id) : read_netlist(input);
  write_bitstream(toolchain.bitgen(n, force), output);
  log("bitgen", "wrote " + output);
  return 0;
}

int reverse(const std::string& truth_path, const std::string& fabric_path, const std::string& output) {
  const MockToolchain toolchain(load_ground_truth(truth_path));
  const Fabric fabric =
      fabric_path.empty() ? toolchain.truth().fabric.public_view() : load_fabric_description(fabric_path);
  ReverseOptions opts;
  opts.jobs = g.jobs;
  opts.log = [](const std::string& line) { log("reverse", line); };
  InvocationCounts counts;
  const EncodingDatabase db = reverse_fabric(toolchain, fabric, opts, &counts);
  save_database(db, output);
  std::vector<std::uint64_t> per_type;
  for (const auto& t : fabric.types) per_type.push_back(t.pips.size());
  std::cout << "bitgen invocations: routing " << counts.routing() << " (enumeration " << counts.enumeration
            << ", extrapolation " << counts.extrapolation << ", references " << counts.references << "), logic "
            << counts.logic << ", total " << counts.total() << "\n";
  std::cout << "analytic routing budget " << analytic_routing_invocations(per_type, fabric.sm_count())
            << ", naive per-PIP enumeration " << naive_routing_invocations(fabric) << "\n";
  return 0;
}

int convert_cmd(const std::string& db_path, const std::string& ref_path, const std::string& input,
                const std::string& output) {
  const EncodingDatabase db = load_database(db_path);
  const Conversion conv = convert(read_bitstream(input), read_bitstream(ref_path), db);
  for (const auto& d : conv.hardware.diagnostics) std::cerr << d.to_string() << "\n";
  write_text_file(output, write_netlist(conv.netlist));
  log("convert", std::to_string(conv.hardware.pips.size()) + " PIPs, " + std::to_string(conv.hardware.nets.size()) +
                     " nets, " + std::to_string(conv.hardware.diagnostics.size()) + " diagnostics");
  return 0;
}

int manip(const std::string& op, const std::string& db_path, const std::string& input, const std::string& output,
          const std::string& object) {
  const EncodingDatabase db = load_database(db_path);
  const Bitstream bs = read_bitstream(input);
  Bitstream out;
  if (op == "rewrite-lut") {
    const LutAddress a = parse_lut_address(object);
    out = rewrite_lut(bs, db, a.tile, a.lut, a.table);
  } else {
    const PipAddress a = parse_pip_address(object);
    const std::uint32_t pip = resolve_pip(db, a.sm, a.source, a.sink);
    out = op == "set-pip" ? set_pip(bs, db, a.sm, pip) : unset_pip(bs, db, a.sm, pip);
  }
  write_bitstream(out, output);
  log("manip", op + " " + object + " -> " + output);
  return 0;
}

// --- trojan -----------------------------------------------------------------

struct TrojanArgs {
  std::string db, input, output, spec, map, truth;
  std::string key = "2b7e151628aed2a6abf7158809cf4f3c";
  std::string pref = "3243f6a8885a308d313198a2e0370734";
  std::string kst = "2b7e151628aed2a6abf7158809cf4f3c";
  std::string ku;
  int threshold = 4;
  int trials = 20;
};

void print_chains(const std::vector<ShiftChain>& chains) {
  std::cout << chains.size() << " shift registers\n";
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& c = chains[i];
    std::cout << "chain " << i << " length " << c.ffs.size() << " first-lut "
              << (c.luts.front() ? c.luts.front()->to_string() : "-") << " taps " << c.taps.size() << ":";
    for (const auto& ff : c.ffs) std::cout << " " << ff.to_string();
    std::cout << "\n";
  }
}

int trojan(const std::string& op, const TrojanArgs& a) {
  if (op == "build-target") {
    const EncodingDatabase db = load_database(a.db);
    AesTargetBuild t = build_aes_target(db.public_fabric(), block_from_hex(a.key), block_from_hex(a.pref),
                                        non_default(db));
    std::mt19937_64 rng(g.seed);
    if (a.ku.empty())
      for (auto& x : t.spec.k_u) x = static_cast<std::uint8_t>(uniform_below(rng, 256));
    else
      t.spec.k_u = block_from_hex(a.ku);
    write_text_file(a.output, write_netlist(t.netlist));
    write_text_file(a.spec, self_test_spec_to_text(t.spec));
    std::cout << (self_test(t.netlist, t.spec) ? "PASS" : "FAIL") << " self-test on the clean target\n";
    return 0;
  }
  const Netlist n = read_netlist(a.input);
  if (op == "detect") {
    print_chains(detect_shift_registers(n, a.threshold));
    return 0;
  }
  if (op == "correlate") {
    const auto chains = detect_shift_registers(n, a.threshold);
    log("trojan", std::to_string(chains.size()) + " chains detected");
    const KeyBitMap map = correlate_key_bits(n, chains, g.jobs);
    write_text_file(a.output, key_bit_map_to_text(map));
    std::cout << (is_key_bijection(map) ? "PASS" : "FAIL") << " key map covers " << map.size()
              << " flip-flops with a verified bijection\n";
    return 0;
  }
  if (op == "inject") {
    const EncodingDatabase db = load_database(a.db);
    const KeyBitMap map = key_bit_map_from_text(read_text_file(a.map));
    const Netlist out = insert_payload(n, map, block_from_hex(a.kst), db.public_fabric(), non_default(db));
    write_text_file(a.output, write_netlist(out));
    std::cout << "inserted " << out.instances.size() - n.instances.size() << " payload LUTs\n";
    return 0;
  }
  if (op == "verify") {
    const SelfTestSpec spec = self_test_spec_from_text(read_text_file(a.spec));
    std::mt19937_64 rng(g.seed);
    const StealthReport r = stealth_report(n, spec, a.trials, rng, g.jobs);
    std::cout << r.to_text();
    std::cout << (r.decryptable == r.trials ? "PASS" : "FAIL") << " every output decrypts under k_st\n";
    std::cout << (r.correct == r.trials ? "PASS" : "FAIL") << " every output equals AES(k_u, p)\n";
    return 0;
  }
  if (op == "bridge") {
    const MockToolchain toolchain(load_ground_truth(a.truth));
    const EncodingDatabase db = load_database(a.db);
    const Bitstream reference = toolchain.bitgen(empty_design(db.device_id), false);
    const BridgeResult r = bitstream_bridge(n, toolchain, reference, db);
    for (const auto& d : r.diagnostics) std::cerr << d.to_string() << "\n";
    write_text_file(a.output, write_netlist(r.netlist));
    return 0;
  }
  throw CLI::ValidationError("unknown trojan operation " + op);
}

// --- selfcheck --------------------------------------------------------------

int selfcheck() {
  int failures = 0;
  auto report = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
    failures += ok ? 0 : 1;
  };

  report(to_hex(aes128_encrypt(block_from_hex("000102030405060708090a0b0c0d0e0f"),
                               block_from_hex("00112233445566778899aabbccddeeff"))) ==
             "69c4e0d86a7b0430d8cdb78070b4c55a",
         "aes known answer");

  FabricSpec spec;
  spec.seed = g.seed;
  spec.width = 6;
  spec.height = 6;
  spec.sm_types = {{80, 36, 192}, {80, 36, 192}};
  spec.default_fraction = 0.02;
  const GroundTruth truth = generate_fabric(spec);
  const MockToolchain toolchain(truth);
  const Fabric fabric = truth.fabric.public_view();
  ReverseOptions opts;
  opts.jobs = g.jobs;
  opts.log = [](const std::string& line) { log("selfcheck", line); };
  const EncodingDatabase db = reverse_fabric(toolchain, fabric, opts);
  const DatabaseAudit audit = audit_database(db, truth);
  report(audit.exact(), "database matches ground truth (" + std::to_string(audit.pips_checked) + " PIPs)" +
                            (audit.exact() ? "" : ": " + audit.first_error));
  report(database_from_bytes(database_to_bytes(db)) == db, "database serialization round trip");

  std::mt19937_64 rng(g.seed);
  const Bitstream reference = toolchain.bitgen(empty_design(fabric.device_id), false);
  int round_trips = 0, inverses = 0;
  constexpr int kDesigns = 10;
  for (int i = 0; i < kDesigns; ++i) {
    RandomDesignOptions o;
    o.slices = 8;
    o.nets = 10;
    o.reach = 2;
    const Netlist n = random_design(fabric, rng, o, non_default(db));
    const Bitstream bs = toolchain.bitgen(n, false);
    const Conversion conv = convert(bs, reference, db);
    if (audit_round_trip(n, truth.fabric, conv.hardware).exact()) ++round_trips;
    bool inverse = true;
    for (const auto& p : conv.hardware.pips) {
      const Coord c = db.coord_of(p.tile);
      inverse &= set_pip(unset_pip(bs, db, c, p.pip), db, c, p.pip).frames == bs.frames;
    }
    inverses += inverse;
  }
  report(round_trips == kDesigns, "conversion round trip " + std::to_string(round_trips) + "/" + std::to_string(kDesigns));
  report(inverses == kDesigns, "unset/set inverse " + std::to_string(inverses) + "/" + std::to_string(kDesigns));
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bitstream reverse engineering on a synthetic FPGA fabric"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.add_option("--jobs", g.jobs, "worker threads")->envname("BITREV_JOBS")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", g.seed, "seed for every random choice");
  app.add_flag("-v,--verbose", g.verbose, "log progress to stderr");

  std::function<int()> run;
  auto on = [&](CLI::App* sub, std::function<int()> fn) { sub->callback([&run, fn] { run = fn; }); };

  auto* fabric = app.add_subcommand("fabric", "generate or inspect a fabric")->require_subcommand(1);
  FabricArgs fa;
  auto* gen = fabric->add_subcommand("gen", "generate a fabric and its hidden encoding");
  gen->add_option("--output", fa.truth_path, "ground-truth file")->required();
  gen->add_option("--public", fa.public_path, "also write the public fabric description");
  gen->add_option("--width", fa.width);
  gen->add_option("--height", fa.height);
  gen->add_option("--types", fa.types, "switch-matrix types");
  gen->add_option("--pips", fa.pips, "PIPs per type");
  gen->add_option("--sinks", fa.sinks, "sinks per type");
  gen->add_option("--budget", fa.budget, "configuration bits per switch matrix");
  gen->add_option("--tracks", fa.tracks);
  gen->add_option("--defaults", fa.defaults, "fraction of default PIPs");
  on(gen, [&] { return fabric_gen(fa); });
  std::string report_fabric, report_tile;
  auto* rep = fabric->add_subcommand("report", "list the PIPs of one switch matrix");
  rep->add_option("--fabric", report_fabric, "public fabric description")->required();
  rep->add_option("tile", report_tile, "switch-matrix tile, e.g. INT_X0Y0")->required();
  on(rep, [&] { return fabric_report(report_fabric, report_tile); });

  std::string truth_path, fabric_path, input, output, db_path, ref_path, object;
  bool force = false;
  auto* bg = app.add_subcommand("bitgen", "encode a netlist with the mock vendor toolchain");
  bg->add_option("--truth", truth_path, "ground-truth file")->required();
  bg->add_option("--input", input, "netlist; omitted for the empty design");
  bg->add_option("--output", output)->required();
  bg->add_flag("--force", force, "skip routing checks");
  on(bg, [&] { return bitgen(truth_path, input, output, force); });

  auto* rv = app.add_subcommand("reverse", "recover the encoding database");
  rv->add_option("--truth", truth_path, "ground-truth file driving the mock toolchain")->required();
  rv->add_option("--fabric", fabric_path, "public fabric description (default: derived from the truth file)");
  rv->add_option("--output", output, "database file")->required();
  on(rv, [&] { return reverse(truth_path, fabric_path, output); });

  auto* cv = app.add_subcommand("convert", "convert a bitstream to a netlist");
  cv->add_option("--db", db_path)->required();
  cv->add_option("--reference", ref_path, "bitstream of the empty design")->required();
  cv->add_option("--input", input)->required();
  cv->add_option("--output", output)->required();
  on(cv, [&] { return convert_cmd(db_path, ref_path, input, output); });

  auto* mp = app.add_subcommand("manip", "patch a bitstream in place")->require_subcommand(1);
  for (const std::string op : {"set-pip", "unset-pip", "rewrite-lut"}) {
    auto* sub = mp->add_subcommand(op, op == "rewrite-lut" ? "TILE:SLICE:LUTn:hex" : "TILE:SRC->SINK");
    sub->add_option("--db", db_path)->required();
    sub->add_option("--input", input)->required();
    sub->add_option("--output", output)->required();
    sub->add_option("object", object, "object address")->required();
    on(sub, [&, op] { return manip(op, db_path, input, output, object); });
  }

  TrojanArgs ta;
  auto* tj = app.add_subcommand("trojan", "key-path Trojan case study")->require_subcommand(1);
  auto* tb = tj->add_subcommand("build-target", "build the self-test-protected AES target");
  tb->add_option("--db", ta.db)->required();
  tb->add_option("--key", ta.key, "self-test key k_st (hex32)");
  tb->add_option("--pref", ta.pref, "self-test plaintext (hex32)");
  tb->add_option("--user-key", ta.ku, "user key k_u (hex32; random by default)");
  tb->add_option("--output", ta.output)->required();
  tb->add_option("--spec", ta.spec, "self-test spec file")->required();
  on(tb, [&] { return trojan("build-target", ta); });
  auto* td = tj->add_subcommand("detect", "find shift registers");
  td->add_option("--input", ta.input)->required();
  td->add_option("--threshold", ta.threshold);
  on(td, [&] { return trojan("detect", ta); });
  auto* tc = tj->add_subcommand("correlate", "map key flip-flops to key bits");
  tc->add_option("--input", ta.input)->required();
  tc->add_option("--output", ta.output, "key map file")->required();
  tc->add_option("--threshold", ta.threshold);
  on(tc, [&] { return trojan("correlate", ta); });
  auto* ti = tj->add_subcommand("inject", "insert the payload LUTs");
  ti->add_option("--db", ta.db)->required();
  ti->add_option("--input", ta.input)->required();
  ti->add_option("--map", ta.map)->required();
  ti->add_option("--kst", ta.kst, "key to burn in (hex32)")->required();
  ti->add_option("--output", ta.output)->required();
  on(ti, [&] { return trojan("inject", ta); });
  auto* tv = tj->add_subcommand("verify", "self-test and random user-key trials");
  tv->add_option("--input", ta.input)->required();
  tv->add_option("--spec", ta.spec)->required();
  tv->add_option("--trials", ta.trials)->check(CLI::PositiveNumber);
  on(tv, [&] { return trojan("verify", ta); });
  auto* tr = tj->add_subcommand("bridge", "encode with bitgen and convert back");
  tr->add_option("--truth", ta.truth)->required();
  tr->add_option("--db", ta.db)->required();
  tr->add_option("--input", ta.input)->required();
  tr->add_option("--output", ta.output)->required();
  on(tr, [&] { return trojan("bridge", ta); });

  auto* sc = app.add_subcommand("selfcheck", "round-trip suite on a tiny fabric");
  on(sc, [&] { return selfcheck(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    std::cerr << app.help();
    return 2;
  }
  try {
    return run();
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
