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

#include "bitrev/netlist.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace bitrev {

ParseError::ParseError(const std::string& what, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

// ---------------------------------------------------------------------------
// TruthTable

TruthTable::TruthTable(int arity, std::uint64_t bits) : arity_(arity) {
  if (arity < 0 || arity > 6) throw ValidationError("LUT arity must be 0..6");
  std::uint64_t mask = arity == 6 ? ~0ull : ((1ull << (1u << arity)) - 1);
  if (bits & ~mask) throw ValidationError("truth table has bits beyond 2^arity entries");
  bits_ = bits;
}

TruthTable TruthTable::constant(int arity, bool value) {
  TruthTable t(arity);
  if (value) t.bits_ = arity == 6 ? ~0ull : ((1ull << (1u << arity)) - 1);
  return t;
}

TruthTable TruthTable::identity(int arity, int input) {
  TruthTable t(arity);
  for (std::size_t i = 0; i < t.size(); ++i) t.set_bit(i, (i >> input) & 1u);
  return t;
}

TruthTable TruthTable::from_hex(std::string_view hex) {
  const std::size_t digits = hex.size();
  int arity = -1;
  for (int a = 2; a <= 6; ++a)
    if ((std::size_t{1} << a) / 4 == digits) arity = a;
  if (arity < 0) throw ValidationError("LUT hex '" + std::string(hex) + "' has no valid arity");
  std::uint64_t bits = 0;
  for (char c : hex) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else throw ValidationError("LUT hex '" + std::string(hex) + "' has a non-hex digit");
    bits = bits << 4 | static_cast<std::uint64_t>(v);
  }
  return TruthTable(arity, bits);
}

void TruthTable::set_bit(std::size_t index, bool value) {
  if (index >= size()) throw ValidationError("truth-table index out of range");
  if (value) bits_ |= 1ull << index;
  else bits_ &= ~(1ull << index);
}

std::optional<int> TruthTable::passthrough_input() const {
  for (int i = 0; i < arity_; ++i)
    if (*this == identity(arity_, i)) return i;
  return std::nullopt;
}

std::string TruthTable::to_hex() const {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::size_t digits = std::max<std::size_t>(1, size() / 4);
  std::string out(digits, '0');
  for (std::size_t i = 0; i < digits; ++i)
    out[digits - 1 - i] = kDigits[(bits_ >> (4 * i)) & 0xf];
  return out;
}

// ---------------------------------------------------------------------------
// Netlist lookups

const Instance* Netlist::find_instance(std::string_view name) const {
  for (const auto& i : instances)
    if (i.name == name) return &i;
  return nullptr;
}

Instance* Netlist::find_instance(std::string_view name) {
  for (auto& i : instances)
    if (i.name == name) return &i;
  return nullptr;
}

const Net* Netlist::find_net(std::string_view name) const {
  for (const auto& n : nets)
    if (n.name == name) return &n;
  return nullptr;
}

Net* Netlist::find_net(std::string_view name) {
  for (auto& n : nets)
    if (n.name == name) return &n;
  return nullptr;
}

void Netlist::canonicalize() {
  std::sort(instances.begin(), instances.end(),
            [](const Instance& a, const Instance& b) { return a.name < b.name; });
  std::sort(nets.begin(), nets.end(), [](const Net& a, const Net& b) { return a.name < b.name; });
  for (auto& n : nets) {
    std::sort(n.inpins.begin(), n.inpins.end());
    std::sort(n.pips.begin(), n.pips.end());
  }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { kString, kWord, kComma, kSemicolon, kArrow, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token t{Tok::kEnd, {}, line_, column_};
    if (pos_ >= text_.size()) return t;
    char c = text_[pos_];
    if (c == ',') {
      advance();
      t.kind = Tok::kComma;
    } else if (c == ';') {
      advance();
      t.kind = Tok::kSemicolon;
    } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      advance();
      advance();
      t.kind = Tok::kArrow;
    } else if (c == '"') {
      advance();
      t.kind = Tok::kString;
      while (true) {
        if (pos_ >= text_.size() || text_[pos_] == '\n')
          throw ParseError("unterminated string", t.line, t.column);
        if (text_[pos_] == '"') break;
        t.text.push_back(text_[pos_]);
        advance();
      }
      advance();
    } else {
      t.kind = Tok::kWord;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (d == ',' || d == ';' || d == '"' || d == ' ' || d == '\t' || d == '\r' || d == '\n')
          break;
        t.text.push_back(d);
        advance();
      }
    }
    return t;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::kString: return "string";
    case Tok::kWord: return "word";
    case Tok::kComma: return "','";
    case Tok::kSemicolon: return "';'";
    case Tok::kArrow: return "'->'";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { tok_ = lexer_.next(); }

  Netlist parse() {
    Netlist n;
    expect_word("design");
    n.design_name = expect(Tok::kString).text;
    n.device_id = expect(Tok::kWord).text;
    if (tok_.kind == Tok::kWord) take();  // version token, e.g. v3.2
    expect(Tok::kSemicolon);

    std::unordered_set<std::string> inst_names, net_names;
    std::vector<std::pair<Token, std::string>> pin_refs;  // token, instance name
    while (tok_.kind != Tok::kEnd) {
      Token head = expect(Tok::kWord);
      if (head.text == "inst") {
        Instance inst = parse_instance();
        if (!inst_names.insert(inst.name).second)
          throw ParseError("duplicate instance \"" + inst.name + "\"", head.line, head.column);
        n.instances.push_back(std::move(inst));
      } else if (head.text == "net") {
        Net net = parse_net(pin_refs);
        if (!net_names.insert(net.name).second)
          throw ParseError("duplicate net \"" + net.name + "\"", head.line, head.column);
        n.nets.push_back(std::move(net));
      } else {
        throw ParseError("expected 'inst' or 'net', got '" + head.text + "'", head.line,
                         head.column);
      }
    }
    for (const auto& [tok, inst] : pin_refs)
      if (!inst_names.count(inst))
        throw ParseError("pin references undeclared instance \"" + inst + "\"", tok.line,
                         tok.column);
    return n;
  }

 private:
  Token take() {
    Token t = tok_;
    tok_ = lexer_.next();
    return t;
  }

  Token expect(Tok kind) {
    if (tok_.kind != kind)
      throw ParseError(std::string("expected ") + tok_name(kind) + ", got " + tok_name(tok_.kind) +
                           (tok_.text.empty() ? "" : " '" + tok_.text + "'"),
                       tok_.line, tok_.column);
    return take();
  }

  void expect_word(std::string_view word) {
    Token t = expect(Tok::kWord);
    if (t.text != word)
      throw ParseError("expected '" + std::string(word) + "', got '" + t.text + "'", t.line,
                       t.column);
  }

  Instance parse_instance() {
    Instance inst;
    inst.name = expect(Tok::kString).text;
    Token kind = expect(Tok::kString);
    auto k = parse_site_kind(kind.text);
    if (!k) throw ParseError("unknown instance kind \"" + kind.text + "\"", kind.line, kind.column);
    inst.kind = *k;
    expect(Tok::kComma);
    expect_word("placed");
    inst.tile = expect(Tok::kWord).text;
    inst.site = expect(Tok::kWord).text;
    if (tok_.kind == Tok::kComma) {
      take();
      expect_word("cfg");
      do {
        Token cfg = expect(Tok::kString);
        parse_cfg(inst, cfg);
      } while (tok_.kind == Tok::kString);
    }
    expect(Tok::kSemicolon);
    return inst;
  }

  static void parse_cfg(Instance& inst, const Token& cfg) {
    auto colon = cfg.text.find(':');
    auto fail = [&](const std::string& why) {
      throw ParseError("bad cfg \"" + cfg.text + "\": " + why, cfg.line, cfg.column);
    };
    if (colon == std::string::npos) fail("missing ':'");
    std::string key = cfg.text.substr(0, colon);
    std::string value = cfg.text.substr(colon + 1);
    auto index_of = [&](std::size_t prefix) {
      int v = -1;
      auto digits = std::string_view(key).substr(prefix);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (ec != std::errc() || p != digits.data() + digits.size() || digits.empty() || v < 0)
        fail("bad element index");
      return v;
    };
    if (key.rfind("LUT", 0) == 0) {
      int idx = index_of(3);
      try {
        if (!inst.luts.emplace(idx, TruthTable::from_hex(value)).second) fail("LUT configured twice");
      } catch (const ValidationError& e) {
        fail(e.what());
      }
    } else if (key.rfind("FF", 0) == 0) {
      int idx = index_of(2);
      if (value != "0" && value != "1") fail("FF init must be 0 or 1");
      if (!inst.ffs.emplace(idx, FfConfig{true, value == "1"}).second) fail("FF configured twice");
    } else {
      fail("unknown configuration key");
    }
  }

  Net parse_net(std::vector<std::pair<Token, std::string>>& pin_refs) {
    Net net;
    net.name = expect(Tok::kString).text;
    if (tok_.kind == Tok::kComma) take();
    while (tok_.kind != Tok::kSemicolon) {
      Token item = expect(Tok::kWord);
      if (item.text == "outpin" || item.text == "inpin") {
        Token inst = expect(Tok::kString);
        PinRef ref{inst.text, expect(Tok::kWord).text};
        pin_refs.emplace_back(inst, inst.text);
        if (item.text == "outpin") {
          if (net.outpin) throw ParseError("net has two outpins", item.line, item.column);
          net.outpin = ref;
        } else {
          net.inpins.push_back(ref);
        }
      } else if (item.text == "pip") {
        Pip pip;
        pip.tile = expect(Tok::kWord).text;
        pip.source = expect(Tok::kWord).text;
        expect(Tok::kArrow);
        pip.sink = expect(Tok::kWord).text;
        net.pips.push_back(std::move(pip));
      } else {
        throw ParseError("expected outpin, inpin or pip, got '" + item.text + "'", item.line,
                         item.column);
      }
      if (tok_.kind == Tok::kComma) take();
      else if (tok_.kind != Tok::kSemicolon)
        throw ParseError(std::string("expected ',' or ';', got ") + tok_name(tok_.kind), tok_.line,
                         tok_.column);
    }
    take();
    return net;
  }

  Lexer lexer_;
  Token tok_;
};

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

Netlist parse_netlist(std::string_view text) { return Parser(text).parse(); }

std::string write_netlist(const Netlist& netlist) {
  Netlist n = netlist;
  n.canonicalize();
  std::ostringstream out;
  out << "design " << quoted(n.design_name) << " " << n.device_id << " ;\n";
  if (!n.instances.empty()) out << "\n";
  for (const auto& inst : n.instances) {
    out << "inst " << quoted(inst.name) << " " << quoted(std::string(site_kind_name(inst.kind)))
        << ", placed " << inst.tile << " " << inst.site;
    if (!inst.luts.empty() || !inst.ffs.empty()) {
      out << ", cfg";
      for (const auto& [idx, table] : inst.luts)
        out << " \"LUT" << idx << ":" << table.to_hex() << "\"";
      for (const auto& [idx, ff] : inst.ffs) out << " \"FF" << idx << ":" << (ff.init ? 1 : 0) << "\"";
    }
    out << " ;\n";
  }
  for (const auto& net : n.nets) {
    out << "\nnet " << quoted(net.name) << ",\n";
    if (net.outpin) out << "  outpin " << quoted(net.outpin->instance) << " " << net.outpin->pin << ",\n";
    for (const auto& p : net.inpins) out << "  inpin " << quoted(p.instance) << " " << p.pin << ",\n";
    for (const auto& p : net.pips)
      out << "  pip " << p.tile << " " << p.source << " -> " << p.sink << ",\n";
    out << "  ;\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation

void validate_names(const Netlist& netlist) {
  std::unordered_set<std::string> inst_names, net_names;
  for (const auto& i : netlist.instances)
    if (!inst_names.insert(i.name).second)
      throw ValidationError("duplicate instance \"" + i.name + "\"");
  for (const auto& n : netlist.nets) {
    if (!net_names.insert(n.name).second) throw ValidationError("duplicate net \"" + n.name + "\"");
    auto check = [&](const PinRef& p) {
      if (!inst_names.count(p.instance))
        throw ValidationError("net \"" + n.name + "\" references missing instance \"" + p.instance +
                              "\"");
    };
    if (n.outpin) check(*n.outpin);
    for (const auto& p : n.inpins) check(p);
  }
}

bool is_fabric_pin(const Netlist& netlist, const PinRef& pin) {
  const Instance* inst = netlist.find_instance(pin.instance);
  return inst && inst->kind == SiteKind::kSlice;
}

namespace {

Coord instance_coord(const Instance& inst) {
  auto site = parse_site(inst.site);
  if (!site) throw ValidationError("instance \"" + inst.name + "\" has unknown site " + inst.site);
  return site->second;
}

Coord pip_coord(const Fabric& fabric, const Net& net, const Pip& pip) {
  auto c = parse_sm_tile(pip.tile);
  if (!c || !fabric.contains(*c))
    throw ValidationError("net \"" + net.name + "\": unknown switch-matrix tile " + pip.tile);
  return *c;
}

}  // namespace

void validate_structure(const Netlist& netlist, const Fabric& fabric) {
  validate_names(netlist);
  std::unordered_map<std::string, const Instance*> by_name;
  std::set<std::string> sites;
  for (const auto& inst : netlist.instances) {
    by_name[inst.name] = &inst;
    auto site = parse_site(inst.site);
    if (!site || !fabric.contains(site->second))
      throw ValidationError("instance \"" + inst.name + "\" placed on unknown site " + inst.site);
    if (site->first != inst.kind)
      throw ValidationError("instance \"" + inst.name + "\" of kind " +
                            std::string(site_kind_name(inst.kind)) + " placed on " + inst.site);
    if (inst.tile != clb_tile_name(site->second))
      throw ValidationError("instance \"" + inst.name + "\": site " + inst.site +
                            " is not in tile " + inst.tile);
    if (!sites.insert(inst.site).second)
      throw ValidationError("site " + inst.site + " holds more than one instance");
    if (inst.kind != SiteKind::kSlice && (!inst.luts.empty() || !inst.ffs.empty()))
      throw ValidationError("instance \"" + inst.name + "\" carries LUT/FF configuration but is " +
                            std::string(site_kind_name(inst.kind)));
    for (const auto& [idx, table] : inst.luts) {
      if (idx < 0 || idx >= fabric.slice.luts)
        throw ValidationError("instance \"" + inst.name + "\" configures missing LUT" +
                              std::to_string(idx));
      if (table.arity() != fabric.slice.lut_inputs)
        throw ValidationError("instance \"" + inst.name + "\" LUT" + std::to_string(idx) +
                              " arity " + std::to_string(table.arity()) + " does not match " +
                              std::to_string(fabric.slice.lut_inputs));
    }
    for (const auto& [idx, ff] : inst.ffs)
      if (idx < 0 || idx >= fabric.slice.ffs)
        throw ValidationError("instance \"" + inst.name + "\" configures missing FF" +
                              std::to_string(idx));
  }

  std::set<PinRef> driven, driving;
  std::set<std::pair<Coord, std::string>> used_sinks;
  for (const auto& net : netlist.nets) {
    auto check_pin = [&](const PinRef& p, bool is_out) {
      const Instance& inst = *by_name.at(p.instance);
      bool ok = true;
      if (inst.kind == SiteKind::kSlice) {
        auto pin = decode_slice_pin(fabric.slice, p.pin);
        ok = pin && pin->is_source() == is_out;
      } else if (inst.kind == SiteKind::kIob) {
        ok = p.pin == (is_out ? "I" : "O");
      }
      if (!ok)
        throw ValidationError("net \"" + net.name + "\": " + (is_out ? "outpin " : "inpin ") +
                              p.instance + "." + p.pin + " is not a valid " +
                              (is_out ? "output" : "input") + " pin");
      if (!(is_out ? driving : driven).insert(p).second)
        throw ValidationError("pin " + p.instance + "." + p.pin + " is connected to two nets");
    };
    if (net.outpin) check_pin(*net.outpin, true);
    for (const auto& p : net.inpins) check_pin(p, false);
    for (const auto& pip : net.pips) {
      Coord c = pip_coord(fabric, net, pip);
      if (!fabric.type_at(c).find(pip.source, pip.sink))
        throw ValidationError("net \"" + net.name + "\": " + pip.tile + " has no PIP " + pip.source +
                              " -> " + pip.sink);
      if (!used_sinks.emplace(c, pip.sink).second)
        throw ValidationError("sink " + pip.sink + " of " + pip.tile +
                              " is driven by more than one PIP");
    }
  }
}

void validate_routing(const Netlist& netlist, const Fabric& fabric) {
  validate_structure(netlist, fabric);
  for (const auto& net : netlist.nets) {
    const bool slice_driver = net.outpin && is_fabric_pin(netlist, *net.outpin);
    if (!slice_driver) {
      if (!net.pips.empty())
        throw ValidationError("net \"" + net.name + "\" has PIPs but no slice driver");
      continue;
    }
    // source wire at a tile -> PIP indices leaving it
    std::map<std::pair<Coord, std::string>, std::vector<std::size_t>> from;
    for (std::size_t i = 0; i < net.pips.size(); ++i)
      from[{pip_coord(fabric, net, net.pips[i]), net.pips[i].source}].push_back(i);

    std::vector<bool> used(net.pips.size(), false);
    std::set<std::pair<Coord, std::string>> reached_sinks;
    std::vector<std::pair<Coord, std::string>> stack{
        {instance_coord(*netlist.find_instance(net.outpin->instance)), net.outpin->pin}};
    std::set<std::pair<Coord, std::string>> seen_sources(stack.begin(), stack.end());
    while (!stack.empty()) {
      auto node = stack.back();
      stack.pop_back();
      auto it = from.find(node);
      if (it == from.end()) continue;
      for (auto i : it->second) {
        used[i] = true;
        reached_sinks.emplace(node.first, net.pips[i].sink);
        if (auto next = fabric.static_successor(node.first, net.pips[i].sink))
          if (seen_sources.insert(*next).second) stack.push_back(*next);
      }
    }
    for (std::size_t i = 0; i < used.size(); ++i)
      if (!used[i])
        throw ValidationError("net \"" + net.name + "\": PIP " + net.pips[i].tile + " " +
                              net.pips[i].source + " -> " + net.pips[i].sink +
                              " is not reachable from the driver");
    for (const auto& p : net.inpins) {
      if (!is_fabric_pin(netlist, p)) continue;
      Coord c = instance_coord(*netlist.find_instance(p.instance));
      if (!reached_sinks.count({c, p.pin}))
        throw ValidationError("net \"" + net.name + "\" does not route to " + p.instance + "." +
                              p.pin);
    }
  }
}

}  // namespace bitrev
