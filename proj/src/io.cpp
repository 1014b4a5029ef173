#include "prooftree/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace prooftree {

namespace {

using Json = nlohmann::ordered_json;

struct Word {
  std::string text;
  std::size_t col;  // 1-based
};

struct Line {
  std::size_t no;
  std::string text;
};

std::vector<Word> words(std::string_view s, std::size_t offset = 0) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    out.push_back({std::string(s.substr(i, j - i)), offset + i + 1});
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Column (1-based) of the first non-space character of `part` inside `line`.
std::size_t column_of(std::string_view line, std::string_view part) {
  std::size_t off = static_cast<std::size_t>(part.data() - line.data());
  std::size_t lead = 0;
  while (lead < part.size() && std::isspace(static_cast<unsigned char>(part[lead]))) ++lead;
  return off + lead + 1;
}

// Non-empty, non-comment lines grouped under section keywords.
std::map<std::string, std::vector<Line>> sections(std::string_view text, const std::set<std::string>& keys,
                                                  std::vector<Line>* directives) {
  std::map<std::string, std::vector<Line>> out;
  std::string current;
  std::size_t no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = end + 1;
    ++no;
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (keys.count(std::string(t))) {
      current = std::string(t);
      out[current];
      continue;
    }
    auto ws = words(line);
    if (current.empty()) {
      if (directives) {
        directives->push_back({no, line});
        continue;
      }
      throw ParseError(no, ws.front().col, "expected a section keyword");
    }
    out[current].push_back({no, line});
  }
  return out;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += sep;
    out += xs[i];
  }
  return out;
}

}  // namespace

std::shared_ptr<const Calculus> parse_calculus(std::string_view text) {
  auto secs = sections(text, {"sorts", "connectives", "metavars", "rules"}, nullptr);
  SignatureSpec spec;
  for (const Line& l : secs["sorts"]) {
    auto ws = words(l.text);
    SortDecl d;
    d.name = ws[0].text;
    if (ws.size() == 1) {
    } else if (ws.size() == 3 && ws[1].text == ":" && ws[2].text == "literals") {
      d.literals = true;
    } else if (ws.size() == 5 && ws[1].text == ":" && ws[2].text == "seq" && ws[3].text == "of") {
      d.kind = SortKind::sequence;
      d.base = ws[4].text;
    } else {
      throw ParseError(l.no, ws[0].col, "expected 'Name', 'Name : literals' or 'Name : seq of Base'");
    }
    spec.sorts.push_back(d);
  }
  for (const Line& l : secs["connectives"]) {
    auto ws = words(l.text);
    if (ws.size() < 4 || ws[1].text != ":") throw ParseError(l.no, ws[0].col, "expected 'name : sources -> target'");
    std::size_t arrow = 0;
    for (std::size_t i = 2; i < ws.size(); ++i)
      if (ws[i].text == "->") arrow = i;
    if (arrow == 0 || arrow + 1 >= ws.size()) throw ParseError(l.no, ws[1].col, "missing '-> target'");
    ConnectiveDecl c;
    c.name = ws[0].text;
    for (std::size_t i = 2; i < arrow; ++i) c.src.push_back(ws[i].text);
    c.trg = ws[arrow + 1].text;
    std::size_t rest = arrow + 2;
    if (rest < ws.size()) {
      if (ws[rest].text != "infix" || rest + 2 != ws.size()) throw ParseError(l.no, ws[rest].col, "expected 'infix N'");
      try {
        c.precedence = std::stoi(ws[rest + 1].text);
      } catch (const std::exception&) {
        throw ParseError(l.no, ws[rest + 1].col, "expected a precedence");
      }
      if (c.precedence <= 0) throw ParseError(l.no, ws[rest + 1].col, "precedence must be positive");
    }
    spec.connectives.push_back(c);
  }
  auto issues = validate_signature(spec);
  if (!issues.empty()) throw ParseError(secs["sorts"].empty() ? 1 : secs["sorts"].front().no, 1, issues.front().message);
  auto sig = std::make_shared<const Signature>(spec);

  VariablePool pool;
  for (const Line& l : secs["metavars"]) {
    auto ws = words(l.text);
    if (ws.size() < 3 || ws[ws.size() - 2].text != ":") throw ParseError(l.no, ws[0].col, "expected 'names : Sort'");
    auto s = sig->find_sort(ws.back().text);
    if (!s) throw ParseError(l.no, ws.back().col, "unknown sort '" + ws.back().text + "'");
    for (std::size_t i = 0; i + 2 < ws.size(); ++i) {
      if (!pool.metavars.emplace(ws[i].text, *s).second)
        throw ParseError(l.no, ws[i].col, "duplicate metavariable '" + ws[i].text + "'");
    }
  }
  auto clash = validate_pool(*sig, pool);
  if (!clash.empty()) throw ParseError(secs["metavars"].empty() ? 1 : secs["metavars"].front().no, 1, clash.front());

  std::vector<Rule> rules;
  for (const Line& l : secs["rules"]) {
    std::string_view line = l.text;
    std::string_view body = trim(line);
    bool axiom = false;
    if (body.rfind("axiom ", 0) == 0) {
      axiom = true;
      body.remove_prefix(6);
    }
    std::size_t colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError(l.no, column_of(line, body), "expected 'Name: ...'");
    std::string name(trim(body.substr(0, colon)));
    if (name.empty()) throw ParseError(l.no, column_of(line, body), "missing rule name");
    std::string_view rest = body.substr(colon + 1);
    std::vector<std::string_view> hyp_parts;
    std::string_view concl_part;
    std::size_t sep = rest.find("==>");
    if (axiom) {
      if (sep != std::string_view::npos) throw ParseError(l.no, column_of(line, rest.substr(sep)), "axiom with hypotheses");
      concl_part = rest;
    } else {
      if (sep == std::string_view::npos) throw ParseError(l.no, column_of(line, rest), "missing '==>'");
      if (rest.find("==>", sep + 3) != std::string_view::npos)
        throw ParseError(l.no, column_of(line, rest.substr(sep + 3)), "repeated '==>'");
      std::string_view hyps = rest.substr(0, sep);
      concl_part = rest.substr(sep + 3);
      if (!trim(hyps).empty()) {
        std::size_t p = 0;
        while (true) {
          std::size_t q = hyps.find(';', p);
          hyp_parts.push_back(hyps.substr(p, q == std::string_view::npos ? std::string_view::npos : q - p));
          if (q == std::string_view::npos) break;
          p = q + 1;
        }
      }
    }
    auto pat = [&](std::string_view part) {
      if (trim(part).empty()) throw ParseError(l.no, column_of(line, part), "empty pattern");
      return parse_pattern(*sig, pool, trim(part), std::nullopt, l.no, column_of(line, part));
    };
    SchematicRule r;
    for (auto h : hyp_parts) r.hyps.push_back(pat(h));
    r.concl = pat(concl_part);
    rules.push_back({name, r});
  }
  return std::make_shared<const Calculus>(sig, pool, std::move(rules));
}

std::string print_calculus(const Calculus& k) {
  const Signature& sig = k.signature();
  std::ostringstream out;
  out << "sorts\n";
  for (const auto& s : sig.sorts()) {
    out << "  " << s.name;
    if (s.kind == SortKind::sequence) out << " : seq of " << sig.sort(s.base).name;
    if (s.literals) out << " : literals";
    out << '\n';
  }
  out << "connectives\n";
  for (const auto& c : sig.connectives()) {
    out << "  " << c.name << " :";
    for (SortId s : c.src) out << ' ' << sig.sort(s).name;
    out << " -> " << sig.sort(c.trg).name;
    if (c.infix()) out << " infix " << c.precedence;
    out << '\n';
  }
  out << "metavars\n";
  for (SortId s = 0; s < sig.sorts().size(); ++s) {
    std::vector<std::string> names;
    for (const auto& [n, ms] : k.pool().metavars)
      if (ms == s) names.push_back(n);
    if (!names.empty()) out << "  " << join(names, " ") << " : " << sig.sort(s).name << '\n';
  }
  out << "rules\n";
  for (const Rule& r : k.rules()) {
    const SchematicRule* s = r.schematic();
    if (!s) {
      out << "  # " << r.name << " is semantic\n";
      continue;
    }
    if (s->hyps.empty()) {
      out << "  axiom " << r.name << ": " << print(sig, s->concl) << '\n';
      continue;
    }
    std::vector<std::string> hs;
    for (const Term& h : s->hyps) hs.push_back(print(sig, h));
    out << "  " << r.name << ": " << join(hs, " ; ") << " ==> " << print(sig, s->concl) << '\n';
  }
  return out.str();
}

PtaFile parse_pta(std::string_view text, const CalculusLoader& load) {
  std::vector<Line> directives;
  auto secs = sections(text, {"states", "delta", "eps"}, &directives);
  PtaFile out;
  for (const Line& l : directives) {
    auto ws = words(l.text);
    if (ws.size() != 2 || ws[0].text != "calculus") throw ParseError(l.no, ws[0].col, "expected 'calculus <path>'");
    if (!out.calculus_path.empty()) throw ParseError(l.no, ws[0].col, "repeated calculus directive");
    out.calculus_path = ws[1].text;
  }
  if (out.calculus_path.empty()) throw ParseError(1, 1, "missing 'calculus <path>'");
  SchematicPta& p = out.pta;
  p.calculus = load(out.calculus_path);
  const Calculus& k = *p.calculus;
  std::map<std::string, StateId> ids;
  for (const Line& l : secs["states"]) {
    std::string_view line = l.text;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(l.no, column_of(line, line), "expected 'name = pattern'");
    std::string name(trim(line.substr(0, eq)));
    if (name.empty() || name.find_first_of(" \t") != std::string::npos)
      throw ParseError(l.no, column_of(line, line), "bad state name");
    if (!ids.emplace(name, p.states.size()).second) throw ParseError(l.no, column_of(line, line), "duplicate state '" + name + "'");
    std::string_view pat = line.substr(eq + 1);
    p.state_names.push_back(name);
    p.states.push_back(parse_pattern(k.signature(), k.pool(), trim(pat), std::nullopt, l.no, column_of(line, pat)));
  }
  auto state = [&](const Line& l, const Word& w) {
    auto it = ids.find(w.text);
    if (it == ids.end()) throw ParseError(l.no, w.col, "unknown state '" + w.text + "'");
    return it->second;
  };
  for (const Line& l : secs["delta"]) {
    std::string_view line = l.text;
    std::size_t open = line.find("-[");
    std::size_t close = line.rfind("]->");
    if (open == std::string_view::npos || close == std::string_view::npos || close < open + 2)
      throw ParseError(l.no, column_of(line, line), "expected 'q1 ... qn -[Rule]-> q'");
    Transition t;
    t.letter = std::string(line.substr(open + 2, close - open - 2));
    if (!k.find_rule(t.letter)) throw ParseError(l.no, open + 3, "unknown rule '" + t.letter + "'");
    for (const Word& w : words(line.substr(0, open))) t.src.push_back(state(l, w));
    auto trg = words(line.substr(close + 3), close + 3);
    if (trg.size() != 1) throw ParseError(l.no, close + 4, "expected one target state");
    t.trg = state(l, trg[0]);
    p.delta.push_back(std::move(t));
  }
  for (const Line& l : secs["eps"]) {
    auto ws = words(l.text);
    if (ws.size() != 3 || ws[1].text != "~>") throw ParseError(l.no, ws[0].col, "expected 'q ~> q'");
    p.delta_eps.emplace_back(state(l, ws[0]), state(l, ws[2]));
  }
  validate_pta(p);
  return out;
}

std::string print_pta(const SchematicPta& p, const std::string& calculus_path) {
  const Signature& sig = p.calculus->signature();
  std::ostringstream out;
  out << "calculus " << calculus_path << '\n';
  out << "states\n";
  for (std::size_t q = 0; q < p.states.size(); ++q) out << "  " << p.state_names[q] << " = " << print(sig, p.states[q]) << '\n';
  out << "delta\n";
  for (const Transition& t : p.delta) {
    out << "  ";
    for (StateId s : t.src) out << p.state_names[s] << ' ';
    out << "-[" << t.letter << "]-> " << p.state_names[t.trg] << '\n';
  }
  out << "eps\n";
  for (const auto& [u, v] : p.delta_eps) out << "  " << p.state_names[u] << " ~> " << p.state_names[v] << '\n';
  return out.str();
}

Hypergraph pta_graph(const SchematicPta& p) {
  Hypergraph g = underlying_graph(as_automaton(p)).graph;
  for (std::size_t q = 0; q < p.states.size(); ++q) g.vertices[q] = print(p.calculus->signature(), p.states[q]);
  return g;
}

TermCodec calculus_codec(const Calculus& k) {
  auto sig = k.signature_ptr();
  VariablePool pool = k.pool();
  return {[sig, pool](std::string_view s) { return parse_pattern(*sig, pool, s); },
          [sig](const Term& t) { return print(*sig, t); }};
}

namespace {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(1, e.byte, std::string("malformed JSON: ") + e.what());
  }
}

[[noreturn]] void schema(const std::string& msg) { throw ParseError(1, 1, "schema: " + msg); }

Derivation derivation_of(const Json& j, const TermCodec& codec, const std::string& at) {
  if (!j.is_object()) schema("node " + at + " is not an object");
  if (!j.contains("term") || !j["term"].is_string()) schema("node " + at + " lacks a string 'term'");
  if (!j.contains("rule") || !j["rule"].is_string()) schema("node " + at + " lacks a string 'rule'");
  Derivation d;
  d.term = codec.parse(j["term"].get<std::string>());
  d.rule = j["rule"].get<std::string>();
  if (j.contains("children")) {
    if (!j["children"].is_array()) schema("node " + at + ": 'children' is not an array");
    std::size_t i = 0;
    for (const auto& c : j["children"]) {
      ++i;
      d.children.push_back(derivation_of(c, codec, at == "e" ? std::to_string(i) : at + "." + std::to_string(i)));
    }
  }
  return d;
}

Json derivation_to(const Derivation& d, const TermCodec& codec) {
  Json j;
  j["term"] = codec.print(d.term);
  j["rule"] = d.rule;
  j["children"] = Json::array();
  for (const auto& c : d.children) j["children"].push_back(derivation_to(c, codec));
  return j;
}

Hyperwalk hyperwalk_of_json(const Json& j, const std::string& at) {
  if (!j.is_object()) schema("node " + at + " is not an object");
  if (!j.contains("pairs") || !j["pairs"].is_array() || j["pairs"].empty())
    schema("node " + at + " lacks a non-empty 'pairs' array");
  Hyperwalk h;
  for (const auto& p : j["pairs"]) {
    if (!p.is_object() || !p.contains("edge") || !p.contains("vertex") || !p["edge"].is_number_unsigned() ||
        !p["vertex"].is_number_unsigned())
      schema("node " + at + ": pairs need unsigned 'edge' and 'vertex'");
    h.pairs.emplace_back(p["edge"].get<std::size_t>(), p["vertex"].get<std::size_t>());
  }
  if (j.contains("children")) {
    if (!j["children"].is_array()) schema("node " + at + ": 'children' is not an array");
    std::size_t i = 0;
    for (const auto& c : j["children"]) {
      ++i;
      h.children.push_back(hyperwalk_of_json(c, at == "e" ? std::to_string(i) : at + "." + std::to_string(i)));
    }
  }
  return h;
}

Json hyperwalk_to(const Hyperwalk& h) {
  Json j;
  j["pairs"] = Json::array();
  for (const auto& [e, v] : h.pairs) j["pairs"].push_back(Json{{"edge", e}, {"vertex", v}});
  j["children"] = Json::array();
  for (const auto& c : h.children) j["children"].push_back(hyperwalk_to(c));
  return j;
}

}  // namespace

Derivation parse_derivation_json(std::string_view text, const TermCodec& codec) {
  return derivation_of(parse_json(text), codec, "e");
}

std::string derivation_json(const Derivation& d, const TermCodec& codec) { return derivation_to(d, codec).dump(2) + "\n"; }

Hyperwalk parse_hyperwalk_json(std::string_view text) { return hyperwalk_of_json(parse_json(text), "e"); }

std::string hyperwalk_json(const Hyperwalk& h) { return hyperwalk_to(h).dump(2) + "\n"; }

std::string format_run(const Automaton& a, const Run& run) {
  std::ostringstream out;
  for (const auto& [addr, word] : run) {
    out << format_address(addr);
    for (StateId q : word) out << ' ' << a.state_names.at(q);
    out << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace prooftree
