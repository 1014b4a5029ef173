// Command-line front end.
//
// Exit codes: 0 success or proven, 1 refuted, rejected or incorrect,
// 2 usage or parse error, 3 unknown.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "prooftree/calculus.hpp"
#include "prooftree/domains.hpp"
#include "prooftree/graph.hpp"
#include "prooftree/io.hpp"
#include "prooftree/pta.hpp"

namespace fs = std::filesystem;
using namespace prooftree;

namespace {

constexpr int kOk = 0, kNo = 1, kUsage = 2, kUnknown = 3;

struct Failure {
  int code;
  std::string message;
};

bool color_enabled() {
  const char* env = std::getenv("PTA_COLOR");
  if (env && std::string(env) == "0") return false;
  if (env && std::string(env) == "1") return true;
  return isatty(STDOUT_FILENO) != 0;
}

std::string paint(const std::string& text, int code) {
  static const bool on = color_enabled();
  if (!on) return text;
  return "\x1b[" + std::to_string(code) + "m" + text + "\x1b[0m";
}

std::string verdict_text(Verdict v) {
  const std::string name = verdict_name(v);
  switch (v) {
    case Verdict::proven:
    case Verdict::proven_up_to_bound:
      return paint(name, 32);
    case Verdict::refuted:
      return paint(name, 31);
    case Verdict::unknown:
      return paint(name, 33);
  }
  return name;
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::proven:
    case Verdict::proven_up_to_bound:
      return kOk;
    case Verdict::refuted:
      return kNo;
    case Verdict::unknown:
      return kUnknown;
  }
  return kUnknown;
}

std::string slurp(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::runtime_error& e) {
    throw Failure{kUsage, e.what()};
  }
}

std::shared_ptr<const Calculus> load_calculus(const std::string& path) {
  try {
    return parse_calculus(slurp(path));
  } catch (const ParseError& e) {
    throw Failure{kUsage, path + ":" + e.what()};
  } catch (const CalculusError& e) {
    throw Failure{kUsage, path + ": " + e.what()};
  }
}

PtaFile load_pta(const std::string& path) {
  const fs::path dir = fs::path(path).parent_path();
  try {
    return parse_pta(slurp(path), [&](const std::string& rel) { return load_calculus((dir / rel).string()); });
  } catch (const ParseError& e) {
    throw Failure{kUsage, path + ":" + e.what()};
  } catch (const PtaError& e) {
    throw Failure{kUsage, path + ": " + e.what()};
  }
}

// An automaton given as a PTA file or as builtin:<variant>.
struct Subject {
  std::optional<ArthmVariant> builtin;
  std::optional<SchematicPta> pta;
  Automaton automaton;

  const Calculus& calculus() const { return builtin ? *arthm_domain().calculus : *pta->calculus; }
};

Subject load_subject(const std::string& spec) {
  Subject s;
  if (spec.rfind("builtin:", 0) == 0) {
    s.builtin = parse_arthm_variant(spec.substr(8));
    if (!s.builtin) throw Failure{kUsage, "unknown builtin automaton " + spec};
    s.automaton = arthm_automaton(*s.builtin);
    return s;
  }
  s.pta = load_pta(spec).pta;
  s.automaton = as_automaton(*s.pta);
  return s;
}

TermCodec codec_for(const Calculus& k, bool builtin) {
  if (!builtin) return calculus_codec(k);
  const SemanticDomain& dom = arthm_domain();
  return {[&dom](std::string_view text) {
            auto t = dom.parse(text);
            if (!t) throw ParseError(1, 1, "not a natural number: " + std::string(text));
            return *t;
          },
          dom.print};
}

Derivation load_derivation(const std::string& path, const Calculus& k, bool builtin) {
  try {
    return parse_derivation_json(slurp(path), codec_for(k, builtin));
  } catch (const ParseError& e) {
    throw Failure{kUsage, path + ":" + e.what()};
  }
}

void print_report(const CheckReport& r, const std::string& what) {
  std::cout << what << ": " << verdict_text(r.verdict);
  if (r.verdict == Verdict::proven_up_to_bound) std::cout << " (bound " << r.bound << ")";
  std::cout << '\n';
  for (const auto& f : r.details) {
    std::cout << "  " << f.subject << ": " << verdict_name(f.verdict);
    if (!f.detail.empty()) std::cout << " -- " << f.detail;
    std::cout << '\n';
  }
  if (r.witness) std::cout << "witness: " << r.witness->text << '\n';
}

int cmd_validate(const std::string& calc, const std::string& deriv) {
  const bool builtin = calc.rfind("builtin:", 0) == 0;
  auto k = builtin ? arthm_domain().calculus : load_calculus(calc);
  Derivation d = load_derivation(deriv, *k, builtin);
  auto err = validate_derivation(*k, d);
  if (!err) {
    std::cout << "valid\n";
    return kOk;
  }
  std::cout << "invalid at " << format_address(err->address) << " rule " << err->rule << ": " << err->message << '\n';
  return kNo;
}

int cmd_canonical(const std::string& calc, const std::string& out) {
  if (calc.rfind("builtin:", 0) == 0) {
    std::cerr << "canonical PTAs need schematic rules\n";
    return kNo;
  }
  CanonicalPta c;
  try {
    c = canonical_pta(load_calculus(calc));
  } catch (const PtaError& e) {
    std::cerr << e.what() << '\n';
    return kNo;
  }
  if (out.empty()) {
    std::cout << print_pta(c.pta, calc);
  } else {
    const fs::path base = fs::absolute(out).parent_path();
    const std::string rel = fs::relative(fs::absolute(calc), base).generic_string();
    std::ofstream file(out, std::ios::binary);
    if (!file) throw Failure{kUsage, "cannot write " + out};
    file << print_pta(c.pta, rel);
  }
  for (const auto& r : c.approximate_rules) std::cerr << "note: rule " << r << " is not modular\n";
  return kOk;
}

int cmd_check(const std::string& spec, const std::string& which, std::size_t bound, std::optional<std::size_t> refute_depth) {
  Subject s = load_subject(spec);
  const Property prop = which == "consistent" ? Property::consistent : which == "complete" ? Property::complete : Property::total;
  CheckReport r;
  if (s.builtin) {
    r = bounded_property_check(s.automaton, prop, bound);
    if (prop == Property::complete && refute_depth && r.verdict == Verdict::refuted) {
      for (auto& f : r.details) {
        if (f.verdict == Verdict::refuted) f.verdict = Verdict::unknown;
      }
      if (auto cx = bounded_counterexample(s.automaton, s.calculus(), *refute_depth, bound)) {
        r.witness = Witness{cx->rule, std::nullopt, {}, {}, cx->term, *cx, "derivation of " + arthm_domain().print(cx->term) + " is rejected"};
      } else {
        r.verdict = Verdict::unknown;
        r.witness.reset();
        r.details.push_back({"language", Verdict::unknown, "no rejected derivation up to depth " + std::to_string(*refute_depth)});
      }
    }
  } else {
    CheckOptions opts;
    opts.bound = bound;
    r = prop == Property::consistent ? check_consistent(*s.pta, opts)
        : prop == Property::complete ? check_complete(*s.pta, opts)
                                     : check_total(*s.pta, opts);
    if (prop == Property::complete && refute_depth && r.verdict == Verdict::unknown) {
      if (auto cx = refute_completeness(*s.pta, *refute_depth, bound)) {
        r.verdict = Verdict::refuted;
        r.witness = Witness{cx->rule, std::nullopt, {}, {}, cx->term, *cx,
                            "derivation of " + print(s.pta->calculus->signature(), cx->term) + " is rejected"};
      }
    }
  }
  print_report(r, which);
  if (r.witness && r.witness->derivation) {
    std::cout << derivation_json(*r.witness->derivation, codec_for(s.calculus(), s.builtin.has_value()));
  }
  return exit_code(r.verdict);
}

int cmd_accepts(const std::string& spec, const std::string& deriv, bool emit_run) {
  Subject s = load_subject(spec);
  Derivation d = load_derivation(deriv, s.calculus(), s.builtin.has_value());
  auto run = find_run(s.automaton, d);
  if (!run) {
    std::cout << paint("rejected", 31) << '\n';
    return kNo;
  }
  std::cout << paint("accepted", 32) << '\n';
  if (emit_run) std::cout << format_run(s.automaton, *run);
  return kOk;
}

std::string skeleton(const Derivation& d) {
  if (d.children.empty()) return d.rule;
  std::string out = d.rule + "(";
  for (std::size_t i = 0; i < d.children.size(); ++i) out += (i ? ", " : "") + skeleton(d.children[i]);
  return out + ")";
}

int cmd_enum(const std::string& calc, DerivationEnumOptions opts, const std::string& root_sort, const std::string& root_conn,
             bool count_only) {
  std::shared_ptr<const Calculus> k;
  std::function<std::string(const Term&)> show;
  if (calc.rfind("builtin:", 0) == 0) {
    k = arthm_domain().calculus;
    show = arthm_domain().print;
  } else {
    k = load_calculus(calc);
    show = [k](const Term& t) { return print(k->signature(), t); };
  }
  const Signature& sig = k->signature();
  if (!root_sort.empty()) {
    auto s = sig.find_sort(root_sort);
    if (!s) throw Failure{kUsage, "unknown sort " + root_sort};
    opts.root_sort = *s;
  }
  if (!root_conn.empty()) {
    auto c = sig.find_connective(root_conn);
    if (!c) throw Failure{kUsage, "unknown connective " + root_conn};
    opts.root_connective = *c;
  }
  try {
    if (count_only) {
      std::cout << count_derivations(*k, opts) << '\n';
      return kOk;
    }
    std::size_t n = 0;
    for_each_derivation(*k, opts, [&](const Derivation& d) {
      std::cout << show(d.term) << "  <=  " << skeleton(d) << '\n';
      ++n;
      return false;
    });
    std::cout << "# " << n << " derivations\n";
  } catch (const ResourceLimit& e) {
    std::cerr << e.what() << '\n';
    return kUnknown;
  } catch (const CalculusError& e) {
    std::cerr << e.what() << '\n';
    return kNo;
  }
  return kOk;
}

int cmd_dot(const std::string& spec, const std::string& style, const std::string& name) {
  Subject s = load_subject(spec);
  const Hypergraph g = s.pta ? pta_graph(*s.pta) : underlying_graph(s.automaton).graph;
  std::cout << export_dot(g, {style == "bipartite" ? DotStyle::bipartite : DotStyle::junction, name});
  return kOk;
}

int cmd_hyperwalk(const std::string& spec, const std::string& walk_path, const HyperwalkOptions& opts) {
  Subject s = load_subject(spec);
  Hyperwalk h;
  try {
    h = parse_hyperwalk_json(slurp(walk_path));
  } catch (const ParseError& e) {
    throw Failure{kUsage, walk_path + ":" + e.what()};
  }
  HyperwalkResult r;
  try {
    r = check_hyperwalk_correct(s.automaton, h, opts);
  } catch (const GraphError& e) {
    std::cout << paint("incorrect", 31) << ": " << e.what() << '\n';
    return kNo;
  }
  if (r.status == Correctness::resource_limit) {
    std::cout << paint("unknown", 33) << ": " << r.reason << '\n';
    return kUnknown;
  }
  if (r.status == Correctness::incorrect) {
    std::cout << paint("incorrect", 31) << " at " << format_address(r.blocking) << ": " << r.reason << '\n';
    return kNo;
  }
  std::cout << derivation_json(*r.derivation, codec_for(s.calculus(), s.builtin.has_value()));
  std::cerr << format_run(s.automaton, *r.run);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proof tree automata toolkit"};
  app.require_subcommand(1);

  std::string calc, deriv, out, spec, which, style = "junction", name = "PTG", walk, root_sort, root_conn;
  std::size_t bound = 10;
  std::optional<std::size_t> refute_depth;
  bool emit_run = false, count_only = false;
  DerivationEnumOptions eopts;
  HyperwalkOptions hopts;
  std::optional<std::size_t> instance_bound;

  auto* validate = app.add_subcommand("validate", "check a derivation against a calculus");
  validate->add_option("calculus", calc, "calculus file")->required();
  validate->add_option("derivation", deriv, "derivation JSON")->required();

  auto* canonical = app.add_subcommand("canonical", "build the canonical PTA of a calculus");
  canonical->add_option("calculus", calc, "calculus file")->required();
  canonical->add_option("output", out, "output PTA file (default: stdout)");

  auto* check = app.add_subcommand("check", "check consistency, completeness or totality");
  check->add_option("automaton", spec, "PTA file or builtin:arthm[-a2|-a3|-a4]")->required();
  check->add_option("property", which, "consistent | complete | total")
      ->required()
      ->check(CLI::IsMember({"consistent", "complete", "total"}));
  check->add_option("--bound", bound, "term size or value bound");
  check->add_option("--refute-depth", refute_depth, "search rejected derivations up to this depth");

  auto* acc = app.add_subcommand("accepts", "run an automaton on a derivation");
  acc->add_option("automaton", spec, "PTA file or builtin:arthm[-a2|-a3|-a4]")->required();
  acc->add_option("derivation", deriv, "derivation JSON")->required();
  acc->add_flag("--emit-run", emit_run, "print the state word of every address");

  auto* en = app.add_subcommand("enum", "enumerate derivations");
  en->add_option("calculus", calc, "calculus file or builtin:arthm")->required();
  en->add_option("--depth", eopts.max_depth, "maximal depth");
  en->add_option("--size", eopts.max_size, "maximal term size (values for builtin:arthm)");
  en->add_option("--root-sort", root_sort, "sort of the root term");
  en->add_option("--root-connective", root_conn, "head connective of the root term");
  en->add_flag("--count-only", count_only, "print the number of derivations only");

  auto* dot = app.add_subcommand("dot", "print the underlying graph in DOT");
  dot->add_option("automaton", spec, "PTA file or builtin:arthm[-a2|-a3|-a4]")->required();
  dot->add_option("--style", style, "junction | bipartite")->check(CLI::IsMember({"junction", "bipartite"}));
  dot->add_option("--name", name, "graph name");

  auto* hw = app.add_subcommand("hyperwalk", "check whether a hyperwalk is correct");
  hw->add_option("automaton", spec, "PTA file or builtin:arthm[-a2|-a3|-a4]")->required();
  hw->add_option("walk", walk, "hyperwalk JSON")->required();
  hw->add_option("--instance-bound", instance_bound, "only consider instances up to this size");
  hw->add_option("--value-bound", hopts.value_bound, "largest value for builtin automata");
  hw->add_option("--cap", hopts.alternative_cap, "alternatives kept per node");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(calc, deriv);
    if (*canonical) return cmd_canonical(calc, out);
    if (*check) return cmd_check(spec, which, bound, refute_depth);
    if (*acc) return cmd_accepts(spec, deriv, emit_run);
    if (*en) return cmd_enum(calc, eopts, root_sort, root_conn, count_only);
    if (*dot) return cmd_dot(spec, style, name);
    if (*hw) {
      hopts.instance_size_bound = instance_bound;
      return cmd_hyperwalk(spec, walk, hopts);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
