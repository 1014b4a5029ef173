// Text formats for calculi and PTAs; JSON trees for derivations, runs and
// hyperwalks.
//
// Calculus file:
//   sorts        Form | Cont : seq of Form | N : literals
//   connectives  -> : Form Form -> Form infix 20
//   metavars     phi psi : Form
//   rules        Name: hyp ; ... ; hyp ==> concl      axiom Name: concl
//
// PTA file:
//   calculus     path relative to the PTA file
//   states       name = pattern
//   delta        q1 ... qn -[Rule]-> q
//   eps          q ~> q
//
// Lines starting with '#' are comments.

#ifndef PROOFTREE_IO_HPP_
#define PROOFTREE_IO_HPP_

#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "prooftree/automata.hpp"
#include "prooftree/calculus.hpp"
#include "prooftree/graph.hpp"
#include "prooftree/pta.hpp"
#include "prooftree/syntax.hpp"

namespace prooftree {

// Throws ParseError (with line and column) or CalculusError.
std::shared_ptr<const Calculus> parse_calculus(std::string_view text);
std::string print_calculus(const Calculus& k);

using CalculusLoader = std::function<std::shared_ptr<const Calculus>(const std::string& path)>;

struct PtaFile {
  std::string calculus_path;
  SchematicPta pta;
};

// Throws ParseError or PtaError.
PtaFile parse_pta(std::string_view text, const CalculusLoader& load);
std::string print_pta(const SchematicPta& p, const std::string& calculus_path);

// Underlying graph with vertices captioned by their state patterns.
Hypergraph pta_graph(const SchematicPta& p);

struct TermCodec {
  std::function<Term(std::string_view)> parse;  // throws ParseError
  std::function<std::string(const Term&)> print;
};

TermCodec calculus_codec(const Calculus& k);

// Throws ParseError on malformed JSON or schema violations.
Derivation parse_derivation_json(std::string_view text, const TermCodec& codec);
std::string derivation_json(const Derivation& d, const TermCodec& codec);

Hyperwalk parse_hyperwalk_json(std::string_view text);
std::string hyperwalk_json(const Hyperwalk& h);

// One line per address in pre-order: "<address> <state> ... <state>".
std::string format_run(const Automaton& a, const Run& run);

std::string read_file(const std::string& path);  // throws std::runtime_error

}  // namespace prooftree

#endif  // PROOFTREE_IO_HPP_
