// Directed hypergraphs with dashed unary edges, hyperwalks and DOT output.

#ifndef PROOFTREE_GRAPH_HPP_
#define PROOFTREE_GRAPH_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prooftree/automata.hpp"
#include "prooftree/calculus.hpp"

namespace prooftree {

struct Hypergraph {
  std::vector<std::string> vertices;  // captions, indexed by vertex id
  std::vector<std::string> labels;    // L
  std::vector<Transition> edges;      // E: exactly one target each
  std::vector<EpsEdge> dashed;        // E_d

  friend bool operator==(const Hypergraph&, const Hypergraph&) = default;
};

using SortingMap = std::vector<SortId>;

struct TypedHypergraph {
  Hypergraph graph;
  SortingMap sorting;

  friend bool operator==(const TypedHypergraph&, const TypedHypergraph&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TypedHypergraph underlying_graph(const Automaton& a);

// Throws GraphError when `g` is not typed by `sig` through `h`.
void check_typing(const Hypergraph& g, const Signature& sig, const SortingMap& h);

// Control: t = f(t1..tn) for letter f; every state admits every term.
Automaton represented_automaton(const Hypergraph& g, std::shared_ptr<const Signature> sig, const SortingMap& h);

// Node label: an E-edge index with its target, then E_d-edge indices with
// their targets.
struct Hyperwalk {
  std::vector<std::pair<std::size_t, StateId>> pairs;
  std::vector<Hyperwalk> children;

  std::size_t node_count() const;
  friend bool operator==(const Hyperwalk&, const Hyperwalk&) = default;
};

struct HyperwalkError {
  Address address;
  std::string message;
};

std::optional<HyperwalkError> validate_hyperwalk(const Hypergraph& g, const Hyperwalk& h);

// The hyperwalk read off a run (one pair per state of each word).
Hyperwalk hyperwalk_of(const Automaton& a, const Derivation& d, const Run& run);

enum class Correctness { correct, incorrect, resource_limit };

struct HyperwalkOptions {
  std::size_t alternative_cap = 256;
  std::size_t value_bound = 10;                      // semantic domains: literal values
  std::optional<std::size_t> instance_size_bound;    // schematic: only terms up to this size
};

struct HyperwalkResult {
  Correctness status = Correctness::incorrect;
  std::optional<Derivation> derivation;
  std::optional<Run> run;
  Address blocking;
  std::string reason;
};

// Throws GraphError when `h` is not a hyperwalk of the automaton's graph.
HyperwalkResult check_hyperwalk_correct(const Automaton& a, const Hyperwalk& h, const HyperwalkOptions& opts = {});

enum class DotStyle { junction, bipartite };

struct DotOptions {
  DotStyle style = DotStyle::junction;
  std::string name = "PTG";
};

std::string export_dot(const Hypergraph& g, const DotOptions& opts = {});

}  // namespace prooftree

#endif  // PROOFTREE_GRAPH_HPP_
