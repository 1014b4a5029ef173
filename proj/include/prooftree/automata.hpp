// Controlling tree automata with epsilon transitions (NCTA_eps).
//
// Trees are Derivation values: each node carries an instance and a letter
// name. Runs label nodes with non-empty state words.

#ifndef PROOFTREE_AUTOMATA_HPP_
#define PROOFTREE_AUTOMATA_HPP_

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prooftree/calculus.hpp"
#include "prooftree/signature.hpp"
#include "prooftree/term.hpp"

namespace prooftree {

using StateId = std::size_t;

struct Transition {
  std::vector<StateId> src;
  std::string letter;
  StateId trg = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

using EpsEdge = std::pair<StateId, StateId>;

// Schematic view exposed by proof tree automata.
struct SchematicView {
  const Calculus* calculus = nullptr;
  std::span<const Term> states;
};

class ControlOracle {
 public:
  virtual ~ControlOracle() = default;
  virtual bool nabla(std::span<const Term> children, const std::string& letter, const Term& t) const = 0;
  virtual bool nabla_eps(const Term& t, StateId q) const = 0;

  // Optional bounded enumeration, used by bounded checks and hyperwalk search.
  virtual std::optional<std::vector<Term>> instances(StateId, std::size_t) const { return std::nullopt; }
  virtual std::optional<std::vector<Term>> conclusions(std::span<const Term>, const std::string&) const {
    return std::nullopt;
  }
  virtual std::optional<SchematicView> schematic() const { return std::nullopt; }
};

class AutomatonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Automaton {
  std::shared_ptr<const Signature> alphabet;  // letters are its connectives
  std::vector<std::string> state_names;
  std::vector<SortId> state_sorts;            // sorts of the alphabet signature
  std::vector<Transition> delta;
  std::vector<EpsEdge> delta_eps;
  std::vector<bool> final;
  std::shared_ptr<const ControlOracle> control;

  std::size_t size() const { return state_names.size(); }
  std::optional<StateId> find_state(std::string_view name) const;
  // Throws AutomatonError on bad indices, unknown letters or arity mismatch.
  void validate() const;
};

using Run = std::map<Address, std::vector<StateId>>;

struct RunError {
  Address address;
  int condition = 0;  // 0: shape, 1: transitions, 2: control, 3: eps-transitions, 4: eps-control
  std::string message;
};

std::optional<RunError> validate_run(const Automaton& a, const Derivation& d, const Run& run);

// Bottom-up search; the returned run ends in a final state at the root.
std::optional<Run> find_run(const Automaton& a, const Derivation& d);
bool accepts(const Automaton& a, const Derivation& d);

// Simple t-eps-paths from q0, including the length-0 path, in BFS order.
// Throws std::invalid_argument unless nabla_eps(t, q0).
std::vector<std::vector<StateId>> epsilon_paths(const Automaton& a, const Term& t, StateId q0);

}  // namespace prooftree

#endif  // PROOFTREE_AUTOMATA_HPP_
