// Proof tree automata with schematic states.
//
// A state is a pattern standing for its set of ground instances; letters
// are rule names; every state is final.

#ifndef PROOFTREE_PTA_HPP_
#define PROOFTREE_PTA_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prooftree/automata.hpp"
#include "prooftree/calculus.hpp"
#include "prooftree/substitution.hpp"

namespace prooftree {

struct SchematicPta {
  std::shared_ptr<const Calculus> calculus;
  std::vector<std::string> state_names;
  std::vector<Term> states;
  std::vector<Transition> delta;
  std::vector<EpsEdge> delta_eps;
};

enum class PtaErrorKind : std::uint8_t { uninhabited_state, sort_mismatch, unknown_rule, arity_mismatch, bad_index, semantic_rule };

class PtaError : public std::runtime_error {
 public:
  PtaError(PtaErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  PtaErrorKind kind() const { return kind_; }

 private:
  PtaErrorKind kind_;
};

void validate_pta(const SchematicPta& p);  // throws PtaError

// Signature whose connectives are the rules of `k` with their sort-arity.
std::shared_ptr<const Signature> rule_alphabet(const Calculus& k);

// Throws PtaError when validate_pta fails.
Automaton as_automaton(const SchematicPta& p);

// One state of the given sort and a self transition for every rule whose
// sources and target all have that sort.
SchematicPta trivial_pta(std::shared_ptr<const Calculus> k, SortId sort);

struct CanonicalPta {
  SchematicPta pta;
  std::vector<std::string> approximate_rules;  // non-modular rules (dom R is not the product of the dom_i)
};

// Throws PtaError(semantic_rule) when a rule is not schematic.
CanonicalPta canonical_pta(std::shared_ptr<const Calculus> k, const UnifyOptions& opts = {});

enum class Verdict : std::uint8_t { proven, proven_up_to_bound, refuted, unknown };
std::string verdict_name(Verdict v);

struct Witness {
  std::string rule;
  std::optional<std::size_t> transition;
  std::vector<StateId> states;
  std::vector<Term> hyps;
  std::optional<Term> concl;
  std::optional<Derivation> derivation;
  std::string text;
};

struct Finding {
  std::string subject;
  Verdict verdict = Verdict::unknown;
  std::string detail;
};

struct CheckReport {
  Verdict verdict = Verdict::unknown;
  std::size_t bound = 0;
  std::optional<Witness> witness;
  std::vector<Finding> details;
};

struct CheckOptions {
  std::size_t bound = 10;        // term size bound of bounded refutations
  std::size_t tuple_cap = 200'000;
  UnifyOptions unify;
};

CheckReport check_consistent(const SchematicPta& p, const CheckOptions& opts = {});
// Sound sufficient check: Proven or Unknown with the undischarged obligations.
CheckReport check_complete(const SchematicPta& p, const CheckOptions& opts = {});
// A valid derivation within the bounds that the automaton rejects.
std::optional<Derivation> refute_completeness(const SchematicPta& p, std::size_t depth, std::size_t size);
CheckReport check_total(const SchematicPta& p, const CheckOptions& opts = {});

bool pta_accepts(const SchematicPta& p, const Derivation& d);

// True iff every instance of `inst` is an instance of `state` (state
// metavariables are renamed apart first).
bool state_covers(const Term& state, const Term& inst);
bool state_meets(const Term& state, const Term& inst, const UnifyOptions& opts = {});

}  // namespace prooftree

#endif  // PROOFTREE_PTA_HPP_
