// Semantic instance domains and the natural-number example automata.

#ifndef PROOFTREE_DOMAINS_HPP_
#define PROOFTREE_DOMAINS_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prooftree/automata.hpp"
#include "prooftree/calculus.hpp"
#include "prooftree/pta.hpp"

namespace prooftree {

struct StateDescriptor {
  std::string name;
  std::function<bool(const Term&)> contains;
  std::function<std::vector<Term>(std::size_t)> enumerate;  // members with bound_measure <= bound
};

struct SemanticDomain {
  std::shared_ptr<const Calculus> calculus;  // semantic rules over the instance sort
  SortId instance_sort = 0;
  std::function<std::optional<Term>(std::string_view)> parse;
  std::function<std::string(const Term&)> print;
  std::vector<StateDescriptor> states;

  std::optional<std::size_t> find_state(std::string_view name) const;
};

// Automaton over the domain using the named states; every state is final.
Automaton semantic_automaton(const SemanticDomain& dom, const std::vector<std::string>& states,
                             std::vector<Transition> delta, std::vector<EpsEdge> eps);

// Naturals as literals of sort N; rules 0, Incr, Add; states zero, even, odd, le1.
const SemanticDomain& arthm_domain();
Term arthm_value(unsigned long long n);

enum class ArthmVariant { base, a2, a3, a4 };
Automaton arthm_automaton(ArthmVariant v);
std::optional<ArthmVariant> parse_arthm_variant(std::string_view name);  // "arthm", "arthm-a2", ...
std::string arthm_variant_name(ArthmVariant v);

// The example tree: Add(Incr(0), Add(Incr(Incr(0)), 0)) with values 3,1,0,2,2,1,0,0.
Derivation arthm_example_tree();

enum class Property { consistent, complete, total };

// Exhaustive evaluation of the defining condition over instances with
// bound_measure <= bound. Throws AutomatonError when the control oracle
// cannot enumerate.
CheckReport bounded_property_check(const Automaton& a, Property p, std::size_t bound);

// First valid derivation of `k` within the bounds that `a` rejects.
std::optional<Derivation> bounded_counterexample(const Automaton& a, const Calculus& k, std::size_t depth, std::size_t bound);

}  // namespace prooftree

#endif  // PROOFTREE_DOMAINS_HPP_
