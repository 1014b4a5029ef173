// Rules, term deduction systems and derivations.

#ifndef PROOFTREE_CALCULUS_HPP_
#define PROOFTREE_CALCULUS_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "prooftree/signature.hpp"
#include "prooftree/substitution.hpp"
#include "prooftree/term.hpp"
#include "prooftree/term_enum.hpp"

namespace prooftree {

struct RuleInstance {
  std::vector<Term> hyps;
  Term concl;

  friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
  friend auto operator<=>(const RuleInstance&, const RuleInstance&) = default;
};

struct SchematicRule {
  std::vector<Term> hyps;
  Term concl;
};

// A rule given by oracles over ground terms.
struct SemanticRule {
  std::vector<SortId> src;
  SortId trg = 0;
  std::function<bool(std::span<const Term>, const Term&)> contains;
  // All conclusions for the given hypotheses (forward evaluation).
  std::function<std::vector<Term>(std::span<const Term>)> conclusions;
  // Instances whose terms all have bound_measure <= bound.
  std::function<std::vector<RuleInstance>(std::size_t)> enumerate;
  // Membership in dom_i for i >= 1, in codom for i == 0.
  std::function<bool(std::size_t, const Term&)> in_domain;
};

struct Rule {
  std::string name;
  std::variant<SchematicRule, SemanticRule> body;

  std::size_t arity() const;
  std::vector<SortId> src() const;
  SortId trg() const;
  const SchematicRule* schematic() const { return std::get_if<SchematicRule>(&body); }
  const SemanticRule* semantic() const { return std::get_if<SemanticRule>(&body); }
};

enum class CalculusErrorKind : std::uint8_t { duplicate_rule, bad_rule, unknown_rule, unsupported_rule };

class CalculusError : public std::runtime_error {
 public:
  CalculusError(CalculusErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  CalculusErrorKind kind() const { return kind_; }

 private:
  CalculusErrorKind kind_;
};

class Calculus {
 public:
  // Throws CalculusError on duplicate names or ill-sorted schematic rules.
  Calculus(std::shared_ptr<const Signature> sig, VariablePool pool, std::vector<Rule> rules);

  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }
  const VariablePool& pool() const { return pool_; }
  std::span<const Rule> rules() const { return rules_; }
  const Rule* find_rule(std::string_view name) const;
  const Rule& rule(std::string_view name) const;  // throws CalculusError
  std::size_t rule_index(std::string_view name) const;

  Calculus with_rule(Rule r) const;
  Calculus without_rule(std::string_view name) const;

 private:
  std::shared_ptr<const Signature> sig_;
  VariablePool pool_;
  std::vector<Rule> rules_;
};

// Size bound used by enumeration: literal terms measure by value (saturating),
// everything else by Term::size().
std::size_t bound_measure(const Term& t);

// Throws TermError on arity or sort mismatch and on non-ground input.
bool rule_instance_check(const Rule& r, std::span<const Term> hyps, const Term& concl);
std::optional<Subst> rule_instance_witness(const SchematicRule& r, std::span<const Term> hyps, const Term& concl);

// Index 0 is the codomain, 1..n the hypotheses. For schematic rules the
// pattern is the hypothesis (or conclusion) pattern and `over_approximate`
// is set when a metavariable of that hypothesis also occurs in another one,
// i.e. dom R is strictly contained in the product of the dom_i.
struct DomPattern {
  std::optional<Term> pattern;
  SortId sort = 0;
  bool over_approximate = false;
  std::function<bool(const Term&)> contains;
};

DomPattern dom_pattern(const Rule& r, std::size_t i);  // throws std::out_of_range

enum class Modularity : std::uint8_t { yes, no, unknown };

struct ModularityReport {
  Modularity verdict = Modularity::unknown;
  bool bounded = false;          // yes established only up to the bound
  std::vector<Term> witness;     // hypotheses tuple outside dom R
};

ModularityReport is_modular(const Calculus& k, const Rule& r, std::size_t bound);

// Derivation trees store ground terms and rule names.
struct Derivation {
  Term term;
  std::string rule;
  std::vector<Derivation> children;

  std::size_t node_count() const;
  std::size_t depth() const;

  friend bool operator==(const Derivation&, const Derivation&) = default;
  friend std::strong_ordering operator<=>(const Derivation& a, const Derivation& b);
};

// 1-based Gorn address; empty for the root.
using Address = std::vector<std::uint32_t>;

std::string format_address(const Address& a);  // "e" for the root, else "1.2"
const Derivation& node_at(const Derivation& d, const Address& a);

enum class DerivationIssue : std::uint8_t { unknown_rule, arity_mismatch, sort_mismatch, not_ground, not_an_instance };

struct DerivationError {
  Address address;
  std::string rule;
  DerivationIssue issue = DerivationIssue::not_an_instance;
  std::string message;
};

// First failing node in pre-order, or nullopt when every node is an
// instance of its rule.
std::optional<DerivationError> validate_derivation(const Calculus& k, const Derivation& d);

struct DerivationEnumOptions {
  std::size_t max_depth = 3;
  std::size_t max_size = 8;  // bound_measure of every node term
  std::optional<SortId> root_sort;
  std::optional<ConnectiveId> root_connective;
  std::size_t node_cap = 2'000'000;
  EnumOptions terms;
};

// All valid derivations within the bounds, ordered by depth, then rule,
// then hypotheses, then conclusion. Throws ResourceLimit past node_cap and
// CalculusError(unsupported_rule) for a semantic rule without enumerator.
std::vector<Derivation> enumerate_derivations(const Calculus& k, const DerivationEnumOptions& opts);
std::size_t count_derivations(const Calculus& k, const DerivationEnumOptions& opts);

// Visits derivations in the same order without keeping them; return true to stop.
void for_each_derivation(const Calculus& k, const DerivationEnumOptions& opts,
                         const std::function<bool(const Derivation&)>& visit);

}  // namespace prooftree

#endif  // PROOFTREE_CALCULUS_HPP_
