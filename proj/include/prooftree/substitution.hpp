// Substitution, matching, unification and subsumption on patterns.

#ifndef PROOFTREE_SUBSTITUTION_HPP_
#define PROOFTREE_SUBSTITUTION_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prooftree/term.hpp"

namespace prooftree {

// Metavariable name -> image. A sequence metavariable maps to a seq node.
using Subst = std::map<std::string, Term>;

// Raised when a search exceeds its configured budget.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Term apply_subst(const Term& t, const Subst& s);
std::vector<Term> apply_subst(std::span<const Term> ts, const Subst& s);

// s1 then s2: apply_subst(t, compose(s1, s2)) == apply_subst(apply_subst(t, s1), s2).
Subst compose(const Subst& s1, const Subst& s2);

// Restriction of s to the given metavariables.
Subst restrict(const Subst& s, std::span<const Term> metas);

// Generator of metavariable names of the form base$N avoiding a used set.
class FreshNames {
 public:
  FreshNames() = default;
  explicit FreshNames(std::set<std::string> used) : used_(std::move(used)) {}

  void reserve(const Term& t);
  void reserve(const std::string& name) { used_.insert(name); }
  std::string fresh(const std::string& base);
  Term fresh_like(const Term& meta);

 private:
  std::set<std::string> used_;
  std::size_t next_ = 1;
};

// Renames every metavariable of `t` to a fresh name. `renaming` receives
// old -> new meta terms.
Term rename_apart(const Term& t, FreshNames& names, Subst* renaming = nullptr);
std::vector<Term> rename_apart(std::span<const Term> ts, FreshNames& names, Subst* renaming = nullptr);

// Alpha-canonical form: metavariables renamed to $0, $1, ... in
// first-occurrence order. Two patterns are alpha-equivalent iff their
// canonical forms are equal.
Term alpha_canonical(const Term& t);
bool alpha_equivalent(const Term& a, const Term& b);

// Enumerates every σ with apply_subst(p, σ) == t, where metavariables of `t` are
// rigid constants. `visit` returns true to stop. Splits of sequence items
// are tried shortest-first for the leftmost sequence metavariable.
// Returns true iff stopped by `visit`.
bool for_each_match(std::span<const Term> ps, std::span<const Term> ts, const Subst& init,
                    const std::function<bool(const Subst&)>& visit);

std::vector<Subst> match_all(const Term& p, const Term& t, std::size_t limit = std::numeric_limits<std::size_t>::max());
std::vector<Subst> match_all(std::span<const Term> ps, std::span<const Term> ts, const Subst& init = {},
                             std::size_t limit = std::numeric_limits<std::size_t>::max());
std::optional<Subst> match_one(const Term& p, const Term& t);
std::optional<Subst> match_one(std::span<const Term> ps, std::span<const Term> ts, const Subst& init = {});

// Complete set of ground matchers. Throws TermError on a sort mismatch or a
// non-ground target.
std::vector<Subst> match_ground(const Term& p, const Term& t);
bool instance_of(const Term& t, const Term& p);

// ⟨specific⟩ ⊆ ⟨general⟩ via one-sided matching.
bool subsumes(const Term& general, const Term& specific);

struct UnifyOptions {
  std::size_t step_limit = 200000;
  bool prune = true;  // drop unifiers that are instances of another returned one
};

// Complete set of unifiers for a system of equations. Both sides may share
// metavariables. Throws ResourceLimit when the step budget is exhausted.
std::vector<Subst> unify_all(std::span<const std::pair<Term, Term>> equations, const UnifyOptions& opts = {});
std::vector<Subst> unify(const Term& p, const Term& q, const UnifyOptions& opts = {});
bool unifiable(const Term& p, const Term& q, const UnifyOptions& opts = {});

}  // namespace prooftree

#endif  // PROOFTREE_SUBSTITUTION_HPP_
