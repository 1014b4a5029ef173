// Inhabitation and bounded enumeration of ground terms.

#ifndef PROOFTREE_TERM_ENUM_HPP_
#define PROOFTREE_TERM_ENUM_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "prooftree/signature.hpp"
#include "prooftree/substitution.hpp"
#include "prooftree/term.hpp"

namespace prooftree {

// Least fixpoint: an atomic sort is inhabited iff it hosts literals or some
// connective targets it with all sources inhabited; a sequence sort iff its
// base is.
std::vector<bool> inhabited_sorts(const Signature& sig);
bool inhabited(const Signature& sig, SortId s);

// True iff every metavariable of `p` ranges over an inhabited sort, i.e.
// ⟨p⟩ is non-empty.
bool pattern_inhabited(const Signature& sig, const Term& p);

struct EnumOptions {
  std::size_t literal_max = 10;     // literals 0..literal_max on literal sorts
  std::size_t cap = 2'000'000;      // total terms materialized before ResourceLimit
};

// Memoized enumeration of ground terms by exact size. Results are in a
// fixed deterministic order.
class GroundEnumerator {
 public:
  explicit GroundEnumerator(std::shared_ptr<const Signature> sig, EnumOptions opts = {});

  const std::vector<Term>& exact(SortId s, std::size_t size);
  std::vector<Term> up_to(SortId s, std::size_t max_size);

  // Smallest size of a ground term of the sort (0 for sequence sorts);
  // SIZE_MAX when uninhabited.
  std::size_t min_size(SortId s) const { return min_size_.at(s); }
  const Term& smallest(SortId s);

  // Visits every σ grounding all metavariables of `patterns` such that each
  // apply_subst(patterns[i], σ) has size <= max_size. `visit` returns true to stop.
  bool for_each_grounding(std::span<const Term> patterns, std::size_t max_size,
                          const std::function<bool(const Subst&)>& visit);

  // Distinct ground instances of p of size <= max_size, by size.
  std::vector<Term> instances(const Term& p, std::size_t max_size);

  const Signature& signature() const { return *sig_; }
  const std::shared_ptr<const Signature>& signature_ptr() const { return sig_; }

 private:
  const std::vector<Term>& exact_seq(SortId s, std::size_t size);
  void charge(std::size_t n);

  std::shared_ptr<const Signature> sig_;
  EnumOptions opts_;
  std::vector<std::size_t> min_size_;
  std::map<std::pair<SortId, std::size_t>, std::vector<Term>> memo_;
  std::size_t produced_ = 0;
};

}  // namespace prooftree

#endif  // PROOFTREE_TERM_ENUM_HPP_
