#include "prooftree/term_enum.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace prooftree {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::size_t add_sat(std::size_t a, std::size_t b) { return (a == kNone || b == kNone) ? kNone : a + b; }

}  // namespace

std::vector<bool> inhabited_sorts(const Signature& sig) {
  const auto n = sig.sorts().size();
  std::vector<bool> inh(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (SortId s = 0; s < n; ++s) {
      if (inh[s]) continue;
      const auto& sort = sig.sort(s);
      bool now = false;
      if (sort.kind == SortKind::sequence) {
        now = inh[sort.base];
      } else if (sort.literals) {
        now = true;
      } else {
        for (auto c : sig.connectives_of(s)) {
          const auto& src = sig.connective(c).src;
          if (std::all_of(src.begin(), src.end(), [&](SortId x) { return inh[x]; })) {
            now = true;
            break;
          }
        }
      }
      if (now) {
        inh[s] = true;
        changed = true;
      }
    }
  }
  return inh;
}

bool inhabited(const Signature& sig, SortId s) { return inhabited_sorts(sig).at(s); }

bool pattern_inhabited(const Signature& sig, const Term& p) {
  auto inh = inhabited_sorts(sig);
  for (const auto& m : metavariables(p)) {
    if (!inh.at(m.sort())) return false;
  }
  return true;
}

GroundEnumerator::GroundEnumerator(std::shared_ptr<const Signature> sig, EnumOptions opts)
    : sig_(std::move(sig)), opts_(opts) {
  const auto n = sig_->sorts().size();
  min_size_.assign(n, kNone);
  for (bool changed = true; changed;) {
    changed = false;
    for (SortId s = 0; s < n; ++s) {
      const auto& sort = sig_->sort(s);
      std::size_t best = min_size_[s];
      if (sort.kind == SortKind::sequence) {
        best = 0;
      } else {
        if (sort.literals) best = std::min<std::size_t>(best, 1);
        for (auto c : sig_->connectives_of(s)) {
          std::size_t total = 1;
          for (auto x : sig_->connective(c).src) total = add_sat(total, min_size_[x]);
          best = std::min(best, total);
        }
      }
      if (best < min_size_[s]) {
        min_size_[s] = best;
        changed = true;
      }
    }
  }
}

void GroundEnumerator::charge(std::size_t n) {
  produced_ += n;
  if (produced_ > opts_.cap) throw ResourceLimit("ground term enumeration cap exceeded");
}

const std::vector<Term>& GroundEnumerator::exact_seq(SortId s, std::size_t size) {
  auto key = std::make_pair(s, size);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::vector<Term> out;
  const SortId base = sig_->sort(s).base;
  if (size == 0) {
    out.push_back(Term::seq(s, {}));
  } else {
    for (std::size_t first = 1; first <= size; ++first) {
      const auto& heads = exact(base, first);
      const auto& tails = exact_seq(s, size - first);
      for (const auto& h : heads) {
        for (const auto& t : tails) {
          std::vector<Term> items;
          items.reserve(t.args().size() + 1);
          items.push_back(h);
          items.insert(items.end(), t.args().begin(), t.args().end());
          out.push_back(Term::seq(s, std::move(items)));
        }
      }
      charge(heads.size() * tails.size());
    }
  }
  return memo_.emplace(key, std::move(out)).first->second;
}

const std::vector<Term>& GroundEnumerator::exact(SortId s, std::size_t size) {
  if (sig_->is_sequence(s)) return exact_seq(s, size);
  auto key = std::make_pair(s, size);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::vector<Term> out;
  const auto& sort = sig_->sort(s);
  if (size == 1 && sort.literals) {
    for (std::size_t v = 0; v <= opts_.literal_max; ++v) out.push_back(Term::lit(s, std::to_string(v)));
  }
  if (size >= 1) {
    for (auto cid : sig_->connectives_of(s)) {
      const auto& c = sig_->connective(cid);
      const std::size_t k = c.arity();
      if (k == 0) {
        if (size == 1) out.push_back(Term::app(cid, s, {}));
        continue;
      }
      // Distribute size-1 among the k children.
      std::vector<std::size_t> sizes(k, 0);
      std::function<void(std::size_t, std::size_t)> split = [&](std::size_t i, std::size_t left) {
        if (i + 1 == k) {
          if (left < min_size_[c.src[i]] || min_size_[c.src[i]] == kNone) return;
          sizes[i] = left;
          std::vector<const std::vector<Term>*> pools;
          for (std::size_t j = 0; j < k; ++j) pools.push_back(&exact(c.src[j], sizes[j]));
          std::size_t total = 1;
          for (const auto* p : pools) total *= p->size();
          if (total == 0) return;
          charge(total);
          std::vector<std::size_t> idx(k, 0);
          for (;;) {
            std::vector<Term> args;
            args.reserve(k);
            for (std::size_t j = 0; j < k; ++j) args.push_back((*pools[j])[idx[j]]);
            out.push_back(Term::app(cid, s, std::move(args)));
            std::size_t j = k;
            while (j > 0) {
              --j;
              if (++idx[j] < pools[j]->size()) break;
              idx[j] = 0;
              if (j == 0) return;
            }
          }
        }
        const std::size_t lo = min_size_[c.src[i]];
        if (lo == kNone) return;
        for (std::size_t here = lo; here <= left; ++here) {
          sizes[i] = here;
          split(i + 1, left - here);
        }
      };
      split(0, size - 1);
    }
  }
  return memo_.emplace(key, std::move(out)).first->second;
}

std::vector<Term> GroundEnumerator::up_to(SortId s, std::size_t max_size) {
  std::vector<Term> out;
  for (std::size_t n = 0; n <= max_size; ++n) {
    const auto& xs = exact(s, n);
    out.insert(out.end(), xs.begin(), xs.end());
  }
  return out;
}

const Term& GroundEnumerator::smallest(SortId s) {
  const std::size_t m = min_size_.at(s);
  if (m == kNone) throw TermError(TermErrorKind::sort_mismatch, "sort " + sig_->sort(s).name + " is uninhabited");
  return exact(s, m).front();
}

bool GroundEnumerator::for_each_grounding(std::span<const Term> patterns, std::size_t max_size,
                                          const std::function<bool(const Subst&)>& visit) {
  std::vector<Term> metas;
  for (const auto& p : patterns) collect_metavariables(p, metas);
  const std::size_t np = patterns.size();
  const std::size_t nm = metas.size();
  std::vector<std::vector<std::size_t>> occ(np, std::vector<std::size_t>(nm, 0));
  std::vector<std::size_t> skel(np, 0);
  for (std::size_t i = 0; i < np; ++i) {
    std::size_t total = 0;
    std::function<void(const Term&)> count = [&](const Term& x) {
      if (x.is_ground()) return;
      if (x.is(TermKind::meta)) {
        for (std::size_t m = 0; m < nm; ++m) {
          if (metas[m].name() == x.name()) ++occ[i][m];
        }
        ++total;
        return;
      }
      for (const auto& a : x.args()) count(a);
    };
    count(patterns[i]);
    skel[i] = patterns[i].size() - total;
  }
  for (const auto& m : metas) {
    if (min_size_.at(m.sort()) == kNone) return false;
  }
  // used[i]: size committed so far for pattern i, including min sizes of unassigned metas.
  std::vector<std::size_t> used(np, 0);
  for (std::size_t i = 0; i < np; ++i) {
    used[i] = skel[i];
    for (std::size_t m = 0; m < nm; ++m) used[i] += occ[i][m] * min_size_[metas[m].sort()];
    if (used[i] > max_size) return false;
  }
  Subst sigma;
  std::function<bool(std::size_t)> go = [&](std::size_t m) -> bool {
    if (m == nm) return visit(sigma);
    const Term& meta = metas[m];
    const std::size_t lo = min_size_[meta.sort()];
    std::size_t hi = max_size;
    for (std::size_t i = 0; i < np; ++i) {
      if (occ[i][m] == 0) continue;
      hi = std::min(hi, lo + (max_size - used[i]) / occ[i][m]);
    }
    for (std::size_t sz = lo; sz <= hi; ++sz) {
      const auto& values = exact(meta.sort(), sz);
      if (values.empty()) continue;
      for (std::size_t i = 0; i < np; ++i) used[i] += occ[i][m] * (sz - lo);
      for (const auto& v : values) {
        sigma[meta.name()] = v;
        if (go(m + 1)) return true;
      }
      for (std::size_t i = 0; i < np; ++i) used[i] -= occ[i][m] * (sz - lo);
    }
    sigma.erase(meta.name());
    return false;
  };
  return go(0);
}

std::vector<Term> GroundEnumerator::instances(const Term& p, std::size_t max_size) {
  std::set<Term> seen;
  std::vector<Term> out;
  for_each_grounding(std::span<const Term>(&p, 1), max_size, [&](const Subst& s) {
    Term t = apply_subst(p, s);
    if (seen.insert(t).second) out.push_back(t);
    return false;
  });
  std::stable_sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.size() < b.size(); });
  return out;
}

}  // namespace prooftree
