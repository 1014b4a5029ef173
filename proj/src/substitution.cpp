#include "prooftree/substitution.hpp"

#include <algorithm>

namespace prooftree {

Term apply_subst(const Term& t, const Subst& s) {
  if (s.empty() || t.is_ground()) return t;
  switch (t.kind()) {
    case TermKind::meta: {
      auto it = s.find(t.name());
      return it == s.end() ? t : it->second;
    }
    case TermKind::app: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      bool changed = false;
      for (const auto& a : t.args()) {
        args.push_back(apply_subst(a, s));
        changed = changed || !(args.back() == a);
      }
      return changed ? Term::app(t.fn(), t.sort(), std::move(args)) : t;
    }
    case TermKind::seq: {
      std::vector<Term> items;
      bool changed = false;
      for (const auto& it : t.args()) {
        if (it.seq_meta()) {
          auto img = s.find(it.name());
          if (img != s.end()) {
            changed = true;
            const auto& rep = img->second;
            if (rep.is(TermKind::seq)) {
              items.insert(items.end(), rep.args().begin(), rep.args().end());
            } else {
              items.push_back(rep);
            }
            continue;
          }
          items.push_back(it);
        } else {
          items.push_back(apply_subst(it, s));
          changed = changed || !(items.back() == it);
        }
      }
      return changed ? Term::seq(t.sort(), std::move(items)) : t;
    }
    default:
      return t;
  }
}

std::vector<Term> apply_subst(std::span<const Term> ts, const Subst& s) {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(apply_subst(t, s));
  return out;
}

Subst compose(const Subst& s1, const Subst& s2) {
  Subst out;
  for (const auto& [k, v] : s1) out.emplace(k, apply_subst(v, s2));
  for (const auto& [k, v] : s2) out.emplace(k, v);
  return out;
}

Subst restrict(const Subst& s, std::span<const Term> metas) {
  Subst out;
  for (const auto& m : metas) {
    auto it = s.find(m.name());
    if (it != s.end()) out.emplace(it->first, it->second);
  }
  return out;
}

void FreshNames::reserve(const Term& t) {
  for (const auto& m : metavariables(t)) used_.insert(m.name());
}

std::string FreshNames::fresh(const std::string& base) {
  const std::string stem = meta_base(base);
  for (;;) {
    std::string candidate = stem + "$" + std::to_string(next_++);
    if (used_.insert(candidate).second) return candidate;
  }
}

Term FreshNames::fresh_like(const Term& meta) { return Term::meta(fresh(meta.name()), meta.sort(), meta.seq_meta()); }

Term rename_apart(const Term& t, FreshNames& names, Subst* renaming) {
  Subst local;
  Subst& ren = renaming ? *renaming : local;
  for (const auto& m : metavariables(t)) {
    if (ren.contains(m.name())) continue;
    Term fresh = names.fresh_like(m);
    ren.emplace(m.name(), m.seq_meta() ? Term::seq(m.sort(), {fresh}) : fresh);
  }
  return apply_subst(t, ren);
}

std::vector<Term> rename_apart(std::span<const Term> ts, FreshNames& names, Subst* renaming) {
  Subst local;
  Subst& ren = renaming ? *renaming : local;
  std::vector<Term> out;
  for (const auto& t : ts) out.push_back(rename_apart(t, names, &ren));
  return out;
}

Term alpha_canonical(const Term& t) {
  Subst ren;
  std::size_t k = 0;
  for (const auto& m : metavariables(t)) {
    Term fresh = Term::meta("$" + std::to_string(k++), m.sort(), m.seq_meta());
    ren.emplace(m.name(), m.seq_meta() ? Term::seq(m.sort(), {fresh}) : fresh);
  }
  return apply_subst(t, ren);
}

bool alpha_equivalent(const Term& a, const Term& b) { return alpha_canonical(a) == alpha_canonical(b); }

namespace {

using Visit = std::function<bool(Subst&)>;

bool match_term(const Term& p, const Term& t, Subst& s, const Visit& k);

bool match_args(std::span<const Term> ps, std::span<const Term> ts, std::size_t i, Subst& s, const Visit& k) {
  if (i == ps.size()) return k(s);
  return match_term(ps[i], ts[i], s, [&](Subst& s2) { return match_args(ps, ts, i + 1, s2, k); });
}

bool match_items(const std::vector<Term>& ps, std::size_t i, const std::vector<Term>& ts, std::size_t j, Subst& s,
                 const Visit& k) {
  if (i == ps.size()) return j == ts.size() && k(s);
  const Term& p = ps[i];
  if (p.seq_meta()) {
    auto bound = s.find(p.name());
    if (bound != s.end()) {
      const auto& img = bound->second.args();
      if (j + img.size() > ts.size()) return false;
      for (std::size_t x = 0; x < img.size(); ++x) {
        if (!(img[x] == ts[j + x])) return false;
      }
      return match_items(ps, i + 1, ts, j + img.size(), s, k);
    }
    std::size_t reserved = 0;
    for (std::size_t x = i + 1; x < ps.size(); ++x) {
      if (!ps[x].seq_meta()) ++reserved;
    }
    if (ts.size() - j < reserved) return false;
    const std::size_t max_len = ts.size() - j - reserved;
    for (std::size_t len = 0; len <= max_len; ++len) {
      std::vector<Term> chunk(ts.begin() + static_cast<std::ptrdiff_t>(j),
                              ts.begin() + static_cast<std::ptrdiff_t>(j + len));
      s[p.name()] = Term::seq(p.sort(), std::move(chunk));
      bool stop = match_items(ps, i + 1, ts, j + len, s, k);
      if (stop) {
        s.erase(p.name());
        return true;
      }
    }
    s.erase(p.name());
    return false;
  }
  if (j >= ts.size() || ts[j].seq_meta()) return false;
  return match_term(p, ts[j], s, [&](Subst& s2) { return match_items(ps, i + 1, ts, j + 1, s2, k); });
}

bool match_term(const Term& p, const Term& t, Subst& s, const Visit& k) {
  if (p.is_ground()) return p == t && k(s);
  switch (p.kind()) {
    case TermKind::meta: {
      auto bound = s.find(p.name());
      if (bound != s.end()) return bound->second == t && k(s);
      if (t.sort() != p.sort()) return false;
      if (p.seq_meta()) {
        if (!t.is(TermKind::seq)) return false;
      } else if (t.is(TermKind::seq)) {
        return false;
      }
      s.emplace(p.name(), t);
      bool stop = k(s);
      s.erase(p.name());
      return stop;
    }
    case TermKind::app:
      if (!t.is(TermKind::app) || t.fn() != p.fn()) return false;
      return match_args(p.args(), t.args(), 0, s, k);
    case TermKind::seq:
      if (!t.is(TermKind::seq) || t.sort() != p.sort()) return false;
      return match_items(p.args(), 0, t.args(), 0, s, k);
    default:
      return p == t && k(s);
  }
}

}  // namespace

bool for_each_match(std::span<const Term> ps, std::span<const Term> ts, const Subst& init,
                    const std::function<bool(const Subst&)>& visit) {
  if (ps.size() != ts.size()) return false;
  Subst s = init;
  return match_args(ps, ts, 0, s, [&](Subst& done) { return visit(done); });
}

std::vector<Subst> match_all(std::span<const Term> ps, std::span<const Term> ts, const Subst& init,
                             std::size_t limit) {
  std::vector<Subst> out;
  if (limit == 0) return out;
  for_each_match(ps, ts, init, [&](const Subst& s) {
    out.push_back(s);
    return out.size() >= limit;
  });
  return out;
}

std::vector<Subst> match_all(const Term& p, const Term& t, std::size_t limit) {
  return match_all(std::span<const Term>(&p, 1), std::span<const Term>(&t, 1), {}, limit);
}

std::optional<Subst> match_one(std::span<const Term> ps, std::span<const Term> ts, const Subst& init) {
  auto r = match_all(ps, ts, init, 1);
  if (r.empty()) return std::nullopt;
  return std::move(r.front());
}

std::optional<Subst> match_one(const Term& p, const Term& t) {
  return match_one(std::span<const Term>(&p, 1), std::span<const Term>(&t, 1));
}

std::vector<Subst> match_ground(const Term& p, const Term& t) {
  if (p.sort() != t.sort()) throw TermError(TermErrorKind::sort_mismatch, "pattern and term have different sorts");
  if (!t.is_ground()) throw TermError(TermErrorKind::not_ground, "match_ground expects a ground term");
  return match_all(p, t);
}

bool instance_of(const Term& t, const Term& p) { return p.sort() == t.sort() && match_one(p, t).has_value(); }

bool subsumes(const Term& general, const Term& specific) {
  return general.sort() == specific.sort() && match_one(general, specific).has_value();
}

namespace {

struct Unifier {
  const UnifyOptions& opts;
  FreshNames names;
  std::size_t steps = 0;
  std::vector<Subst> out;

  void tick() {
    if (++steps > opts.step_limit) throw ResourceLimit("unification step limit exceeded");
  }

  // Extends the idempotent σ with x := v, where v is already σ-normal.
  static Subst bind(const Subst& sigma, const std::string& x, const Term& v) {
    Subst single{{x, v}};
    Subst next;
    for (const auto& [k, img] : sigma) next.emplace(k, apply_subst(img, single));
    next.emplace(x, v);
    return next;
  }

  static Term seq_of(SortId sort, std::vector<Term> items) { return Term::seq(sort, std::move(items)); }

  void solve(std::vector<std::pair<Term, Term>> eqs, Subst sigma) {
    while (!eqs.empty()) {
      tick();
      auto [a, b] = std::move(eqs.back());
      eqs.pop_back();
      a = apply_subst(a, sigma);
      b = apply_subst(b, sigma);
      if (a == b) continue;
      if (a.sort() != b.sort()) return;
      if (a.is(TermKind::meta) && !a.seq_meta()) {
        if (b.is(TermKind::seq) || occurs(a.name(), b)) return;
        sigma = bind(sigma, a.name(), b);
        continue;
      }
      if (b.is(TermKind::meta) && !b.seq_meta()) {
        if (a.is(TermKind::seq) || occurs(b.name(), a)) return;
        sigma = bind(sigma, b.name(), a);
        continue;
      }
      if (a.kind() != b.kind()) return;
      if (a.is(TermKind::app)) {
        if (a.fn() != b.fn()) return;
        for (std::size_t i = a.args().size(); i-- > 0;) eqs.emplace_back(a.args()[i], b.args()[i]);
        continue;
      }
      if (a.is(TermKind::seq)) {
        solve_seq(a, b, std::move(eqs), std::move(sigma));
        return;
      }
      return;  // distinct variables or literals
    }
    out.push_back(std::move(sigma));
  }

  // a, b: σ-normal seq nodes of the same sort.
  void solve_seq(const Term& a, const Term& b, std::vector<std::pair<Term, Term>> eqs, Subst sigma) {
    tick();
    const SortId sort = a.sort();
    std::vector<Term> A = a.args();
    std::vector<Term> B = b.args();

    // Strip matching tree items and identical sequence metavariables at both ends.
    for (;;) {
      if (!A.empty() && !B.empty() && !A.front().seq_meta() && !B.front().seq_meta()) {
        eqs.emplace_back(A.front(), B.front());
        A.erase(A.begin());
        B.erase(B.begin());
      } else if (!A.empty() && !B.empty() && !A.back().seq_meta() && !B.back().seq_meta()) {
        eqs.emplace_back(A.back(), B.back());
        A.pop_back();
        B.pop_back();
      } else if (!A.empty() && !B.empty() && A.front().seq_meta() && A.front() == B.front()) {
        A.erase(A.begin());
        B.erase(B.begin());
      } else if (!A.empty() && !B.empty() && A.back().seq_meta() && A.back() == B.back()) {
        A.pop_back();
        B.pop_back();
      } else {
        break;
      }
    }

    auto only_metas = [](const std::vector<Term>& xs) {
      return std::all_of(xs.begin(), xs.end(), [](const Term& x) { return x.seq_meta(); });
    };
    if (A.empty() || B.empty()) {
      const auto& rest = A.empty() ? B : A;
      if (!only_metas(rest)) return;
      for (const auto& x : rest) sigma = bind(sigma, x.name(), seq_of(sort, {}));
      solve(std::move(eqs), std::move(sigma));
      return;
    }
    auto lone = [&](const std::vector<Term>& single, const std::vector<Term>& other) {
      if (single.size() != 1 || !single.front().seq_meta()) return false;
      Term img = seq_of(sort, other);
      return !occurs(single.front().name(), img);
    };
    if (lone(A, B) || lone(B, A)) {
      bool left = lone(A, B);
      const Term& x = left ? A.front() : B.front();
      Term img = seq_of(sort, left ? B : A);
      solve(std::move(eqs), bind(sigma, x.name(), img));
      return;
    }

    const Term& x = A.front();
    const Term& y = B.front();
    auto pending = [&](std::vector<std::pair<Term, Term>> base) {
      base.emplace_back(seq_of(sort, A), seq_of(sort, B));
      return base;
    };
    if (x.seq_meta() && y.seq_meta()) {
      // x = y·x'  |  y = x·y'
      for (int side = 0; side < 2; ++side) {
        const Term& from = side == 0 ? x : y;
        const Term& to = side == 0 ? y : x;
        Term rest = names.fresh_like(from);
        Term img = seq_of(sort, {to, rest});
        solve(pending(eqs), bind(sigma, from.name(), img));
      }
      return;
    }
    const Term& m = x.seq_meta() ? x : y;
    const Term& item = x.seq_meta() ? y : x;
    // m = []  |  m = item·m'
    solve(pending(eqs), bind(sigma, m.name(), seq_of(sort, {})));
    if (!occurs(m.name(), item)) {
      Term rest = names.fresh_like(m);
      solve(pending(eqs), bind(sigma, m.name(), seq_of(sort, {item, rest})));
    }
  }
};

Term tuple_of(const Subst& s, std::span<const Term> metas) {
  std::vector<Term> parts;
  for (const auto& m : metas) {
    Term v = m.seq_meta() ? Term::seq(m.sort(), {m}) : m;
    parts.push_back(apply_subst(v, s));
  }
  return Term::app(0, 0, std::move(parts));
}

}  // namespace

std::vector<Subst> unify_all(std::span<const std::pair<Term, Term>> equations, const UnifyOptions& opts) {
  std::vector<Term> metas;
  for (const auto& [a, b] : equations) {
    collect_metavariables(a, metas);
    collect_metavariables(b, metas);
  }
  Unifier u{opts, {}, 0, {}};
  for (const auto& m : metas) u.names.reserve(m.name());
  std::vector<std::pair<Term, Term>> eqs(equations.begin(), equations.end());
  std::reverse(eqs.begin(), eqs.end());
  u.solve(std::move(eqs), {});

  if (!opts.prune || u.out.size() <= 1) return std::move(u.out);

  std::vector<Term> keys;
  keys.reserve(u.out.size());
  for (const auto& s : u.out) keys.push_back(tuple_of(s, metas));
  std::vector<Subst> kept;
  std::vector<Term> kept_keys;
  for (std::size_t i = 0; i < u.out.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < u.out.size() && !redundant; ++j) {
      if (i == j) continue;
      bool j_general = match_one(keys[j], keys[i]).has_value();
      if (!j_general) continue;
      bool i_general = match_one(keys[i], keys[j]).has_value();
      // Strictly more general, or equally general and earlier.
      redundant = !i_general || j < i;
    }
    if (!redundant) kept.push_back(u.out[i]);
  }
  return kept;
}

std::vector<Subst> unify(const Term& p, const Term& q, const UnifyOptions& opts) {
  if (p.sort() != q.sort()) throw TermError(TermErrorKind::sort_mismatch, "unify: patterns have different sorts");
  std::pair<Term, Term> eq{p, q};
  return unify_all(std::span<const std::pair<Term, Term>>(&eq, 1), opts);
}

bool unifiable(const Term& p, const Term& q, const UnifyOptions& opts) {
  if (p.sort() != q.sort()) return false;
  UnifyOptions o = opts;
  o.prune = false;
  return !unify(p, q, o).empty();
}

}  // namespace prooftree
