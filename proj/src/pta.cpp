#include "prooftree/pta.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "prooftree/syntax.hpp"
#include "prooftree/term_enum.hpp"

namespace prooftree {

namespace {

class SchematicControl : public ControlOracle {
 public:
  explicit SchematicControl(SchematicPta p) : p_(std::move(p)) {}

  bool nabla(std::span<const Term> children, const std::string& letter, const Term& t) const override {
    const Rule* r = p_.calculus->find_rule(letter);
    if (!r) return false;
    try {
      return rule_instance_check(*r, children, t);
    } catch (const TermError&) {
      return false;
    }
  }

  bool nabla_eps(const Term& t, StateId q) const override {
    if (q >= p_.states.size() || !t.is_ground() || t.sort() != p_.states[q].sort()) return false;
    return instance_of(t, p_.states[q]);
  }

  std::optional<std::vector<Term>> instances(StateId q, std::size_t bound) const override {
    GroundEnumerator en(p_.calculus->signature_ptr());
    return en.instances(p_.states.at(q), bound);
  }

  std::optional<std::vector<Term>> conclusions(std::span<const Term> children, const std::string& letter) const override {
    const Rule* r = p_.calculus->find_rule(letter);
    if (!r || r->arity() != children.size()) return std::vector<Term>{};
    if (const auto* m = r->semantic()) {
      if (!m->conclusions) return std::nullopt;
      return m->conclusions(children);
    }
    const auto* s = r->schematic();
    std::set<Term> out;
    bool open = false;
    for_each_match(s->hyps, children, {}, [&](const Subst& sigma) {
      Term c = apply_subst(s->concl, sigma);
      if (!c.is_ground()) {
        open = true;
        return true;
      }
      out.insert(c);
      return false;
    });
    if (open) return std::nullopt;
    return std::vector<Term>(out.begin(), out.end());
  }

  std::optional<SchematicView> schematic() const override {
    return SchematicView{p_.calculus.get(), std::span<const Term>(p_.states)};
  }

 private:
  SchematicPta p_;
};

std::string show(const Calculus& k, const Term& t) { return print(k.signature(), t); }

std::string show_states(const SchematicPta& p, const std::vector<StateId>& qs) {
  std::string out;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i > 0) out += ' ';
    out += p.state_names[qs[i]];
  }
  return out.empty() ? "()" : out;
}

std::string describe(const SchematicPta& p, const Transition& t) {
  return show_states(p, t.src) + " -[" + t.letter + "]-> " + p.state_names[t.trg];
}

Verdict combine(const std::vector<Finding>& fs) {
  bool unknown = false;
  bool bounded = false;
  for (const auto& f : fs) {
    if (f.verdict == Verdict::refuted) return Verdict::refuted;
    unknown = unknown || f.verdict == Verdict::unknown;
    bounded = bounded || f.verdict == Verdict::proven_up_to_bound;
  }
  if (unknown) return Verdict::unknown;
  return bounded ? Verdict::proven_up_to_bound : Verdict::proven;
}

bool for_each_index_tuple(const std::vector<std::size_t>& sizes, std::size_t cap,
                          const std::function<bool(const std::vector<std::size_t>&)>& visit, bool& truncated) {
  truncated = false;
  for (auto s : sizes) {
    if (s == 0) return false;
  }
  std::vector<std::size_t> idx(sizes.size(), 0);
  std::size_t seen = 0;
  for (;;) {
    if (seen++ >= cap) {
      truncated = true;
      return false;
    }
    if (visit(idx)) return true;
    if (sizes.empty()) return false;
    std::size_t k = sizes.size();
    for (;;) {
      --k;
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
      if (k == 0) return false;
    }
  }
}

// Renames each state occurrence apart from the rule and from each other.
std::vector<Term> rename_states(const SchematicPta& p, const std::vector<StateId>& qs, FreshNames& names) {
  std::vector<Term> out;
  for (auto q : qs) out.push_back(rename_apart(p.states[q], names));
  return out;
}

FreshNames names_of_rule(const SchematicRule& s) {
  FreshNames names;
  for (const auto& h : s.hyps) names.reserve(h);
  names.reserve(s.concl);
  return names;
}

}  // namespace

bool state_covers(const Term& state, const Term& inst) {
  FreshNames names;
  names.reserve(inst);
  return subsumes(rename_apart(state, names), inst);
}

bool state_meets(const Term& state, const Term& inst, const UnifyOptions& opts) {
  if (state.sort() != inst.sort()) return false;
  FreshNames names;
  names.reserve(inst);
  return unifiable(rename_apart(state, names), inst, opts);
}

void validate_pta(const SchematicPta& p) {
  if (!p.calculus) throw PtaError(PtaErrorKind::bad_index, "automaton has no calculus");
  const auto& k = *p.calculus;
  if (p.state_names.size() != p.states.size()) throw PtaError(PtaErrorKind::bad_index, "state names and patterns differ in number");
  for (std::size_t q = 0; q < p.states.size(); ++q) {
    try {
      check_term(k.signature(), p.states[q]);
    } catch (const TermError& e) {
      throw PtaError(PtaErrorKind::sort_mismatch, "state " + p.state_names[q] + ": " + e.what());
    }
    if (!pattern_inhabited(k.signature(), p.states[q])) {
      throw PtaError(PtaErrorKind::uninhabited_state, "state " + p.state_names[q] + " has no instance");
    }
  }
  for (const auto& t : p.delta) {
    const Rule* r = k.find_rule(t.letter);
    if (!r) throw PtaError(PtaErrorKind::unknown_rule, "unknown rule " + t.letter);
    if (t.trg >= p.states.size()) throw PtaError(PtaErrorKind::bad_index, "transition target out of range");
    if (r->arity() != t.src.size()) throw PtaError(PtaErrorKind::arity_mismatch, "rule " + t.letter + " used with wrong arity");
    const auto src = r->src();
    for (std::size_t i = 0; i < t.src.size(); ++i) {
      if (t.src[i] >= p.states.size()) throw PtaError(PtaErrorKind::bad_index, "transition source out of range");
      if (p.states[t.src[i]].sort() != src[i]) {
        throw PtaError(PtaErrorKind::sort_mismatch, "source " + p.state_names[t.src[i]] + " of " + t.letter + " has the wrong sort");
      }
    }
    if (p.states[t.trg].sort() != r->trg()) {
      throw PtaError(PtaErrorKind::sort_mismatch, "target " + p.state_names[t.trg] + " of " + t.letter + " has the wrong sort");
    }
  }
  for (const auto& [a, b] : p.delta_eps) {
    if (a >= p.states.size() || b >= p.states.size()) throw PtaError(PtaErrorKind::bad_index, "epsilon edge out of range");
  }
}

std::shared_ptr<const Signature> rule_alphabet(const Calculus& k) {
  SignatureSpec spec;
  spec.sorts = k.signature().spec().sorts;
  for (const auto& r : k.rules()) {
    ConnectiveDecl c;
    c.name = r.name;
    for (auto s : r.src()) c.src.push_back(k.signature().sort(s).name);
    c.trg = k.signature().sort(r.trg()).name;
    spec.connectives.push_back(std::move(c));
  }
  return std::make_shared<const Signature>(spec);
}

Automaton as_automaton(const SchematicPta& p) {
  validate_pta(p);
  Automaton a;
  a.alphabet = rule_alphabet(*p.calculus);
  a.state_names = p.state_names;
  for (const auto& s : p.states) a.state_sorts.push_back(s.sort());
  a.delta = p.delta;
  a.delta_eps = p.delta_eps;
  a.final.assign(p.states.size(), true);
  a.control = std::make_shared<SchematicControl>(p);
  return a;
}

SchematicPta trivial_pta(std::shared_ptr<const Calculus> k, SortId sort) {
  SchematicPta p;
  p.state_names = {"q"};
  p.states = {Term::meta("x", sort)};
  for (const auto& r : k->rules()) {
    const auto src = r.src();
    if (r.trg() != sort || std::any_of(src.begin(), src.end(), [&](SortId s) { return s != sort; })) continue;
    p.delta.push_back({std::vector<StateId>(src.size(), 0), r.name, 0});
  }
  p.calculus = std::move(k);
  return p;
}

CanonicalPta canonical_pta(std::shared_ptr<const Calculus> k, const UnifyOptions& opts) {
  CanonicalPta out;
  auto& p = out.pta;
  std::map<Term, StateId> index;
  auto state_of = [&](const Term& pat) {
    Term key = alpha_canonical(pat);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    StateId q = p.states.size();
    index.emplace(key, q);
    p.states.push_back(pat);
    p.state_names.push_back("q" + std::to_string(q));
    return q;
  };
  std::vector<std::vector<StateId>> pos(k->rules().size());
  for (std::size_t r = 0; r < k->rules().size(); ++r) {
    const Rule& rule = k->rules()[r];
    if (!rule.schematic()) throw PtaError(PtaErrorKind::semantic_rule, "rule " + rule.name + " is not schematic");
    bool approx = false;
    for (std::size_t i = 0; i <= rule.arity(); ++i) {
      DomPattern d = dom_pattern(rule, i);
      approx = approx || d.over_approximate;
      pos[r].push_back(state_of(*d.pattern));
    }
    if (approx) out.approximate_rules.push_back(rule.name);
    p.delta.push_back({std::vector<StateId>(pos[r].begin() + 1, pos[r].end()), rule.name, pos[r][0]});
  }
  std::set<EpsEdge> eps;
  for (std::size_t r = 0; r < pos.size(); ++r) {
    const StateId from = pos[r][0];
    for (std::size_t r2 = 0; r2 < pos.size(); ++r2) {
      for (std::size_t i = 1; i < pos[r2].size(); ++i) {
        const StateId to = pos[r2][i];
        if (eps.contains({from, to})) continue;
        if (state_meets(p.states[from], p.states[to], opts)) eps.insert({from, to});
      }
    }
  }
  p.delta_eps.assign(eps.begin(), eps.end());
  p.calculus = std::move(k);
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::proven:
      return "proven";
    case Verdict::proven_up_to_bound:
      return "proven-up-to-bound";
    case Verdict::refuted:
      return "refuted";
    case Verdict::unknown:
      return "unknown";
  }
  return "unknown";
}

CheckReport check_consistent(const SchematicPta& p, const CheckOptions& opts) {
  validate_pta(p);
  const auto& k = *p.calculus;
  CheckReport rep;
  rep.bound = opts.bound;
  GroundEnumerator en(k.signature_ptr());
  for (std::size_t ti = 0; ti < p.delta.size(); ++ti) {
    const auto& tr = p.delta[ti];
    const Rule& rule = k.rule(tr.letter);
    Finding f{describe(p, tr), Verdict::proven, ""};
    const auto* s = rule.schematic();
    if (!s) {
      f.verdict = Verdict::unknown;
      f.detail = "semantic rule";
      rep.details.push_back(f);
      continue;
    }
    FreshNames names = names_of_rule(*s);
    auto qs = rename_states(p, tr.src, names);
    std::vector<std::pair<Term, Term>> eqs;
    for (std::size_t i = 0; i < qs.size(); ++i) eqs.emplace_back(s->hyps[i], qs[i]);
    std::vector<Subst> sols;
    try {
      sols = unify_all(eqs, opts.unify);
    } catch (const ResourceLimit&) {
      f.verdict = Verdict::unknown;
      f.detail = "unification step limit";
      rep.details.push_back(f);
      continue;
    }
    for (const auto& sigma : sols) {
      Term c = apply_subst(s->concl, sigma);
      if (state_covers(p.states[tr.trg], c)) continue;
      std::vector<Term> pats = apply_subst(std::span<const Term>(s->hyps), sigma);
      pats.push_back(c);
      std::optional<Witness> w;
      en.for_each_grounding(pats, opts.bound, [&](const Subst& g) {
        Term gc = apply_subst(c, g);
        if (instance_of(gc, p.states[tr.trg])) return false;
        Witness wit;
        wit.rule = tr.letter;
        wit.transition = ti;
        wit.states = tr.src;
        wit.states.push_back(tr.trg);
        for (std::size_t i = 0; i + 1 < pats.size(); ++i) wit.hyps.push_back(apply_subst(pats[i], g));
        wit.concl = gc;
        wit.text = "conclusion " + show(k, gc) + " of " + tr.letter + " is not in " + p.state_names[tr.trg];
        w = wit;
        return true;
      });
      if (w) {
        f.verdict = Verdict::refuted;
        f.detail = w->text;
        if (!rep.witness) rep.witness = w;
        break;
      }
      f.verdict = Verdict::unknown;
      f.detail = "target does not subsume " + show(k, c) + "; no counter-instance up to size " + std::to_string(opts.bound);
    }
    rep.details.push_back(f);
  }
  rep.verdict = combine(rep.details);
  return rep;
}

CheckReport check_complete(const SchematicPta& p, const CheckOptions& opts) {
  validate_pta(p);
  const auto& k = *p.calculus;
  CheckReport rep;
  std::set<StateId> conc;
  for (const auto& t : p.delta) conc.insert(t.trg);
  const std::vector<StateId> cs(conc.begin(), conc.end());

  // States reachable from q by eps-steps through states covering `inst`.
  auto reach = [&](StateId q, const Term& inst) {
    std::vector<bool> seen(p.states.size(), false);
    seen[q] = true;
    std::deque<StateId> queue{q};
    while (!queue.empty()) {
      StateId u = queue.front();
      queue.pop_front();
      for (const auto& [a, b] : p.delta_eps) {
        if (a != u || seen[b] || !state_covers(p.states[b], inst)) continue;
        seen[b] = true;
        queue.push_back(b);
      }
    }
    return seen;
  };

  for (const auto& rule : k.rules()) {
    const auto* s = rule.schematic();
    const std::size_t n = rule.arity();
    if (!s) {
      rep.details.push_back({rule.name, Verdict::unknown, "semantic rule"});
      continue;
    }
    std::size_t open = 0;
    std::vector<std::string> notes;
    std::vector<std::size_t> sizes(n, cs.size());
    bool truncated = false;
    for_each_index_tuple(sizes, opts.tuple_cap, [&](const std::vector<std::size_t>& idx) {
      std::vector<StateId> qs;
      for (auto i : idx) qs.push_back(cs[i]);
      FreshNames names = names_of_rule(*s);
      auto renamed = rename_states(p, qs, names);
      std::vector<std::pair<Term, Term>> eqs;
      for (std::size_t i = 0; i < n; ++i) eqs.emplace_back(s->hyps[i], renamed[i]);
      std::vector<Subst> sols;
      try {
        sols = unify_all(eqs, opts.unify);
      } catch (const ResourceLimit&) {
        ++open;
        notes.push_back("unification step limit at " + show_states(p, qs));
        return false;
      }
      for (const auto& sigma : sols) {
        std::vector<Term> hs = apply_subst(std::span<const Term>(s->hyps), sigma);
        Term c = apply_subst(s->concl, sigma);
        std::vector<std::vector<bool>> reachable;
        for (std::size_t i = 0; i < n; ++i) reachable.push_back(reach(qs[i], hs[i]));
        bool done = false;
        for (const auto& t : p.delta) {
          if (t.letter != rule.name) continue;
          bool ok = true;
          for (std::size_t i = 0; ok && i < n; ++i) ok = reachable[i][t.src[i]];
          if (ok && state_covers(p.states[t.trg], c)) {
            done = true;
            break;
          }
        }
        if (!done) {
          ++open;
          std::string hyp_text;
          for (std::size_t i = 0; i < n; ++i) hyp_text += (i ? " ; " : "") + show(k, hs[i]);
          notes.push_back("from " + show_states(p, qs) + ": " + (n ? hyp_text : "()") + " ==> " + show(k, c));
        }
      }
      return false;
    }, truncated);
    if (truncated) {
      ++open;
      notes.push_back("state tuple cap reached");
    }
    Finding f{rule.name, open == 0 ? Verdict::proven : Verdict::unknown, ""};
    for (const auto& note : notes) f.detail += (f.detail.empty() ? "" : "\n") + note;
    rep.details.push_back(f);
  }
  rep.verdict = combine(rep.details);
  return rep;
}

std::optional<Derivation> refute_completeness(const SchematicPta& p, std::size_t depth, std::size_t size) {
  Automaton a = as_automaton(p);
  DerivationEnumOptions o;
  o.max_depth = depth;
  o.max_size = size;
  std::optional<Derivation> found;
  for_each_derivation(*p.calculus, o, [&](const Derivation& d) {
    if (accepts(a, d)) return false;
    found = d;
    return true;
  });
  return found;
}

CheckReport check_total(const SchematicPta& p, const CheckOptions& opts) {
  validate_pta(p);
  const auto& k = *p.calculus;
  CheckReport rep;
  rep.bound = opts.bound;
  GroundEnumerator en(k.signature_ptr());
  for (std::size_t ti = 0; ti < p.delta.size(); ++ti) {
    const auto& tr = p.delta[ti];
    const Rule& rule = k.rule(tr.letter);
    Finding f{describe(p, tr), Verdict::proven, "schematic"};
    const auto* s = rule.schematic();
    if (!s) {
      rep.details.push_back({describe(p, tr), Verdict::unknown, "semantic rule"});
      continue;
    }
    FreshNames names = names_of_rule(*s);
    auto qs = rename_states(p, tr.src, names);
    if (auto sigma = match_one(s->hyps, qs)) {
      if (state_covers(p.states[tr.trg], apply_subst(s->concl, *sigma))) {
        rep.details.push_back(f);
        continue;
      }
    }
    std::vector<std::vector<Term>> pools;
    std::vector<std::size_t> sizes;
    for (auto q : tr.src) {
      pools.push_back(en.instances(p.states[q], opts.bound));
      sizes.push_back(pools.back().size());
    }
    std::vector<Term> tuple(tr.src.size());
    bool truncated = false;
    for_each_index_tuple(sizes, opts.tuple_cap, [&](const std::vector<std::size_t>& idx) {
      for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = pools[i][idx[i]];
      bool ok = false;
      for_each_match(s->hyps, tuple, {}, [&](const Subst& sigma) {
        Term c = apply_subst(s->concl, sigma);
        ok = c.is_ground() ? instance_of(c, p.states[tr.trg])
                           : pattern_inhabited(k.signature(), c) && state_meets(p.states[tr.trg], c, opts.unify);
        return ok;
      });
      if (ok) return false;
      Witness w;
      w.rule = tr.letter;
      w.transition = ti;
      w.states = tr.src;
      w.hyps = tuple;
      w.text = "no instance of " + tr.letter + " from";
      for (const auto& t : tuple) w.text += " [" + show(k, t) + "]";
      w.text += " lands in " + p.state_names[tr.trg];
      f.verdict = Verdict::refuted;
      f.detail = w.text;
      if (!rep.witness) rep.witness = w;
      return true;
    }, truncated);
    if (f.verdict != Verdict::refuted) {
      f.verdict = truncated ? Verdict::unknown : Verdict::proven_up_to_bound;
      f.detail = truncated ? "tuple cap reached" : "no refutation up to size " + std::to_string(opts.bound);
    }
    rep.details.push_back(f);
  }
  rep.verdict = combine(rep.details);
  return rep;
}

bool pta_accepts(const SchematicPta& p, const Derivation& d) { return accepts(as_automaton(p), d); }

}  // namespace prooftree
