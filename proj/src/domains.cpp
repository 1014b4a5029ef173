#include "prooftree/domains.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "prooftree/syntax.hpp"

namespace prooftree {

namespace {

using Nat = boost::multiprecision::cpp_int;

std::optional<Nat> value_of(const Term& t) {
  if (!t || !t.is(TermKind::lit)) return std::nullopt;
  return Nat(t.name());
}

class DomainControl : public ControlOracle {
 public:
  DomainControl(const SemanticDomain& dom, std::vector<std::size_t> states) : dom_(dom), states_(std::move(states)) {}

  bool nabla(std::span<const Term> children, const std::string& letter, const Term& t) const override {
    const Rule* r = dom_.calculus->find_rule(letter);
    if (!r || r->arity() != children.size()) return false;
    try {
      return rule_instance_check(*r, children, t);
    } catch (const TermError&) {
      return false;
    }
  }

  bool nabla_eps(const Term& t, StateId q) const override {
    return q < states_.size() && dom_.states[states_[q]].contains(t);
  }

  std::optional<std::vector<Term>> instances(StateId q, std::size_t bound) const override {
    return dom_.states[states_.at(q)].enumerate(bound);
  }

  std::optional<std::vector<Term>> conclusions(std::span<const Term> children, const std::string& letter) const override {
    const Rule* r = dom_.calculus->find_rule(letter);
    if (!r || r->arity() != children.size()) return std::vector<Term>{};
    const auto* m = r->semantic();
    if (!m || !m->conclusions) return std::nullopt;
    return m->conclusions(children);
  }

 private:
  SemanticDomain dom_;
  std::vector<std::size_t> states_;
};

SemanticDomain make_arthm() {
  SignatureSpec spec;
  spec.sorts = {{"N", SortKind::atomic, "", true}};
  auto sig = std::make_shared<const Signature>(spec);
  const SortId n = sig->sort_id("N");
  auto lit = [n](const Nat& v) { return Term::lit(n, v.str()); };
  auto values_upto = [lit](std::size_t bound, auto keep) {
    std::vector<Term> out;
    for (std::size_t v = 0; v <= bound; ++v) {
      if (keep(v)) out.push_back(lit(Nat(v)));
    }
    return out;
  };

  SemanticRule zero;
  zero.trg = n;
  zero.contains = [](std::span<const Term> hs, const Term& c) {
    auto v = value_of(c);
    return hs.empty() && v && *v == 0;
  };
  zero.conclusions = [lit](std::span<const Term> hs) { return hs.empty() ? std::vector<Term>{lit(0)} : std::vector<Term>{}; };
  zero.enumerate = [lit](std::size_t) { return std::vector<RuleInstance>{{{}, lit(0)}}; };
  zero.in_domain = [](std::size_t i, const Term& t) {
    auto v = value_of(t);
    return i == 0 && v && *v == 0;
  };

  SemanticRule incr;
  incr.src = {n};
  incr.trg = n;
  incr.contains = [](std::span<const Term> hs, const Term& c) {
    if (hs.size() != 1) return false;
    auto a = value_of(hs[0]);
    auto v = value_of(c);
    return a && v && *v == *a + 1;
  };
  incr.conclusions = [lit](std::span<const Term> hs) {
    auto a = hs.size() == 1 ? value_of(hs[0]) : std::nullopt;
    return a ? std::vector<Term>{lit(*a + 1)} : std::vector<Term>{};
  };
  incr.enumerate = [lit](std::size_t bound) {
    std::vector<RuleInstance> out;
    for (std::size_t v = 0; v + 1 <= bound; ++v) out.push_back({{lit(Nat(v))}, lit(Nat(v + 1))});
    return out;
  };
  incr.in_domain = [](std::size_t i, const Term& t) {
    auto v = value_of(t);
    return v && (i == 1 || *v >= 1);
  };

  SemanticRule add;
  add.src = {n, n};
  add.trg = n;
  add.contains = [](std::span<const Term> hs, const Term& c) {
    if (hs.size() != 2) return false;
    auto a = value_of(hs[0]);
    auto b = value_of(hs[1]);
    auto v = value_of(c);
    return a && b && v && *v == *a + *b;
  };
  add.conclusions = [lit](std::span<const Term> hs) {
    auto a = hs.size() == 2 ? value_of(hs[0]) : std::nullopt;
    auto b = hs.size() == 2 ? value_of(hs[1]) : std::nullopt;
    return a && b ? std::vector<Term>{lit(*a + *b)} : std::vector<Term>{};
  };
  add.enumerate = [lit](std::size_t bound) {
    std::vector<RuleInstance> out;
    for (std::size_t a = 0; a <= bound; ++a) {
      for (std::size_t b = 0; a + b <= bound; ++b) out.push_back({{lit(Nat(a)), lit(Nat(b))}, lit(Nat(a + b))});
    }
    return out;
  };
  add.in_domain = [](std::size_t, const Term& t) { return value_of(t).has_value(); };

  SemanticDomain dom;
  dom.calculus = std::make_shared<const Calculus>(
      sig, VariablePool{}, std::vector<Rule>{{"0", zero}, {"Incr", incr}, {"Add", add}});
  dom.instance_sort = n;
  dom.parse = [lit](std::string_view text) -> std::optional<Term> {
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    return lit(Nat(normalize_digits(text)));
  };
  dom.print = [](const Term& t) { return t.name(); };
  auto member = [](auto pred) {
    return [pred](const Term& t) {
      auto v = value_of(t);
      return v && pred(*v);
    };
  };
  dom.states = {
      {"zero", member([](const Nat& v) { return v == 0; }), [=](std::size_t b) { return values_upto(b, [](std::size_t v) { return v == 0; }); }},
      {"even", member([](const Nat& v) { return v % 2 == 0; }), [=](std::size_t b) { return values_upto(b, [](std::size_t v) { return v % 2 == 0; }); }},
      {"odd", member([](const Nat& v) { return v % 2 == 1; }), [=](std::size_t b) { return values_upto(b, [](std::size_t v) { return v % 2 == 1; }); }},
      {"le1", member([](const Nat& v) { return v <= 1; }), [=](std::size_t b) { return values_upto(b, [](std::size_t v) { return v <= 1; }); }},
  };
  return dom;
}

}  // namespace

std::optional<std::size_t> SemanticDomain::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].name == name) return i;
  }
  return std::nullopt;
}

Automaton semantic_automaton(const SemanticDomain& dom, const std::vector<std::string>& states,
                             std::vector<Transition> delta, std::vector<EpsEdge> eps) {
  Automaton a;
  a.alphabet = rule_alphabet(*dom.calculus);
  std::vector<std::size_t> idx;
  for (const auto& s : states) {
    auto i = dom.find_state(s);
    if (!i) throw AutomatonError("unknown domain state " + s);
    idx.push_back(*i);
    a.state_names.push_back(s);
    a.state_sorts.push_back(dom.instance_sort);
  }
  a.delta = std::move(delta);
  a.delta_eps = std::move(eps);
  a.final.assign(states.size(), true);
  a.control = std::make_shared<DomainControl>(dom, idx);
  a.validate();
  return a;
}

const SemanticDomain& arthm_domain() {
  static const SemanticDomain dom = make_arthm();
  return dom;
}

Term arthm_value(unsigned long long n) { return Term::lit(arthm_domain().instance_sort, std::to_string(n)); }

Automaton arthm_automaton(ArthmVariant v) {
  enum : StateId { zero, even, odd, le1 };
  std::vector<std::string> states{"zero", "even", "odd"};
  std::vector<Transition> delta{
      {{}, "0", zero},
      {{even}, "Incr", odd},
      {{odd}, "Incr", even},
      {{even, even}, "Add", even},
      {{odd, odd}, "Add", even},
      {{odd, even}, "Add", odd},
      {{even, odd}, "Add", odd},
  };
  switch (v) {
    case ArthmVariant::base:
      break;
    case ArthmVariant::a2:
      delta.push_back({{}, "0", odd});
      break;
    case ArthmVariant::a3:
      std::erase(delta, Transition{{odd}, "Incr", even});
      break;
    case ArthmVariant::a4:
      states.push_back("le1");
      delta.push_back({{}, "0", le1});
      break;
  }
  return semantic_automaton(arthm_domain(), states, std::move(delta), {{zero, even}});
}

std::optional<ArthmVariant> parse_arthm_variant(std::string_view name) {
  if (name == "arthm") return ArthmVariant::base;
  if (name == "arthm-a2") return ArthmVariant::a2;
  if (name == "arthm-a3") return ArthmVariant::a3;
  if (name == "arthm-a4") return ArthmVariant::a4;
  return std::nullopt;
}

std::string arthm_variant_name(ArthmVariant v) {
  switch (v) {
    case ArthmVariant::base:
      return "arthm";
    case ArthmVariant::a2:
      return "arthm-a2";
    case ArthmVariant::a3:
      return "arthm-a3";
    case ArthmVariant::a4:
      return "arthm-a4";
  }
  return "arthm";
}

Derivation arthm_example_tree() {
  auto leaf = [] { return Derivation{arthm_value(0), "0", {}}; };
  Derivation one{arthm_value(1), "Incr", {leaf()}};
  Derivation two{arthm_value(2), "Incr", {one}};
  Derivation sum{arthm_value(2), "Add", {two, leaf()}};
  return Derivation{arthm_value(3), "Add", {one, sum}};
}

namespace {

std::string show_terms(std::span<const Term> ts) {
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) out += (i ? " " : "") + ts[i].name();
  return out.empty() ? "()" : out;
}

std::string show_transition(const Automaton& a, const Transition& t) {
  std::string src;
  for (std::size_t i = 0; i < t.src.size(); ++i) src += (i ? " " : "") + a.state_names[t.src[i]];
  return (src.empty() ? "()" : src) + " -[" + t.letter + "]-> " + a.state_names[t.trg];
}

template <typename Visit>
bool for_each_instance_tuple(const std::vector<std::vector<Term>>& pools, Visit visit) {
  for (const auto& p : pools) {
    if (p.empty()) return false;
  }
  std::vector<std::size_t> idx(pools.size(), 0);
  std::vector<Term> tuple(pools.size());
  for (;;) {
    for (std::size_t i = 0; i < pools.size(); ++i) tuple[i] = pools[i][idx[i]];
    if (visit(tuple)) return true;
    std::size_t k = pools.size();
    for (;;) {
      if (k == 0) return false;
      --k;
      if (++idx[k] < pools[k].size()) break;
      idx[k] = 0;
    }
  }
}

}  // namespace

CheckReport bounded_property_check(const Automaton& a, Property p, std::size_t bound) {
  const auto& ctl = *a.control;
  auto pool = [&](StateId q) {
    auto xs = ctl.instances(q, bound);
    if (!xs) throw AutomatonError("state " + a.state_names[q] + " cannot be enumerated");
    return *xs;
  };
  auto concl = [&](std::span<const Term> hs, const std::string& letter) {
    auto cs = ctl.conclusions(hs, letter);
    if (!cs) throw AutomatonError("rule " + letter + " cannot be evaluated forwards");
    return *cs;
  };
  CheckReport rep;
  rep.bound = bound;

  if (p == Property::consistent || p == Property::total) {
    for (std::size_t ti = 0; ti < a.delta.size(); ++ti) {
      const auto& tr = a.delta[ti];
      std::vector<std::vector<Term>> pools;
      for (auto q : tr.src) pools.push_back(pool(q));
      Finding f{show_transition(a, tr), Verdict::proven_up_to_bound, ""};
      for_each_instance_tuple(pools, [&](const std::vector<Term>& hs) {
        const auto cs = concl(hs, tr.letter);
        std::optional<Term> bad;
        bool some = false;
        for (const auto& c : cs) {
          const bool in = ctl.nabla_eps(c, tr.trg);
          some = some || in;
          if (!in && !bad) bad = c;
        }
        const bool fails = p == Property::consistent ? bad.has_value() : !some;
        if (!fails) return false;
        Witness w;
        w.rule = tr.letter;
        w.transition = ti;
        w.states = tr.src;
        w.states.push_back(tr.trg);
        w.hyps = hs;
        if (bad) w.concl = bad;
        w.text = p == Property::consistent
                     ? "t=" + bad->name() + " from " + show_terms(hs) + " is not in " + a.state_names[tr.trg]
                     : "no conclusion of " + tr.letter + " from " + show_terms(hs) + " lies in " + a.state_names[tr.trg];
        f.verdict = Verdict::refuted;
        f.detail = w.text;
        if (!rep.witness) rep.witness = w;
        return true;
      });
      if (f.verdict != Verdict::refuted) f.detail = "no violation up to " + std::to_string(bound);
      rep.details.push_back(f);
    }
  } else {
    std::set<StateId> conc;
    for (const auto& t : a.delta) conc.insert(t.trg);
    const std::vector<StateId> cs(conc.begin(), conc.end());
    auto reach = [&](StateId q, const Term& t) {
      std::vector<bool> seen(a.size(), false);
      seen[q] = true;
      std::deque<StateId> queue{q};
      while (!queue.empty()) {
        StateId u = queue.front();
        queue.pop_front();
        for (const auto& [x, y] : a.delta_eps) {
          if (x != u || seen[y] || !ctl.nabla_eps(t, y)) continue;
          seen[y] = true;
          queue.push_back(y);
        }
      }
      return seen;
    };
    for (const auto& letter : a.alphabet->connectives()) {
      const std::size_t n = letter.arity();
      Finding f{letter.name, Verdict::proven_up_to_bound, ""};
      std::vector<std::size_t> idx(n, 0);
      bool stop = cs.empty() && n > 0;
      while (!stop) {
        std::vector<StateId> qs;
        std::vector<std::vector<Term>> pools;
        for (auto i : idx) {
          qs.push_back(cs[i]);
          pools.push_back(pool(cs[i]));
        }
        const bool refuted = for_each_instance_tuple(pools, [&](const std::vector<Term>& hs) {
          std::vector<std::vector<bool>> r;
          for (std::size_t i = 0; i < n; ++i) r.push_back(reach(qs[i], hs[i]));
          for (const auto& c : concl(hs, letter.name)) {
            bool ok = false;
            for (const auto& tr : a.delta) {
              if (tr.letter != letter.name || tr.src.size() != n || !ctl.nabla_eps(c, tr.trg)) continue;
              bool all = true;
              for (std::size_t i = 0; all && i < n; ++i) all = r[i][tr.src[i]];
              if (all) {
                ok = true;
                break;
              }
            }
            if (ok) continue;
            Witness w;
            w.rule = letter.name;
            w.states = qs;
            w.hyps = hs;
            w.concl = c;
            std::string st;
            for (std::size_t i = 0; i < n; ++i) st += (i ? " " : "") + a.state_names[qs[i]];
            w.text = "rule " + letter.name + " from state" + (n == 1 ? " " : "s ") + (st.empty() ? "()" : st) +
                     " with t=" + show_terms(hs) + " cannot reach a state containing " + c.name();
            f.verdict = Verdict::refuted;
            f.detail = w.text;
            if (!rep.witness) rep.witness = w;
            return true;
          }
          return false;
        });
        if (refuted) break;
        std::size_t k = n;
        stop = true;
        while (k > 0) {
          --k;
          if (++idx[k] < cs.size()) {
            stop = false;
            break;
          }
          idx[k] = 0;
        }
      }
      if (f.verdict != Verdict::refuted) f.detail = "no violation up to " + std::to_string(bound);
      rep.details.push_back(f);
    }
  }
  bool refuted = false;
  for (const auto& f : rep.details) refuted = refuted || f.verdict == Verdict::refuted;
  rep.verdict = refuted ? Verdict::refuted : Verdict::proven_up_to_bound;
  return rep;
}

std::optional<Derivation> bounded_counterexample(const Automaton& a, const Calculus& k, std::size_t depth, std::size_t bound) {
  DerivationEnumOptions o;
  o.max_depth = depth;
  o.max_size = bound;
  std::optional<Derivation> found;
  for_each_derivation(k, o, [&](const Derivation& d) {
    if (accepts(a, d)) return false;
    found = d;
    return true;
  });
  return found;
}

}  // namespace prooftree
