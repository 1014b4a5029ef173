#include "prooftree/calculus.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "prooftree/syntax.hpp"

namespace prooftree {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void check_instance_shape(const Rule& r, std::span<const Term> hyps, const Term& concl) {
  if (hyps.size() != r.arity()) {
    throw TermError(TermErrorKind::arity_mismatch, "rule " + r.name + " expects " + std::to_string(r.arity()) +
                                                       " hypotheses, got " + std::to_string(hyps.size()));
  }
  const auto src = r.src();
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (!hyps[i].is_ground()) throw TermError(TermErrorKind::not_ground, "hypothesis is not ground");
    if (hyps[i].sort() != src[i]) throw TermError(TermErrorKind::sort_mismatch, "hypothesis sort mismatch in " + r.name);
  }
  if (!concl.is_ground()) throw TermError(TermErrorKind::not_ground, "conclusion is not ground");
  if (concl.sort() != r.trg()) throw TermError(TermErrorKind::sort_mismatch, "conclusion sort mismatch in " + r.name);
}

std::set<std::string> meta_names(const Term& t) {
  std::set<std::string> out;
  for (const auto& m : metavariables(t)) out.insert(m.name());
  return out;
}

bool shares_with_other_hyp(const SchematicRule& r, std::size_t i) {
  const auto mine = meta_names(r.hyps[i]);
  for (std::size_t j = 0; j < r.hyps.size(); ++j) {
    if (j == i) continue;
    for (const auto& m : metavariables(r.hyps[j])) {
      if (mine.contains(m.name())) return true;
    }
  }
  return false;
}

// Iterates the cartesian product of index ranges [0, sizes[i]); `visit`
// returns true to stop. Returns false when the product was exhausted.
bool for_each_tuple(const std::vector<std::size_t>& sizes, const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  for (auto s : sizes) {
    if (s == 0) return false;
  }
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (;;) {
    if (visit(idx)) return true;
    std::size_t k = sizes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
      if (k == 0) return false;
    }
    if (sizes.empty()) return false;
  }
}

}  // namespace

std::size_t Rule::arity() const {
  if (const auto* s = schematic()) return s->hyps.size();
  return semantic()->src.size();
}

std::vector<SortId> Rule::src() const {
  if (const auto* s = schematic()) {
    std::vector<SortId> out;
    for (const auto& h : s->hyps) out.push_back(h.sort());
    return out;
  }
  return semantic()->src;
}

SortId Rule::trg() const {
  if (const auto* s = schematic()) return s->concl.sort();
  return semantic()->trg;
}

Calculus::Calculus(std::shared_ptr<const Signature> sig, VariablePool pool, std::vector<Rule> rules)
    : sig_(std::move(sig)), pool_(std::move(pool)), rules_(std::move(rules)) {
  std::set<std::string> names;
  for (const auto& r : rules_) {
    if (!names.insert(r.name).second) throw CalculusError(CalculusErrorKind::duplicate_rule, "duplicate rule " + r.name);
    if (const auto* s = r.schematic()) {
      try {
        for (const auto& h : s->hyps) check_term(*sig_, h);
        if (!s->concl) throw CalculusError(CalculusErrorKind::bad_rule, "rule " + r.name + " has no conclusion");
        check_term(*sig_, s->concl);
      } catch (const TermError& e) {
        throw CalculusError(CalculusErrorKind::bad_rule, "rule " + r.name + ": " + e.what());
      }
      if (sig_->is_sequence(s->concl.sort())) {
        throw CalculusError(CalculusErrorKind::bad_rule, "rule " + r.name + " concludes a sequence sort");
      }
    } else {
      const auto* m = r.semantic();
      if (!m->contains) throw CalculusError(CalculusErrorKind::bad_rule, "rule " + r.name + " has no membership oracle");
    }
  }
}

const Rule* Calculus::find_rule(std::string_view name) const {
  for (const auto& r : rules_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const Rule& Calculus::rule(std::string_view name) const {
  if (const auto* r = find_rule(name)) return *r;
  throw CalculusError(CalculusErrorKind::unknown_rule, "unknown rule " + std::string(name));
}

std::size_t Calculus::rule_index(std::string_view name) const {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].name == name) return i;
  }
  throw CalculusError(CalculusErrorKind::unknown_rule, "unknown rule " + std::string(name));
}

Calculus Calculus::with_rule(Rule r) const {
  auto rules = rules_;
  rules.push_back(std::move(r));
  return Calculus(sig_, pool_, std::move(rules));
}

Calculus Calculus::without_rule(std::string_view name) const {
  auto rules = rules_;
  std::erase_if(rules, [&](const Rule& r) { return r.name == name; });
  return Calculus(sig_, pool_, std::move(rules));
}

std::size_t bound_measure(const Term& t) {
  if (t.is(TermKind::lit)) {
    const auto& d = t.name();
    if (d.size() > 18) return kNone;
    return static_cast<std::size_t>(std::stoull(d));
  }
  return t.size();
}

std::optional<Subst> rule_instance_witness(const SchematicRule& r, std::span<const Term> hyps, const Term& concl) {
  std::vector<Term> ps(r.hyps);
  ps.push_back(r.concl);
  std::vector<Term> ts(hyps.begin(), hyps.end());
  ts.push_back(concl);
  return match_one(ps, ts);
}

bool rule_instance_check(const Rule& r, std::span<const Term> hyps, const Term& concl) {
  check_instance_shape(r, hyps, concl);
  if (const auto* s = r.schematic()) return rule_instance_witness(*s, hyps, concl).has_value();
  return r.semantic()->contains(hyps, concl);
}

DomPattern dom_pattern(const Rule& r, std::size_t i) {
  if (i > r.arity()) throw std::out_of_range("rule " + r.name + " has no position " + std::to_string(i));
  DomPattern out;
  if (const auto* s = r.schematic()) {
    Term p = i == 0 ? s->concl : s->hyps[i - 1];
    out.pattern = p;
    out.sort = p.sort();
    out.over_approximate = i > 0 && shares_with_other_hyp(*s, i - 1);
    out.contains = [p](const Term& t) { return instance_of(t, p); };
    return out;
  }
  const auto* m = r.semantic();
  out.sort = i == 0 ? m->trg : m->src[i - 1];
  if (m->in_domain) {
    auto f = m->in_domain;
    out.contains = [f, i](const Term& t) { return f(i, t); };
  }
  return out;
}

ModularityReport is_modular(const Calculus& k, const Rule& r, std::size_t bound) {
  ModularityReport rep;
  if (const auto* s = r.schematic()) {
    bool shared = false;
    for (std::size_t i = 0; i < s->hyps.size(); ++i) shared = shared || shares_with_other_hyp(*s, i);
    if (!shared) {
      rep.verdict = Modularity::yes;
      return rep;
    }
    GroundEnumerator en(k.signature_ptr());
    std::vector<std::vector<Term>> pools;
    std::vector<std::size_t> sizes;
    for (const auto& h : s->hyps) {
      pools.push_back(en.instances(h, bound));
      sizes.push_back(pools.back().size());
    }
    std::vector<Term> tuple(s->hyps.size());
    for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
      for (std::size_t i = 0; i < idx.size(); ++i) tuple[i] = pools[i][idx[i]];
      if (!match_one(s->hyps, tuple)) {
        rep.verdict = Modularity::no;
        rep.witness = tuple;
        return true;
      }
      return false;
    });
    return rep;
  }
  const auto* m = r.semantic();
  if (!m->enumerate || !m->conclusions) return rep;
  const std::size_t n = m->src.size();
  std::vector<std::set<Term>> proj(n);
  for (const auto& inst : m->enumerate(bound)) {
    for (std::size_t i = 0; i < n; ++i) proj[i].insert(inst.hyps[i]);
  }
  std::vector<std::vector<Term>> pools;
  std::vector<std::size_t> sizes;
  for (const auto& p : proj) {
    pools.emplace_back(p.begin(), p.end());
    sizes.push_back(p.size());
  }
  rep.verdict = Modularity::yes;
  rep.bounded = true;
  std::vector<Term> tuple(n);
  for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t i = 0; i < n; ++i) tuple[i] = pools[i][idx[i]];
    if (m->conclusions(tuple).empty()) {
      rep.verdict = Modularity::no;
      rep.bounded = false;
      rep.witness = tuple;
      return true;
    }
    return false;
  });
  return rep;
}

std::size_t Derivation::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

std::strong_ordering operator<=>(const Derivation& a, const Derivation& b) {
  if (auto c = a.term <=> b.term; c != 0) return c;
  if (auto c = a.rule <=> b.rule; c != 0) return c;
  return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(), b.children.begin(), b.children.end());
}

std::size_t Derivation::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth());
  return d + 1;
}

std::string format_address(const Address& a) {
  if (a.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i > 0) out += '.';
    out += std::to_string(a[i]);
  }
  return out;
}

const Derivation& node_at(const Derivation& d, const Address& a) {
  const Derivation* cur = &d;
  for (auto i : a) {
    if (i == 0 || i > cur->children.size()) throw std::out_of_range("no node at " + format_address(a));
    cur = &cur->children[i - 1];
  }
  return *cur;
}

namespace {

std::optional<DerivationError> validate_node(const Calculus& k, const Derivation& d, Address& at) {
  auto fail = [&](DerivationIssue issue, std::string msg) {
    return DerivationError{at, d.rule, issue, std::move(msg)};
  };
  const Rule* r = k.find_rule(d.rule);
  if (!r) return fail(DerivationIssue::unknown_rule, "unknown rule " + d.rule);
  if (d.children.size() != r->arity()) {
    return fail(DerivationIssue::arity_mismatch, "rule " + d.rule + " expects " + std::to_string(r->arity()) +
                                                     " premises, node has " + std::to_string(d.children.size()));
  }
  if (!d.term || !d.term.is_ground()) return fail(DerivationIssue::not_ground, "node term is not ground");
  try {
    check_term(k.signature(), d.term);
  } catch (const TermError& e) {
    return fail(DerivationIssue::sort_mismatch, e.what());
  }
  const auto src = r->src();
  if (d.term.sort() != r->trg()) return fail(DerivationIssue::sort_mismatch, "conclusion sort differs from rule target");
  std::vector<Term> hyps;
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    const auto& c = d.children[i].term;
    if (!c || !c.is_ground()) return fail(DerivationIssue::not_ground, "premise term is not ground");
    if (c.sort() != src[i]) return fail(DerivationIssue::sort_mismatch, "premise " + std::to_string(i + 1) + " sort mismatch");
    hyps.push_back(c);
  }
  if (!rule_instance_check(*r, hyps, d.term)) {
    return fail(DerivationIssue::not_an_instance, "not an instance of " + d.rule);
  }
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    at.push_back(static_cast<std::uint32_t>(i + 1));
    if (auto e = validate_node(k, d.children[i], at)) return e;
    at.pop_back();
  }
  return std::nullopt;
}

struct ForestNode {
  Term term;
  std::uint32_t rule = 0;
  std::vector<std::uint32_t> kids;
  std::uint32_t depth = 1;
};

class Forest {
 public:
  Forest(const Calculus& k, const DerivationEnumOptions& opts) : k_(k), opts_(opts), en_(k.signature_ptr(), opts.terms) {}

  void build() {
    if (opts_.max_depth == 0) return;
    for (std::uint32_t r = 0; r < k_.rules().size(); ++r) {
      if (k_.rules()[r].arity() == 0) add_axioms(r);
    }
    for (std::size_t d = 2; d <= opts_.max_depth; ++d) {
      const std::size_t before = nodes_.size();
      index_terms();
      for (std::uint32_t r = 0; r < k_.rules().size(); ++r) {
        if (k_.rules()[r].arity() > 0) add_applications(r, static_cast<std::uint32_t>(d));
      }
      if (nodes_.size() == before) break;
    }
  }

  bool root_ok(const ForestNode& n) const {
    if (opts_.root_sort && n.term.sort() != *opts_.root_sort) return false;
    if (opts_.root_connective && !(n.term.is(TermKind::app) && n.term.fn() == *opts_.root_connective)) return false;
    return true;
  }

  Derivation materialize(std::uint32_t id) const {
    const auto& n = nodes_[id];
    Derivation d{n.term, k_.rules()[n.rule].name, {}};
    for (auto c : n.kids) d.children.push_back(materialize(c));
    return d;
  }

  const std::vector<ForestNode>& nodes() const { return nodes_; }

 private:
  void push(ForestNode n) {
    if (nodes_.size() >= opts_.node_cap) throw ResourceLimit("derivation enumeration exceeded node cap");
    nodes_.push_back(std::move(n));
  }

  bool fits(const Term& t) const { return bound_measure(t) <= opts_.max_size; }

  void add_axioms(std::uint32_t r) {
    const Rule& rule = k_.rules()[r];
    std::set<Term> concls;
    if (const auto* s = rule.schematic()) {
      for (const auto& t : en_.instances(s->concl, opts_.max_size)) concls.insert(t);
    } else {
      const auto* m = rule.semantic();
      if (m->conclusions) {
        for (const auto& t : m->conclusions({})) concls.insert(t);
      } else if (m->enumerate) {
        for (const auto& inst : m->enumerate(opts_.max_size)) concls.insert(inst.concl);
      } else {
        throw CalculusError(CalculusErrorKind::unsupported_rule, "rule " + rule.name + " has no enumerator");
      }
    }
    for (const auto& t : concls) {
      if (fits(t)) push({t, r, {}, 1});
    }
  }

  void index_terms() {
    by_term_.clear();
    by_sort_.clear();
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) by_term_[nodes_[i].term].push_back(i);
    for (const auto& [t, ids] : by_term_) by_sort_[t.sort()].push_back(t);
  }

  void collect_schematic(const SchematicRule& s, std::map<std::vector<Term>, std::set<Term>>& out) {
    const std::size_t n = s.hyps.size();
    std::vector<std::vector<Term>> cands(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto it = by_sort_.find(s.hyps[i].sort());
      if (it == by_sort_.end()) return;
      for (const auto& t : it->second) {
        if (match_one(s.hyps[i], t)) cands[i].push_back(t);
      }
      if (cands[i].empty()) return;
    }
    std::vector<Term> chosen(n);
    std::function<void(std::size_t, const Subst&)> go = [&](std::size_t i, const Subst& sigma) {
      if (i == n) {
        Term c = apply_subst(s.concl, sigma);
        auto& slot = out[chosen];
        if (c.is_ground()) {
          if (fits(c)) slot.insert(c);
        } else {
          std::vector<Term> ps{c};
          en_.for_each_grounding(ps, opts_.max_size, [&](const Subst& g) {
            slot.insert(apply_subst(c, g));
            return false;
          });
        }
        if (slot.empty()) out.erase(chosen);
        return;
      }
      for (const auto& t : cands[i]) {
        chosen[i] = t;
        std::vector<Term> ps{s.hyps[i]};
        std::vector<Term> ts{t};
        for_each_match(ps, ts, sigma, [&](const Subst& next) {
          go(i + 1, next);
          return false;
        });
      }
    };
    go(0, {});
  }

  void collect_semantic(const Rule& rule, std::map<std::vector<Term>, std::set<Term>>& out) {
    const auto* m = rule.semantic();
    const std::size_t n = m->src.size();
    if (m->conclusions) {
      std::vector<std::vector<Term>> cands(n);
      std::vector<std::size_t> sizes(n);
      for (std::size_t i = 0; i < n; ++i) {
        auto it = by_sort_.find(m->src[i]);
        if (it != by_sort_.end()) cands[i] = it->second;
        sizes[i] = cands[i].size();
      }
      std::vector<Term> tuple(n);
      for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
        for (std::size_t i = 0; i < n; ++i) tuple[i] = cands[i][idx[i]];
        for (const auto& c : m->conclusions(tuple)) {
          if (fits(c)) out[tuple].insert(c);
        }
        return false;
      });
      return;
    }
    if (!m->enumerate) throw CalculusError(CalculusErrorKind::unsupported_rule, "rule " + rule.name + " has no enumerator");
    for (const auto& inst : m->enumerate(opts_.max_size)) {
      bool present = true;
      for (const auto& h : inst.hyps) present = present && by_term_.contains(h);
      if (present && fits(inst.concl)) out[inst.hyps].insert(inst.concl);
    }
  }

  void add_applications(std::uint32_t r, std::uint32_t depth) {
    const Rule& rule = k_.rules()[r];
    std::map<std::vector<Term>, std::set<Term>> found;
    if (const auto* s = rule.schematic()) {
      collect_schematic(*s, found);
    } else {
      collect_semantic(rule, found);
    }
    for (const auto& [tuple, concls] : found) {
      std::vector<const std::vector<std::uint32_t>*> lists;
      std::vector<std::size_t> sizes;
      bool fresh = false;
      for (const auto& t : tuple) {
        const auto& ids = by_term_.at(t);
        lists.push_back(&ids);
        sizes.push_back(ids.size());
        fresh = fresh || nodes_[ids.back()].depth + 1 == depth;
      }
      if (!fresh) continue;
      for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
        std::uint32_t deepest = 0;
        std::vector<std::uint32_t> kids;
        for (std::size_t i = 0; i < idx.size(); ++i) {
          kids.push_back((*lists[i])[idx[i]]);
          deepest = std::max(deepest, nodes_[kids.back()].depth);
        }
        if (deepest + 1 != depth) return false;
        for (const auto& c : concls) push({c, r, kids, depth});
        return false;
      });
    }
  }

  const Calculus& k_;
  const DerivationEnumOptions& opts_;
  GroundEnumerator en_;
  std::vector<ForestNode> nodes_;
  std::map<Term, std::vector<std::uint32_t>> by_term_;
  std::map<SortId, std::vector<Term>> by_sort_;
};

}  // namespace

std::optional<DerivationError> validate_derivation(const Calculus& k, const Derivation& d) {
  Address at;
  return validate_node(k, d, at);
}

void for_each_derivation(const Calculus& k, const DerivationEnumOptions& opts,
                         const std::function<bool(const Derivation&)>& visit) {
  Forest f(k, opts);
  f.build();
  const auto& nodes = f.nodes();
  for (std::uint32_t i = 0; i < nodes.size(); ++i) {
    if (!f.root_ok(nodes[i])) continue;
    if (visit(f.materialize(i))) return;
  }
}

std::vector<Derivation> enumerate_derivations(const Calculus& k, const DerivationEnumOptions& opts) {
  std::vector<Derivation> out;
  for_each_derivation(k, opts, [&](const Derivation& d) {
    out.push_back(d);
    return false;
  });
  return out;
}

std::size_t count_derivations(const Calculus& k, const DerivationEnumOptions& opts) {
  Forest f(k, opts);
  f.build();
  std::size_t n = 0;
  for (const auto& node : f.nodes()) n += f.root_ok(node) ? 1 : 0;
  return n;
}

}  // namespace prooftree
