#include "prooftree/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "prooftree/substitution.hpp"
#include "prooftree/term_enum.hpp"

namespace prooftree {

namespace {

class RepresentedControl : public ControlOracle {
 public:
  explicit RepresentedControl(std::shared_ptr<const Signature> sig) : sig_(std::move(sig)) {}

  bool nabla(std::span<const Term> children, const std::string& letter, const Term& t) const override {
    auto f = sig_->find_connective(letter);
    if (!f || !t || !t.is(TermKind::app) || t.fn() != *f) return false;
    if (t.args().size() != children.size()) return false;
    return std::equal(children.begin(), children.end(), t.args().begin());
  }

  bool nabla_eps(const Term&, StateId) const override { return true; }

  std::optional<std::vector<Term>> conclusions(std::span<const Term> children, const std::string& letter) const override {
    auto f = sig_->find_connective(letter);
    if (!f || sig_->connective(*f).arity() != children.size()) return std::vector<Term>{};
    const auto& c = sig_->connective(*f);
    for (std::size_t i = 0; i < children.size(); ++i)
      if (!children[i] || children[i].sort() != c.src[i]) return std::vector<Term>{};
    return std::vector<Term>{Term::app(*f, c.trg, std::vector<Term>(children.begin(), children.end()))};
  }

 private:
  std::shared_ptr<const Signature> sig_;
};

Address child_address(const Address& a, std::size_t i) {
  Address c = a;
  c.push_back(static_cast<std::uint32_t>(i + 1));
  return c;
}

std::optional<HyperwalkError> validate_at(const Hypergraph& g, const Hyperwalk& h, const Address& at) {
  auto fail = [&](std::string msg) { return HyperwalkError{at, std::move(msg)}; };
  if (h.pairs.empty()) return fail("empty label word");
  const auto [e, v] = h.pairs.front();
  if (e >= g.edges.size()) return fail("edge " + std::to_string(e) + " does not exist");
  const Transition& edge = g.edges[e];
  if (edge.trg != v) return fail("edge " + std::to_string(e) + " does not end in vertex " + std::to_string(v));
  if (edge.src.size() != h.children.size())
    return fail("edge " + std::to_string(e) + " has " + std::to_string(edge.src.size()) + " sources but the node has " +
                std::to_string(h.children.size()) + " children");
  StateId prev = v;
  for (std::size_t j = 1; j < h.pairs.size(); ++j) {
    const auto [d, u] = h.pairs[j];
    if (d >= g.dashed.size()) return fail("dashed edge " + std::to_string(d) + " does not exist");
    if (g.dashed[d].first != prev || g.dashed[d].second != u)
      return fail("dashed edge " + std::to_string(d) + " does not lead from vertex " + std::to_string(prev) + " to " +
                  std::to_string(u));
    prev = u;
  }
  for (std::size_t i = 0; i < h.children.size(); ++i) {
    const Address ca = child_address(at, i);
    const Hyperwalk& c = h.children[i];
    if (c.pairs.empty()) return HyperwalkError{ca, "empty label word"};
    if (c.pairs.back().second != edge.src[i])
      return fail("child " + std::to_string(i + 1) + " ends in vertex " + std::to_string(c.pairs.back().second) +
                  " instead of " + std::to_string(edge.src[i]));
  }
  for (std::size_t i = 0; i < h.children.size(); ++i)
    if (auto err = validate_at(g, h.children[i], child_address(at, i))) return err;
  return std::nullopt;
}

void run_of(const Hyperwalk& h, const Address& at, Run& out) {
  auto& word = out[at];
  for (const auto& [e, v] : h.pairs) word.push_back(v);
  for (std::size_t i = 0; i < h.children.size(); ++i) run_of(h.children[i], child_address(at, i), out);
}

struct Outcome {
  Correctness status = Correctness::correct;
  Address blocking;
  std::string reason;
};

// Semantic mode: bounded sets of ground instances per node.
class ValueSearch {
 public:
  ValueSearch(const Automaton& a, const HyperwalkOptions& opts) : a_(a), opts_(opts) {}

  struct Alt {
    Term t;
    std::vector<std::size_t> kids;
  };
  struct Node {
    std::vector<Alt> alts;
    std::vector<Node> children;
  };

  Outcome solve(const Hyperwalk& h, const Address& at, Node& out) {
    out.children.resize(h.children.size());
    for (std::size_t i = 0; i < h.children.size(); ++i) {
      Outcome o = solve(h.children[i], child_address(at, i), out.children[i]);
      if (o.status != Correctness::correct) return o;
    }
    const Transition& edge = a_.delta[h.pairs.front().first];
    const std::size_t n = h.children.size();
    std::vector<std::size_t> pick(n, 0);
    std::vector<Term> kids(n);
    std::map<Term, std::vector<std::size_t>> found;
    std::size_t tuples = 0;
    while (true) {
      if (++tuples > kTupleCap) return {Correctness::resource_limit, at, "too many hypothesis tuples"};
      for (std::size_t i = 0; i < n; ++i) kids[i] = out.children[i].alts[pick[i]].t;
      auto cs = a_.control->conclusions(kids, edge.letter);
      if (!cs) return {Correctness::resource_limit, at, "control cannot enumerate conclusions of " + edge.letter};
      for (const Term& c : *cs) {
        if (bound_measure(c) > opts_.value_bound || found.count(c)) continue;
        if (!a_.control->nabla(kids, edge.letter, c)) continue;
        bool ok = true;
        for (std::size_t j = 1; j < h.pairs.size() && ok; ++j) ok = a_.control->nabla_eps(c, h.pairs[j].second);
        if (ok) found.emplace(c, pick);
      }
      std::size_t i = 0;
      while (i < n && ++pick[i] == out.children[i].alts.size()) pick[i++] = 0;
      if (i == n) break;
    }
    if (found.empty()) return {Correctness::incorrect, at, "no instance of " + edge.letter + " satisfies the label word"};
    if (found.size() > opts_.alternative_cap) return {Correctness::resource_limit, at, "alternative cap exceeded"};
    for (auto& [t, k] : found) out.alts.push_back({t, k});
    return {};
  }

  static Derivation rebuild(const Hyperwalk& h, const Node& n, std::size_t alt, const Automaton& a) {
    Derivation d{n.alts[alt].t, a.delta[h.pairs.front().first].letter, {}};
    for (std::size_t i = 0; i < h.children.size(); ++i)
      d.children.push_back(rebuild(h.children[i], n.children[i], n.alts[alt].kids[i], a));
    return d;
  }

 private:
  static constexpr std::size_t kTupleCap = 1'000'000;
  const Automaton& a_;
  const HyperwalkOptions& opts_;
};

// Schematic mode: each alternative is a pattern for the node instance
// together with the matching patterns of the children instances, in one
// metavariable namespace.
class PatternSearch {
 public:
  PatternSearch(const Automaton& a, const SchematicView& view, std::size_t cap)
      : a_(a), view_(view), cap_(cap), en_(view.calculus->signature_ptr()) {}

  struct Alt {
    Term pattern;
    std::vector<std::size_t> kids;
    std::vector<Term> kid_patterns;
  };
  struct Node {
    std::vector<Alt> alts;
    std::vector<Node> children;
  };

  Outcome solve(const Hyperwalk& h, const Address& at, Node& out) {
    out.children.resize(h.children.size());
    for (std::size_t i = 0; i < h.children.size(); ++i) {
      Outcome o = solve(h.children[i], child_address(at, i), out.children[i]);
      if (o.status != Correctness::correct) return o;
    }
    const Transition& edge = a_.delta[h.pairs.front().first];
    const SchematicRule* rule = view_.calculus->rule(edge.letter).schematic();
    const std::size_t n = h.children.size();
    std::vector<std::size_t> pick(n, 0);
    std::set<Term> seen;
    std::size_t tuples = 0;
    while (true) {
      if (++tuples > kTupleCap) return {Correctness::resource_limit, at, "too many hypothesis tuples"};
      FreshNames names;
      std::vector<Term> hyps;
      Term concl;
      {
        std::vector<Term> rt(rule->hyps);
        rt.push_back(rule->concl);
        rt = rename_apart(rt, names);
        concl = rt.back();
        rt.pop_back();
        hyps = std::move(rt);
      }
      std::vector<std::pair<Term, Term>> eqs;
      for (std::size_t i = 0; i < n; ++i)
        eqs.emplace_back(hyps[i], rename_apart(out.children[i].alts[pick[i]].pattern, names));
      std::vector<Term> tuple{concl};
      for (const auto& e : eqs) tuple.push_back(e.second);
      std::vector<Term> frontier;
      for (const Subst& s : unify_all(eqs, UnifyOptions{})) frontier.push_back(apply_subst(Term::app(0, 0, tuple), s));
      for (std::size_t j = 1; j < h.pairs.size(); ++j) {
        std::vector<Term> next;
        for (const Term& f : frontier) {
          FreshNames local;
          local.reserve(f);
          Term st = rename_apart(view_.states[h.pairs[j].second], local);
          for (const Subst& s : unify(f.args().front(), st, UnifyOptions{})) next.push_back(apply_subst(f, s));
        }
        frontier = std::move(next);
      }
      for (const Term& f : frontier) {
        if (!seen.insert(alpha_canonical(f)).second) continue;
        if (!pattern_inhabited(view_.calculus->signature(), f.args().front())) continue;
        out.alts.push_back({f.args().front(), pick, std::vector<Term>(f.args().begin() + 1, f.args().end())});
        if (out.alts.size() > cap_) return {Correctness::resource_limit, at, "alternative cap exceeded"};
      }
      std::size_t i = 0;
      while (i < n && ++pick[i] == out.children[i].alts.size()) pick[i++] = 0;
      if (i == n) break;
    }
    if (out.alts.empty())
      return {Correctness::incorrect, at, "no instance of " + edge.letter + " satisfies the label word"};
    return {};
  }

  // Smallest grounding of every metavariable in `ts`.
  Subst ground_all(std::span<const Term> ts) {
    Subst s;
    std::vector<Term> metas;
    for (const auto& t : ts) collect_metavariables(t, metas);
    for (const Term& m : metas)
      if (!s.count(m.name())) s[m.name()] = en_.smallest(m.sort());
    return s;
  }

  Derivation rebuild(const Hyperwalk& h, const Node& n, std::size_t alt, const Term& t) {
    const Alt& a = n.alts[alt];
    Derivation d{t, a_.delta[h.pairs.front().first].letter, {}};
    auto mu = match_one(a.pattern, t);
    if (!mu) throw std::logic_error("hyperwalk witness does not match its alternative");
    std::vector<Term> kids = apply_subst(a.kid_patterns, *mu);
    kids = apply_subst(kids, ground_all(kids));
    for (std::size_t i = 0; i < h.children.size(); ++i) d.children.push_back(rebuild(h.children[i], n.children[i], a.kids[i], kids[i]));
    return d;
  }

  Derivation witness(const Hyperwalk& h, const Node& root) {
    const Term p = root.alts.front().pattern;
    const Term t = apply_subst(p, ground_all(std::span<const Term>(&p, 1)));
    return rebuild(h, root, 0, t);
  }

  // Exhaustive search restricted to instances of size <= bound.
  std::optional<Derivation> bounded(const Hyperwalk& h, const Node& n, std::size_t alt, const Term& t, std::size_t bound) {
    const Alt& a = n.alts[alt];
    std::optional<Derivation> found;
    for_each_match(std::span<const Term>(&a.pattern, 1), std::span<const Term>(&t, 1), {}, [&](const Subst& mu) {
      std::vector<Term> kids = apply_subst(a.kid_patterns, mu);
      return en_.for_each_grounding(kids, bound, [&](const Subst& g) {
        Derivation d{t, a_.delta[h.pairs.front().first].letter, {}};
        for (std::size_t i = 0; i < h.children.size(); ++i) {
          auto c = bounded(h.children[i], n.children[i], a.kids[i], apply_subst(kids[i], g), bound);
          if (!c) return false;
          d.children.push_back(std::move(*c));
        }
        found = std::move(d);
        return true;
      });
    });
    return found;
  }

  std::optional<Derivation> bounded_witness(const Hyperwalk& h, const Node& root, std::size_t bound) {
    for (std::size_t k = 0; k < root.alts.size(); ++k)
      for (const Term& t : en_.instances(root.alts[k].pattern, bound))
        if (auto d = bounded(h, root, k, t, bound)) return d;
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kTupleCap = 1'000'000;
  const Automaton& a_;
  SchematicView view_;
  std::size_t cap_;
  GroundEnumerator en_;
};

bool all_schematic(const Automaton& a, const SchematicView& view, const Hyperwalk& h) {
  const Rule* r = view.calculus->find_rule(a.delta[h.pairs.front().first].letter);
  if (!r || !r->schematic()) return false;
  return std::all_of(h.children.begin(), h.children.end(), [&](const Hyperwalk& c) { return all_schematic(a, view, c); });
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::size_t Hyperwalk::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

TypedHypergraph underlying_graph(const Automaton& a) {
  TypedHypergraph out;
  out.graph.vertices = a.state_names;
  for (const auto& c : a.alphabet->connectives()) out.graph.labels.push_back(c.name);
  out.graph.edges = a.delta;
  out.graph.dashed = a.delta_eps;
  out.sorting = a.state_sorts;
  return out;
}

void check_typing(const Hypergraph& g, const Signature& sig, const SortingMap& h) {
  auto fail = [](const std::string& m) { throw GraphError("typing violation: " + m); };
  if (h.size() != g.vertices.size()) fail("sorting map covers " + std::to_string(h.size()) + " of " + std::to_string(g.vertices.size()) + " vertices");
  for (std::size_t v = 0; v < h.size(); ++v)
    if (h[v] >= sig.sorts().size()) fail("vertex " + std::to_string(v) + " has no sort");
  std::vector<std::string> names;
  for (const auto& c : sig.connectives()) names.push_back(c.name);
  if (names != g.labels) fail("labels differ from the connectives of the signature");
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Transition& e = g.edges[i];
    const std::string at = "edge " + std::to_string(i) + " (" + e.letter + ")";
    auto f = sig.find_connective(e.letter);
    if (!f) fail(at + ": unknown label");
    const Connective& c = sig.connective(*f);
    if (e.trg >= h.size() || std::any_of(e.src.begin(), e.src.end(), [&](StateId v) { return v >= h.size(); }))
      fail(at + ": undeclared vertex");
    if (c.arity() != e.src.size()) fail(at + ": arity mismatch");
    if (h[e.trg] != c.trg) fail(at + ": target sort mismatch");
    for (std::size_t k = 0; k < e.src.size(); ++k)
      if (h[e.src[k]] != c.src[k]) fail(at + ": source " + std::to_string(k + 1) + " sort mismatch");
  }
  for (std::size_t i = 0; i < g.dashed.size(); ++i) {
    const auto [u, v] = g.dashed[i];
    if (u >= h.size() || v >= h.size()) fail("dashed edge " + std::to_string(i) + ": undeclared vertex");
    if (h[u] != h[v]) fail("dashed edge " + std::to_string(i) + ": sort mismatch");
  }
}

Automaton represented_automaton(const Hypergraph& g, std::shared_ptr<const Signature> sig, const SortingMap& h) {
  check_typing(g, *sig, h);
  Automaton a;
  a.alphabet = sig;
  a.state_names = g.vertices;
  a.state_sorts = h;
  a.delta = g.edges;
  a.delta_eps = g.dashed;
  a.final.assign(g.vertices.size(), true);
  a.control = std::make_shared<RepresentedControl>(std::move(sig));
  a.validate();
  return a;
}

std::optional<HyperwalkError> validate_hyperwalk(const Hypergraph& g, const Hyperwalk& h) { return validate_at(g, h, {}); }

Hyperwalk hyperwalk_of(const Automaton& a, const Derivation& d, const Run& run) {
  std::function<Hyperwalk(const Derivation&, const Address&)> go = [&](const Derivation& n, const Address& at) {
    auto it = run.find(at);
    if (it == run.end() || it->second.empty()) throw GraphError("run has no word at " + format_address(at));
    const auto& word = it->second;
    Hyperwalk h;
    std::vector<StateId> src;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      h.children.push_back(go(n.children[i], child_address(at, i)));
      src.push_back(h.children.back().pairs.back().second);
    }
    const Transition want{src, n.rule, word.front()};
    auto e = std::find(a.delta.begin(), a.delta.end(), want);
    if (e == a.delta.end()) throw GraphError("no transition for the node at " + format_address(at));
    h.pairs.emplace_back(static_cast<std::size_t>(e - a.delta.begin()), word.front());
    for (std::size_t j = 1; j < word.size(); ++j) {
      auto de = std::find(a.delta_eps.begin(), a.delta_eps.end(), EpsEdge{word[j - 1], word[j]});
      if (de == a.delta_eps.end()) throw GraphError("no epsilon edge for the node at " + format_address(at));
      h.pairs.emplace_back(static_cast<std::size_t>(de - a.delta_eps.begin()), word[j]);
    }
    return h;
  };
  return go(d, {});
}

HyperwalkResult check_hyperwalk_correct(const Automaton& a, const Hyperwalk& h, const HyperwalkOptions& opts) {
  if (auto err = validate_hyperwalk(underlying_graph(a).graph, h))
    throw GraphError("graph mismatch at " + format_address(err->address) + ": " + err->message);
  HyperwalkResult res;
  Run run;
  run_of(h, {}, run);
  auto view = a.control->schematic();
  Outcome o;
  if (view && all_schematic(a, *view, h)) {
    PatternSearch ps(a, *view, opts.alternative_cap);
    PatternSearch::Node root;
    try {
      o = ps.solve(h, {}, root);
    } catch (const ResourceLimit& e) {
      o = {Correctness::resource_limit, {}, e.what()};
    }
    if (o.status == Correctness::correct) {
      if (opts.instance_size_bound) {
        auto d = ps.bounded_witness(h, root, *opts.instance_size_bound);
        if (!d) {
          res.status = Correctness::incorrect;
          res.reason = "no witness with instances of size <= " + std::to_string(*opts.instance_size_bound);
          return res;
        }
        res.derivation = std::move(d);
      } else {
        res.derivation = ps.witness(h, root);
      }
    }
  } else {
    ValueSearch vs(a, opts);
    ValueSearch::Node root;
    o = vs.solve(h, {}, root);
    if (o.status == Correctness::correct) res.derivation = ValueSearch::rebuild(h, root, 0, a);
  }
  res.status = o.status;
  res.blocking = o.blocking;
  res.reason = o.reason;
  if (o.status != Correctness::correct) return res;
  if (auto bad = validate_run(a, *res.derivation, run))
    throw std::logic_error("hyperwalk witness fails run condition at " + format_address(bad->address) + ": " + bad->message);
  res.run = std::move(run);
  return res;
}

std::string export_dot(const Hypergraph& g, const DotOptions& opts) {
  std::ostringstream out;
  out << "digraph \"" << escape(opts.name) << "\" {\n";
  out << "  node [shape=box];\n";
  for (std::size_t v = 0; v < g.vertices.size(); ++v) out << "  v" << v << " [label=\"" << escape(g.vertices[v]) << "\"];\n";
  std::vector<std::size_t> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return g.edges[x] < g.edges[y]; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Transition& e = g.edges[order[k]];
    const std::string label = escape(e.letter);
    if (opts.style == DotStyle::bipartite) {
      out << "  r" << k << " [shape=ellipse, label=\"" << label << "\"];\n";
      for (std::size_t i = 0; i < e.src.size(); ++i) {
        out << "  v" << e.src[i] << " -> r" << k;
        if (e.src.size() >= 2) out << " [label=\"" << i + 1 << "\"]";
        out << ";\n";
      }
      out << "  r" << k << " -> v" << e.trg << ";\n";
    } else if (e.src.empty()) {
      out << "  j" << k << " [shape=none, label=\"\"];\n";
      out << "  j" << k << " -> v" << e.trg << " [label=\"" << label << "\"];\n";
    } else if (e.src.size() == 1) {
      out << "  v" << e.src[0] << " -> v" << e.trg << " [label=\"" << label << "\"];\n";
    } else {
      out << "  j" << k << " [shape=point];\n";
      for (std::size_t i = 0; i < e.src.size(); ++i)
        out << "  v" << e.src[i] << " -> j" << k << " [arrowhead=none, taillabel=\"" << i + 1 << "\"];\n";
      out << "  j" << k << " -> v" << e.trg << " [label=\"" << label << "\"];\n";
    }
  }
  std::vector<EpsEdge> dashed = g.dashed;
  std::sort(dashed.begin(), dashed.end());
  for (const auto& [u, v] : dashed) out << "  v" << u << " -> v" << v << " [style=dashed];\n";
  out << "}\n";
  return out.str();
}

}  // namespace prooftree
