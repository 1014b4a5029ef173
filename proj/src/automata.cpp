#include "prooftree/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>

namespace prooftree {

std::optional<StateId> Automaton::find_state(std::string_view name) const {
  for (StateId q = 0; q < state_names.size(); ++q) {
    if (state_names[q] == name) return q;
  }
  return std::nullopt;
}

void Automaton::validate() const {
  const std::size_t n = state_names.size();
  if (!alphabet) throw AutomatonError("automaton has no alphabet");
  if (!control) throw AutomatonError("automaton has no control oracle");
  if (state_sorts.size() != n || final.size() != n) throw AutomatonError("state tables have inconsistent sizes");
  for (const auto& t : delta) {
    auto f = alphabet->find_connective(t.letter);
    if (!f) throw AutomatonError("unknown letter " + t.letter);
    const auto& c = alphabet->connective(*f);
    if (c.arity() != t.src.size()) throw AutomatonError("letter " + t.letter + " used with wrong arity");
    if (t.trg >= n) throw AutomatonError("transition target out of range");
    for (auto q : t.src) {
      if (q >= n) throw AutomatonError("transition source out of range");
    }
  }
  for (const auto& [p, q] : delta_eps) {
    if (p >= n || q >= n) throw AutomatonError("epsilon edge out of range");
  }
}

namespace {

void collect_addresses(const Derivation& d, Address& at, std::set<Address>& out) {
  out.insert(at);
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    at.push_back(static_cast<std::uint32_t>(i + 1));
    collect_addresses(d.children[i], at, out);
    at.pop_back();
  }
}

std::vector<Term> child_terms(const Derivation& d) {
  std::vector<Term> out;
  for (const auto& c : d.children) out.push_back(c.term);
  return out;
}

bool has_eps(const Automaton& a, StateId p, StateId q) {
  return std::find(a.delta_eps.begin(), a.delta_eps.end(), EpsEdge{p, q}) != a.delta_eps.end();
}

std::optional<RunError> check_node(const Automaton& a, const Derivation& d, const Run& run, Address& at) {
  const auto& word = run.at(at);
  std::vector<StateId> last;
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    at.push_back(static_cast<std::uint32_t>(i + 1));
    last.push_back(run.at(at).back());
    at.pop_back();
  }
  const Transition want{last, d.rule, word.front()};
  if (std::find(a.delta.begin(), a.delta.end(), want) == a.delta.end()) {
    return RunError{at, 1, "no transition into " + a.state_names[word.front()] + " labelled " + d.rule};
  }
  if (!a.control->nabla(child_terms(d), d.rule, d.term)) return RunError{at, 2, "control relation fails"};
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    if (!has_eps(a, word[i], word[i + 1])) {
      return RunError{at, 3, "no epsilon edge " + a.state_names[word[i]] + " -> " + a.state_names[word[i + 1]]};
    }
    if (!a.control->nabla_eps(d.term, word[i + 1])) {
      return RunError{at, 4, "instance not admitted by " + a.state_names[word[i + 1]]};
    }
  }
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    at.push_back(static_cast<std::uint32_t>(i + 1));
    if (auto e = check_node(a, d.children[i], run, at)) return e;
    at.pop_back();
  }
  return std::nullopt;
}

// Per-node search state: entry states and the epsilon closure with BFS
// parents (a state's parent is itself when it is an entry).
struct NodeSets {
  std::vector<bool> entry;
  std::vector<std::optional<StateId>> parent;
  std::vector<NodeSets> kids;
};

NodeSets explore(const Automaton& a, const Derivation& d) {
  NodeSets ns;
  const std::size_t n = a.size();
  ns.entry.assign(n, false);
  ns.parent.assign(n, std::nullopt);
  for (const auto& c : d.children) ns.kids.push_back(explore(a, c));
  for (const auto& k : ns.kids) {
    bool any = false;
    for (const auto& p : k.parent) any = any || p.has_value();
    if (!any) return ns;
  }
  if (!a.control->nabla(child_terms(d), d.rule, d.term)) return ns;
  for (const auto& t : a.delta) {
    if (t.letter != d.rule || t.src.size() != d.children.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; ok && i < t.src.size(); ++i) ok = ns.kids[i].parent[t.src[i]].has_value();
    if (ok) ns.entry[t.trg] = true;
  }
  std::deque<StateId> queue;
  for (StateId q = 0; q < n; ++q) {
    if (ns.entry[q]) {
      ns.parent[q] = q;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    StateId p = queue.front();
    queue.pop_front();
    for (const auto& [u, v] : a.delta_eps) {
      if (u != p || ns.parent[v]) continue;
      if (!a.control->nabla_eps(d.term, v)) continue;
      ns.parent[v] = p;
      queue.push_back(v);
    }
  }
  return ns;
}

void rebuild(const Automaton& a, const Derivation& d, const NodeSets& ns, StateId exit, Address& at, Run& run) {
  std::vector<StateId> word{exit};
  while (*ns.parent[word.back()] != word.back()) word.push_back(*ns.parent[word.back()]);
  std::reverse(word.begin(), word.end());
  run[at] = word;
  const StateId entry = word.front();
  for (const auto& t : a.delta) {
    if (t.letter != d.rule || t.trg != entry || t.src.size() != d.children.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; ok && i < t.src.size(); ++i) ok = ns.kids[i].parent[t.src[i]].has_value();
    if (!ok) continue;
    for (std::size_t i = 0; i < t.src.size(); ++i) {
      at.push_back(static_cast<std::uint32_t>(i + 1));
      rebuild(a, d.children[i], ns.kids[i], t.src[i], at, run);
      at.pop_back();
    }
    return;
  }
}

}  // namespace

std::optional<RunError> validate_run(const Automaton& a, const Derivation& d, const Run& run) {
  std::set<Address> addrs;
  Address at;
  collect_addresses(d, at, addrs);
  for (const auto& addr : addrs) {
    auto it = run.find(addr);
    if (it == run.end()) return RunError{addr, 0, "run has no word at " + format_address(addr)};
    if (it->second.empty()) return RunError{addr, 0, "empty state word"};
    for (auto q : it->second) {
      if (q >= a.size()) return RunError{addr, 0, "state out of range"};
    }
  }
  for (const auto& [addr, w] : run) {
    if (!addrs.contains(addr)) return RunError{addr, 0, "run labels a node outside the tree"};
  }
  return check_node(a, d, run, at);
}

std::optional<Run> find_run(const Automaton& a, const Derivation& d) {
  NodeSets ns = explore(a, d);
  for (StateId q = 0; q < a.size(); ++q) {
    if (!ns.parent[q] || !a.final[q]) continue;
    Run run;
    Address at;
    rebuild(a, d, ns, q, at, run);
    return run;
  }
  return std::nullopt;
}

bool accepts(const Automaton& a, const Derivation& d) { return find_run(a, d).has_value(); }

std::vector<std::vector<StateId>> epsilon_paths(const Automaton& a, const Term& t, StateId q0) {
  if (q0 >= a.size() || !a.control->nabla_eps(t, q0)) {
    throw std::invalid_argument("instance is not admitted by the start state");
  }
  std::vector<std::vector<StateId>> out;
  std::vector<StateId> path{q0};
  std::vector<bool> on(a.size(), false);
  on[q0] = true;
  std::function<void()> go = [&]() {
    out.push_back(path);
    for (const auto& [u, v] : a.delta_eps) {
      if (u != path.back() || on[v] || !a.control->nabla_eps(t, v)) continue;
      on[v] = true;
      path.push_back(v);
      go();
      path.pop_back();
      on[v] = false;
    }
  };
  go();
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

}  // namespace prooftree
