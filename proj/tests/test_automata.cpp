#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>

#include "fixtures.hpp"
#include "prooftree/automata.hpp"
#include "prooftree/domains.hpp"
#include "prooftree/io.hpp"
#include "prooftree/pta.hpp"

using namespace prooftree;

namespace {

constexpr StateId kZero = 0, kEven = 1, kOdd = 2;

Derivation leaf(unsigned long long n) { return Derivation{arthm_value(n), "0", {}}; }
Derivation incr(unsigned long long n, Derivation c) { return Derivation{arthm_value(n), "Incr", {std::move(c)}}; }

void addresses(const Derivation& d, Address& at, std::vector<Address>& out) {
  out.push_back(at);
  for (std::uint32_t i = 0; i < d.children.size(); ++i) {
    at.push_back(i + 1);
    addresses(d.children[i], at, out);
    at.pop_back();
  }
}

// Every state word of length <= max_len at every node; accepted iff some
// labelling validates and ends in a final state at the root.
bool brute_accepts(const Automaton& a, const Derivation& d, std::size_t max_len) {
  std::vector<std::vector<StateId>> words;
  std::vector<StateId> w;
  std::function<void()> grow = [&] {
    if (!w.empty()) words.push_back(w);
    if (w.size() == max_len) return;
    for (StateId q = 0; q < a.size(); ++q) {
      w.push_back(q);
      grow();
      w.pop_back();
    }
  };
  grow();
  std::vector<Address> nodes;
  Address at;
  addresses(d, at, nodes);
  Run run;
  std::function<bool(std::size_t)> pick = [&](std::size_t i) {
    if (i == nodes.size()) return !validate_run(a, d, run) && a.final[run.at({}).back()];
    for (const auto& word : words) {
      run[nodes[i]] = word;
      if (pick(i + 1)) return true;
    }
    return false;
  };
  return pick(0);
}

}  // namespace

TEST_CASE("run validation on the example tree") {
  Automaton a = arthm_automaton(ArthmVariant::base);
  Derivation d = arthm_example_tree();
  auto run = find_run(a, d);
  REQUIRE(run);
  CHECK_FALSE(validate_run(a, d, *run));
  CHECK(run->at({}).back() == kOdd);
  CHECK(run->at({1, 1}) == std::vector<StateId>{kZero, kEven});
  CHECK(run->at({2, 2}) == std::vector<StateId>{kZero, kEven});

  Run bad = *run;
  bad[{}] = {kEven};
  auto err = validate_run(a, d, bad);
  REQUIRE(err);
  CHECK(err->address.empty());
  CHECK((err->condition == 1 || err->condition == 2));

  Run missing = *run;
  missing.erase({2});
  auto shape = validate_run(a, d, missing);
  REQUIRE(shape);
  CHECK(shape->condition == 0);

  Run eps_bad = *run;
  eps_bad[{1}] = {kOdd, kOdd};
  auto e = validate_run(a, d, eps_bad);
  REQUIRE(e);
  CHECK(format_address(e->address) == "1");
  CHECK(e->condition == 3);

  Run single{{{}, {kZero}}};
  CHECK_FALSE(validate_run(a, leaf(0), single));
}

TEST_CASE("acceptance examples") {
  Automaton a = arthm_automaton(ArthmVariant::base);
  CHECK(accepts(a, arthm_example_tree()));
  CHECK(accepts(a, incr(2, incr(1, leaf(0)))));
  CHECK_FALSE(accepts(a, incr(5, Derivation{arthm_value(1), "0", {}})));
  CHECK_FALSE(accepts(arthm_automaton(ArthmVariant::a3), arthm_example_tree()));
  CHECK(accepts(arthm_automaton(ArthmVariant::a4), arthm_example_tree()));
  CHECK_FALSE(find_run(arthm_automaton(ArthmVariant::a3), arthm_example_tree()));
}

TEST_CASE("acceptance agrees with brute-force labelling") {
  DerivationEnumOptions o;
  o.max_depth = 3;
  o.max_size = 4;
  auto ds = enumerate_derivations(*arthm_domain().calculus, o);
  REQUIRE(ds.size() > 10);
  std::vector<Derivation> corpus;
  for (const auto& d : ds) {
    if (d.node_count() > 3) continue;
    corpus.push_back(d);
    Derivation m = d;
    m.term = arthm_value(std::stoull(d.term.name()) + 1);
    corpus.push_back(m);
  }
  for (auto v : {ArthmVariant::base, ArthmVariant::a2, ArthmVariant::a3, ArthmVariant::a4}) {
    Automaton a = arthm_automaton(v);
    for (const auto& d : corpus) {
      INFO(arthm_variant_name(v));
      CHECK(accepts(a, d) == brute_accepts(a, d, 2));
    }
  }
}

TEST_CASE("epsilon paths") {
  Automaton a = arthm_automaton(ArthmVariant::base);
  auto p0 = epsilon_paths(a, arthm_value(0), kZero);
  CHECK(p0 == std::vector<std::vector<StateId>>{{kZero}, {kZero, kEven}});
  CHECK(epsilon_paths(a, arthm_value(3), kOdd) == std::vector<std::vector<StateId>>{{kOdd}});
  CHECK_THROWS_AS(epsilon_paths(a, arthm_value(3), kEven), std::invalid_argument);

  SchematicPta p = fixtures::load_pta("impl_pta.pta");
  Automaton impl = as_automaton(p);
  const auto& k = *p.calculus;
  Term t = parse_pattern(k.signature(), k.pool(), "[p, q] |- p -> q");
  const StateId w = *impl.find_state("w"), s = *impl.find_state("s"), fl = *impl.find_state("fl");
  auto paths = epsilon_paths(impl, t, w);
  CHECK(std::find(paths.begin(), paths.end(), std::vector<StateId>{w, s, fl}) != paths.end());
  for (const auto& path : paths) {
    for (StateId q : path) CHECK(instance_of(t, p.states[q]));
    std::vector<StateId> sorted = path;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }
}

TEST_CASE("automaton validation") {
  Automaton a = arthm_automaton(ArthmVariant::base);
  CHECK_NOTHROW(a.validate());
  Automaton bad = a;
  bad.delta.push_back(Transition{{kEven}, "Add", kEven});
  CHECK_THROWS_AS(bad.validate(), AutomatonError);
  bad = a;
  bad.delta.push_back(Transition{{}, "Mul", kEven});
  CHECK_THROWS_AS(bad.validate(), AutomatonError);
  bad = a;
  bad.delta_eps.push_back({kEven, 7});
  CHECK_THROWS_AS(bad.validate(), AutomatonError);
  CHECK(a.find_state("odd") == kOdd);
  CHECK_FALSE(a.find_state("le1"));
}
