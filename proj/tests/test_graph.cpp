#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "prooftree/domains.hpp"
#include "prooftree/graph.hpp"
#include "prooftree/io.hpp"
#include "prooftree/pta.hpp"

using namespace prooftree;

namespace {

Hyperwalk load_walk(const std::string& name) { return parse_hyperwalk_json(read_file(fixtures::data_path(name))); }

std::vector<Automaton> corpus_automata() {
  std::vector<Automaton> out;
  for (auto v : {ArthmVariant::base, ArthmVariant::a2, ArthmVariant::a3, ArthmVariant::a4}) out.push_back(arthm_automaton(v));
  out.push_back(as_automaton(fixtures::load_pta("impl_pta.pta")));
  out.push_back(as_automaton(fixtures::load_pta("empty.pta")));
  for (const char* c : {"impl.calc", "intro_k.calc", "intro_kf.calc", "axiom.calc"}) {
    out.push_back(as_automaton(canonical_pta(fixtures::load_calculus(c)).pta));
  }
  return out;
}

std::vector<Derivation> arthm_derivations(std::size_t max_nodes, std::size_t bound) {
  DerivationEnumOptions o;
  o.max_depth = max_nodes;
  o.max_size = bound;
  std::vector<Derivation> out;
  for_each_derivation(*arthm_domain().calculus, o, [&](const Derivation& d) {
    if (d.node_count() <= max_nodes) out.push_back(d);
    return false;
  });
  return out;
}

}  // namespace

TEST_CASE("underlying graph of the arithmetic automaton") {
  TypedHypergraph g = underlying_graph(arthm_automaton(ArthmVariant::base));
  CHECK(g.graph.vertices == std::vector<std::string>{"zero", "even", "odd"});
  CHECK(g.graph.labels == std::vector<std::string>{"0", "Incr", "Add"});
  CHECK(g.graph.edges.size() == 7);
  CHECK(g.graph.dashed == std::vector<EpsEdge>{{0, 1}});
  CHECK(g.sorting.size() == 3);
  CHECK(underlying_graph(as_automaton(fixtures::load_pta("empty.pta"))).graph.dashed.empty());
}

TEST_CASE("round trip through the represented automaton") {
  for (const Automaton& a : corpus_automata()) {
    TypedHypergraph g = underlying_graph(a);
    CHECK_NOTHROW(check_typing(g.graph, *a.alphabet, g.sorting));
    Automaton r = represented_automaton(g.graph, a.alphabet, g.sorting);
    CHECK(underlying_graph(r) == g);
  }
}

TEST_CASE("typing violations") {
  Automaton a = arthm_automaton(ArthmVariant::base);
  TypedHypergraph g = underlying_graph(a);
  Hypergraph bad = g.graph;
  bad.labels.pop_back();
  CHECK_THROWS_AS(check_typing(bad, *a.alphabet, g.sorting), GraphError);
  bad = g.graph;
  bad.edges.push_back(Transition{{0}, "Add", 1});
  CHECK_THROWS_AS(check_typing(bad, *a.alphabet, g.sorting), GraphError);
  bad = g.graph;
  bad.dashed.push_back({0, 9});
  CHECK_THROWS_AS(represented_automaton(bad, a.alphabet, g.sorting), GraphError);

  SchematicPta impl = fixtures::load_pta("impl_pta.pta");
  Automaton ia = as_automaton(impl);
  TypedHypergraph ig = underlying_graph(ia);
  SortingMap wrong = ig.sorting;
  wrong[0] = impl.calculus->signature().sort_id("Form");
  CHECK_THROWS_AS(check_typing(ig.graph, *ia.alphabet, wrong), GraphError);
}

TEST_CASE("represented automaton of syntax trees") {
  SignatureSpec spec;
  spec.sorts = {{"N"}};
  spec.connectives = {{"0", {}, "N"}, {"Incr", {"N"}, "N"}, {"Add", {"N", "N"}, "N"}};
  auto sig = std::make_shared<const Signature>(spec);
  Automaton arthm = arthm_automaton(ArthmVariant::base);
  TypedHypergraph g = underlying_graph(arthm);
  Automaton r = represented_automaton(g.graph, sig, SortingMap(3, 0));

  std::function<void(std::size_t, std::vector<Derivation>&)> trees = [&](std::size_t n, std::vector<Derivation>& out) {
    if (n == 1) out.push_back(Derivation{mk_term(*sig, "0", {}), "0", {}});
    if (n >= 2) {
      std::vector<Derivation> sub;
      trees(n - 1, sub);
      for (auto& c : sub) out.push_back(Derivation{mk_term(*sig, "Incr", {c.term}), "Incr", {c}});
    }
    for (std::size_t m = 1; m + 2 <= n; ++m) {
      std::vector<Derivation> left, right;
      trees(m, left);
      trees(n - 1 - m, right);
      for (auto& l : left) {
        for (auto& rr : right) out.push_back(Derivation{mk_term(*sig, "Add", {l.term, rr.term}), "Add", {l, rr}});
      }
    }
  };
  std::size_t seen = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<Derivation> ts;
    trees(n, ts);
    for (const auto& d : ts) {
      CHECK(accepts(r, d));
      Derivation wrong = d;
      wrong.term = mk_term(*sig, "0", {});
      if (d.rule != "0") CHECK_FALSE(accepts(r, wrong));
      ++seen;
    }
  }
  CHECK(seen == 1 + 1 + 2 + 4);

  Hypergraph single{{"c"}, {"0", "Incr", "Add"}, {Transition{{}, "0", 0}}, {}};
  Automaton one = represented_automaton(single, sig, SortingMap{0});
  CHECK(accepts(one, Derivation{mk_term(*sig, "0", {}), "0", {}}));
  CHECK_FALSE(accepts(one, Derivation{mk_term(*sig, "Incr", {mk_term(*sig, "0", {})}), "Incr",
                                      {Derivation{mk_term(*sig, "0", {}), "0", {}}}}));
}

TEST_CASE("hyperwalk validation") {
  Automaton a = arthm_automaton(ArthmVariant::base);
  const Hypergraph g = underlying_graph(a).graph;
  Hyperwalk walk = load_walk("arthm_walk.json");
  CHECK(walk.node_count() == 8);
  CHECK_FALSE(validate_hyperwalk(g, walk));
  auto broken = validate_hyperwalk(g, load_walk("arthm_walk_broken.json"));
  REQUIRE(broken);
  CHECK(format_address(broken->address) == "e");
  CHECK_FALSE(validate_hyperwalk(g, Hyperwalk{{{0, 0}}, {}}));
  CHECK(validate_hyperwalk(g, Hyperwalk{{{0, 1}}, {}}));
  CHECK(validate_hyperwalk(g, Hyperwalk{{{0, 0}, {0, 2}}, {}}));
  CHECK(validate_hyperwalk(g, Hyperwalk{{{1, 2}}, {}}));

  auto run = find_run(a, arthm_example_tree());
  REQUIRE(run);
  CHECK(hyperwalk_of(a, arthm_example_tree(), *run) == walk);
  CHECK(parse_hyperwalk_json(hyperwalk_json(walk)) == walk);
}

TEST_CASE("hyperwalk correction on the arithmetic automaton") {
  Automaton a = arthm_automaton(ArthmVariant::base);
  HyperwalkResult r = check_hyperwalk_correct(a, load_walk("arthm_walk.json"));
  CHECK(r.status == Correctness::correct);
  REQUIRE(r.derivation);
  REQUIRE(r.run);
  CHECK(*r.derivation == arthm_example_tree());
  CHECK_FALSE(validate_run(a, *r.derivation, *r.run));
  CHECK(r.run->at({}) == std::vector<StateId>{2});
  CHECK_THROWS_AS(check_hyperwalk_correct(a, load_walk("arthm_walk_broken.json")), GraphError);
}

TEST_CASE("hyperwalk correction on the implicational pta") {
  SchematicPta p = fixtures::load_pta("impl_pta.pta");
  Automaton a = as_automaton(p);
  HyperwalkResult ax = check_hyperwalk_correct(a, load_walk("impl_ax_walk.json"));
  CHECK(ax.status == Correctness::correct);
  REQUIRE(ax.derivation);
  CHECK(print(p.calculus->signature(), ax.derivation->term) == "[p] |- p");
  CHECK(ax.derivation->rule == "Ax");

  HyperwalkResult exch = check_hyperwalk_correct(a, load_walk("impl_exch_walk.json"));
  CHECK(exch.status == Correctness::incorrect);
  CHECK_FALSE(exch.reason.empty());

  HyperwalkOptions bounded;
  bounded.instance_size_bound = 5;
  CHECK(check_hyperwalk_correct(a, load_walk("impl_ax_walk.json"), bounded).status == Correctness::correct);
  CHECK(check_hyperwalk_correct(a, load_walk("impl_exch_walk.json"), bounded).status == Correctness::incorrect);

  HyperwalkOptions tiny;
  tiny.alternative_cap = 0;
  CHECK(check_hyperwalk_correct(a, load_walk("impl_ax_walk.json"), tiny).status == Correctness::resource_limit);
}

TEST_CASE("accepted derivations induce correct hyperwalks") {
  for (auto v : {ArthmVariant::base, ArthmVariant::a4}) {
    Automaton a = arthm_automaton(v);
    for (const auto& d : arthm_derivations(5, 10)) {
      auto run = find_run(a, d);
      REQUIRE(run);
      Hyperwalk h = hyperwalk_of(a, d, *run);
      CHECK_FALSE(validate_hyperwalk(underlying_graph(a).graph, h));
      CHECK(check_hyperwalk_correct(a, h).status == Correctness::correct);
    }
  }
  SchematicPta p = fixtures::load_pta("impl_pta.pta");
  Automaton a = as_automaton(p);
  DerivationEnumOptions o;
  o.max_depth = 2;
  o.max_size = 5;
  for_each_derivation(*p.calculus, o, [&](const Derivation& d) {
    auto run = find_run(a, d);
    REQUIRE(run);
    CHECK(check_hyperwalk_correct(a, hyperwalk_of(a, d, *run)).status == Correctness::correct);
    return false;
  });
}

TEST_CASE("hyperwalk correction agrees with brute-force labelling") {
  for (auto v : {ArthmVariant::base, ArthmVariant::a2, ArthmVariant::a3, ArthmVariant::a4}) {
    Automaton a = arthm_automaton(v);
    auto ds = arthm_derivations(4, 10);
    oracle::LabelingOracle brute(a, ds);
    for (const Hyperwalk& h : oracle::hyperwalks(underlying_graph(a).graph, 4)) {
      CHECK((check_hyperwalk_correct(a, h).status == Correctness::correct) == brute.correct(h));
    }
  }

  SchematicPta p = fixtures::load_pta("impl_pta.pta");
  Automaton a = as_automaton(p);
  DerivationEnumOptions o;
  o.max_depth = 3;
  o.max_size = 5;
  std::vector<Derivation> ds;
  for_each_derivation(*p.calculus, o, [&](const Derivation& d) {
    if (d.node_count() <= 3) ds.push_back(d);
    return false;
  });
  oracle::LabelingOracle brute(a, ds);
  HyperwalkOptions opts;
  opts.instance_size_bound = 5;
  std::size_t correct = 0, total = 0;
  for (const Hyperwalk& h : oracle::hyperwalks(underlying_graph(a).graph, 3)) {
    const bool got = check_hyperwalk_correct(a, h, opts).status == Correctness::correct;
    CHECK(got == brute.correct(h));
    correct += got;
    ++total;
  }
  CHECK(correct > 0);
  CHECK(correct < total);
}

TEST_CASE("dot goldens") {
  Automaton arthm = arthm_automaton(ArthmVariant::base);
  const Hypergraph g = underlying_graph(arthm).graph;
  CHECK(export_dot(g) == read_file(fixtures::golden_path("arthm.dot")));
  CHECK(export_dot(g, {DotStyle::bipartite, "PTG"}) == read_file(fixtures::golden_path("arthm_bipartite.dot")));
  CHECK(export_dot(pta_graph(fixtures::load_pta("impl_pta.pta"))) == read_file(fixtures::golden_path("impl_pta.dot")));
  CHECK(export_dot(Hypergraph{}) == read_file(fixtures::golden_path("empty.dot")));
  CHECK(export_dot(pta_graph(fixtures::load_pta("empty.pta"))) == read_file(fixtures::golden_path("empty.dot")));

  const std::string dot = export_dot(g);
  auto count = [&](const std::string& needle) {
    std::size_t n = 0;
    for (auto at = dot.find(needle); at != std::string::npos; at = dot.find(needle, at + 1)) ++n;
    return n;
  };
  CHECK(count("[shape=point]") == 4);
  CHECK(count("style=dashed") == 1);

  const std::string impl = export_dot(pta_graph(fixtures::load_pta("impl_pta.pta")));
  std::size_t dashed = 0, labelled = 0;
  for (auto at = impl.find("style=dashed"); at != std::string::npos; at = impl.find("style=dashed", at + 1)) ++dashed;
  for (auto at = impl.find("[label=\""); at != std::string::npos; at = impl.find("[label=\"", at + 1)) ++labelled;
  CHECK(dashed == 9);
  CHECK(labelled == 7 + 6);
}
