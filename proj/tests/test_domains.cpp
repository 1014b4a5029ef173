#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "prooftree/automata.hpp"
#include "prooftree/domains.hpp"

using namespace prooftree;

namespace {

unsigned long long value(const Term& t) { return std::stoull(t.name()); }

bool has_incr_over_odd(const Derivation& d) {
  if (d.rule == "Incr" && value(d.children[0].term) % 2 == 1) return true;
  for (const auto& c : d.children) {
    if (has_incr_over_odd(c)) return true;
  }
  return false;
}

std::vector<Derivation> small_derivations(std::size_t depth, std::size_t bound, std::size_t max_nodes) {
  DerivationEnumOptions o;
  o.max_depth = depth;
  o.max_size = bound;
  std::vector<Derivation> out;
  for_each_derivation(*arthm_domain().calculus, o, [&](const Derivation& d) {
    if (d.node_count() <= max_nodes) out.push_back(d);
    return false;
  });
  return out;
}

}  // namespace

TEST_CASE("rule oracles") {
  const Calculus& k = *arthm_domain().calculus;
  const Rule& add = k.rule("Add");
  const Rule& inc = k.rule("Incr");
  for (unsigned n = 0; n <= 20; ++n) {
    for (unsigned m = 0; m <= 20; ++m) {
      for (unsigned s = 0; s <= 41; ++s) {
        CHECK(rule_instance_check(add, std::vector<Term>{arthm_value(n), arthm_value(m)}, arthm_value(s)) == (s == n + m));
      }
    }
    for (unsigned s = 0; s <= 22; ++s) {
      CHECK(rule_instance_check(inc, std::vector<Term>{arthm_value(n)}, arthm_value(s)) == (s == n + 1));
    }
    CHECK(rule_instance_check(k.rule("0"), {}, arthm_value(n)) == (n == 0));
  }
}

TEST_CASE("state predicates") {
  const SemanticDomain& dom = arthm_domain();
  auto in = [&](const char* q, unsigned long long n) { return dom.states[*dom.find_state(q)].contains(arthm_value(n)); };
  for (unsigned long long n = 0; n <= 30; ++n) {
    CHECK_FALSE((in("even", n) && in("odd", n)));
    CHECK((in("even", n) || in("odd", n)));
    CHECK(in("zero", n) == (n == 0));
    CHECK(in("le1", n) == (n <= 1));
  }
  CHECK((in("odd", 1) && in("le1", 1)));
  for (const auto& s : dom.states) {
    for (const Term& t : s.enumerate(10)) {
      CHECK(s.contains(t));
      CHECK(value(t) <= 10);
    }
  }
  CHECK(dom.parse("0042") == arthm_value(42));
  CHECK_FALSE(dom.parse("x"));
  CHECK(dom.print(arthm_value(7)) == "7");
}

TEST_CASE("variant names") {
  for (auto v : {ArthmVariant::base, ArthmVariant::a2, ArthmVariant::a3, ArthmVariant::a4}) {
    CHECK(parse_arthm_variant(arthm_variant_name(v)) == v);
  }
  CHECK(arthm_variant_name(ArthmVariant::a2) == "arthm-a2");
  CHECK_FALSE(parse_arthm_variant("arthm-a5"));
  CHECK(arthm_automaton(ArthmVariant::a4).size() == 4);
}

TEST_CASE("bounded consistency") {
  CheckReport base = bounded_property_check(arthm_automaton(ArthmVariant::base), Property::consistent, 10);
  CHECK(base.verdict == Verdict::proven_up_to_bound);
  CHECK(base.bound == 10);
  CheckReport a2 = bounded_property_check(arthm_automaton(ArthmVariant::a2), Property::consistent, 10);
  CHECK(a2.verdict == Verdict::refuted);
  REQUIRE(a2.witness);
  REQUIRE(a2.witness->concl);
  CHECK(*a2.witness->concl == arthm_value(0));
  CHECK(a2.witness->rule == "0");
}

TEST_CASE("bounded completeness") {
  CheckReport a3 = bounded_property_check(arthm_automaton(ArthmVariant::a3), Property::complete, 5);
  CHECK(a3.verdict == Verdict::refuted);
  REQUIRE(a3.witness);
  CHECK(a3.witness->rule == "Incr");
  REQUIRE(a3.witness->hyps.size() == 1);
  CHECK(a3.witness->hyps[0] == arthm_value(1));
  Automaton a = arthm_automaton(ArthmVariant::a3);
  REQUIRE(a3.witness->states.size() == 1);
  CHECK(a.state_names[a3.witness->states[0]] == "odd");

  CheckReport a4 = bounded_property_check(arthm_automaton(ArthmVariant::a4), Property::complete, 3);
  CHECK(a4.verdict == Verdict::refuted);
  REQUIRE(a4.witness);
  CHECK((a4.witness->rule == "Incr" || a4.witness->rule == "Add"));
  Automaton b = arthm_automaton(ArthmVariant::a4);
  bool le1 = false;
  for (StateId q : a4.witness->states) le1 = le1 || b.state_names[q] == "le1";
  CHECK(le1);

  CHECK(bounded_property_check(arthm_automaton(ArthmVariant::base), Property::complete, 6).verdict == Verdict::proven_up_to_bound);
}

TEST_CASE("bounded totality") {
  CheckReport base = bounded_property_check(arthm_automaton(ArthmVariant::base), Property::total, 10);
  CHECK(base.verdict == Verdict::proven_up_to_bound);
  bool add_even = false;
  for (const auto& f : base.details) {
    if (f.subject == "even even -[Add]-> even") add_even = f.verdict == Verdict::proven_up_to_bound;
  }
  CHECK(add_even);
}

TEST_CASE("variant languages on small derivations") {
  auto ds = small_derivations(5, 10, 5);
  REQUIRE(ds.size() > 10);
  Automaton base = arthm_automaton(ArthmVariant::base), a2 = arthm_automaton(ArthmVariant::a2),
            a3 = arthm_automaton(ArthmVariant::a3), a4 = arthm_automaton(ArthmVariant::a4);
  for (const auto& d : ds) {
    CHECK(accepts(base, d));
    CHECK(accepts(a2, d));
    CHECK(accepts(a4, d));
    CHECK(accepts(a3, d) == !has_incr_over_odd(d));
  }
  auto cx = bounded_counterexample(a3, *arthm_domain().calculus, 3, 10);
  REQUIRE(cx);
  CHECK(has_incr_over_odd(*cx));
  CHECK_FALSE(bounded_counterexample(a4, *arthm_domain().calculus, 4, 10));
}
