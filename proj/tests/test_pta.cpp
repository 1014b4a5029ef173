#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "fixtures.hpp"
#include "prooftree/automata.hpp"
#include "prooftree/io.hpp"
#include "prooftree/pta.hpp"
#include "prooftree/term_enum.hpp"

using namespace prooftree;

namespace {

CalculusLoader data_loader() {
  return [](const std::string& c) { return fixtures::load_calculus(c); };
}

Term parse(const Calculus& k, const std::string& s) { return parse_pattern(k.signature(), k.pool(), s); }

const Finding* finding(const CheckReport& r, const std::string& subject) {
  for (const auto& f : r.details) {
    if (f.subject == subject) return &f;
  }
  return nullptr;
}

bool has_eps(const SchematicPta& p, const std::string& from, const std::string& to) {
  const Calculus& k = *p.calculus;
  const Term a = parse(k, from), b = parse(k, to);
  for (const auto& [x, y] : p.delta_eps) {
    if (alpha_equivalent(p.states[x], a) && alpha_equivalent(p.states[y], b)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("pta files parse and print stably") {
  for (const char* name : {"impl_pta.pta", "empty.pta", "axiom.pta", "impl_canonical.pta", "intro_k_canonical.pta"}) {
    auto f = parse_pta(read_file(fixtures::data_path(name)), data_loader());
    const std::string once = print_pta(f.pta, f.calculus_path);
    auto again = parse_pta(once, data_loader());
    CHECK(print_pta(again.pta, again.calculus_path) == once);
  }
  SchematicPta p = fixtures::load_pta("impl_pta.pta");
  CHECK(p.states.size() == 7);
  CHECK(p.delta.size() == 6);
  CHECK(p.delta_eps.size() == 9);
  Automaton a = as_automaton(p);
  CHECK(a.size() == 7);
  CHECK(std::all_of(a.final.begin(), a.final.end(), [](bool b) { return b; }));
  CHECK(a.find_state("w"));

  CHECK_THROWS_AS(parse_pta("calculus impl.calc\nstates\n  a = phi |- phi\ndelta\n  a -[Cut]-> a\n", data_loader()), ParseError);
  CHECK_THROWS_AS(parse_pta("calculus impl.calc\nstates\n  a = phi |- phi\ndelta\n  a -[Ax]-> a\n", data_loader()), PtaError);
  CHECK_THROWS_AS(parse_pta("calculus impl.calc\nstates\n  a = phi |- phi\ndelta\n  b -[Ax]-> a\n", data_loader()), ParseError);
}

TEST_CASE("uninhabited states are rejected") {
  auto k = parse_calculus("sorts\n  S\n  E\nconnectives\n  c : -> S\n  e : E -> S\nmetavars\n  x : E\nrules\n  axiom R: c\n");
  SchematicPta p{k, {"q"}, {parse(*k, "x")}, {}, {}};
  try {
    validate_pta(p);
    FAIL("expected an error");
  } catch (const PtaError& e) {
    CHECK(e.kind() == PtaErrorKind::uninhabited_state);
  }
}

TEST_CASE("trivial pta") {
  auto k = fixtures::load_calculus("impl.calc");
  SchematicPta p = trivial_pta(k, k->signature().sort_id("Seq"));
  CHECK(p.states.size() == 1);
  CHECK(p.delta.size() == k->rules().size());
  CHECK_NOTHROW(as_automaton(p));
  CHECK(check_consistent(p).verdict == Verdict::proven);
  CHECK(check_complete(p).verdict == Verdict::proven);
}

TEST_CASE("canonical pta of implicational logic") {
  auto k = fixtures::load_calculus("impl.calc");
  CanonicalPta c = canonical_pta(k);
  CHECK(c.pta.states.size() == 7);
  CHECK(c.pta.delta.size() == 6);
  CHECK(has_eps(c.pta, "[D*, phi] |- psi", "[D*] |- phi -> psi"));
  CHECK(c.approximate_rules == std::vector<std::string>{"->E"});
  CHECK(check_consistent(c.pta).verdict == Verdict::proven);
  CHECK(check_complete(c.pta).verdict == Verdict::proven);
  CHECK_FALSE(refute_completeness(c.pta, 3, 6));

  CheckReport total = check_total(c.pta);
  CHECK(total.verdict == Verdict::refuted);
  for (const auto& f : total.details) {
    INFO(f.subject);
    CHECK((f.subject.find("->E") != std::string::npos) == (f.verdict == Verdict::refuted));
  }

  DerivationEnumOptions o;
  o.max_depth = 3;
  o.max_size = 6;
  for_each_derivation(*k, o, [&](const Derivation& d) {
    CHECK(pta_accepts(c.pta, d));
    return false;
  });
}

TEST_CASE("canonical pta of the intro calculus") {
  auto k = fixtures::load_calculus("intro_k.calc");
  CanonicalPta c = canonical_pta(k);
  CHECK(c.approximate_rules.empty());
  CHECK(check_consistent(c.pta).verdict == Verdict::proven);
  CHECK(check_complete(c.pta).verdict == Verdict::proven);
  CHECK(check_total(c.pta).verdict == Verdict::proven);
}

TEST_CASE("canonical pta of a single axiom") {
  auto k = fixtures::load_calculus("axiom.calc");
  CanonicalPta c = canonical_pta(k);
  CHECK(c.pta.states.size() == 1);
  CHECK(c.pta.delta.size() == 1);
  CHECK(c.pta.delta_eps.empty());
}

TEST_CASE("hand-made implicational pta") {
  SchematicPta p = fixtures::load_pta("impl_pta.pta");
  CHECK(check_consistent(p).verdict == Verdict::proven);
  CHECK(check_complete(p).verdict == Verdict::proven);
  CheckReport total = check_total(p);
  const Finding* e = finding(total, "fl s -[->E]-> FL");
  REQUIRE(e);
  CHECK(e->verdict == Verdict::refuted);
  for (const auto& f : total.details) {
    if (&f != e) CHECK(f.verdict == Verdict::proven);
  }

  auto impl = fixtures::load_calculus("impl.calc");
  CHECK(pta_accepts(p, fixtures::load_derivation("impl_weak_exch.json", *impl)));
  auto kf = fixtures::load_calculus("intro_kf.calc");
  CHECK_FALSE(pta_accepts(p, fixtures::load_derivation("intro_f_root.json", *kf)));
  CHECK_FALSE(refute_completeness(p, 3, 6));
}

TEST_CASE("broken pta is refuted") {
  const std::string text = "calculus impl.calc\nstates\n  a = phi |- phi\ndelta\n  -[Ax]-> a\n  a -[->I]-> a\n";
  SchematicPta p = parse_pta(text, data_loader()).pta;
  CheckReport total = check_total(p);
  CHECK(total.verdict == Verdict::refuted);
  REQUIRE(total.witness);
  CHECK(total.witness->rule == "->I");
  CheckReport cons = check_consistent(p);
  CHECK(cons.verdict == Verdict::refuted);
  REQUIRE(cons.witness);
  REQUIRE(cons.witness->concl);
  CHECK_FALSE(instance_of(*cons.witness->concl, p.states[0]));
}

TEST_CASE("state coverage and intersection") {
  auto k = fixtures::load_calculus("impl.calc");
  CHECK(state_covers(parse(*k, "[G*] |- phi"), parse(*k, "[D*, phi] |- psi")));
  CHECK_FALSE(state_covers(parse(*k, "[D*, phi] |- psi"), parse(*k, "[G*] |- phi")));
  CHECK(state_meets(parse(*k, "[D*, phi] |- psi"), parse(*k, "[D*] |- phi -> psi")));
  CHECK_FALSE(state_meets(parse(*k, "[phi] |- phi"), parse(*k, "[] |- psi")));
}

TEST_CASE("intersection through the context state") {
  auto k = fixtures::load_calculus("impl.calc");
  const Term w = parse(*k, "[D*, phi] |- psi"), s = parse(*k, "[G*] |- phi"), fl = parse(*k, "[D*] |- phi -> psi");
  GroundEnumerator en(k->signature_ptr());
  std::size_t both = 0;
  for (const Term& t : en.up_to(k->signature().sort_id("Seq"), 5)) {
    const bool lhs = instance_of(t, w) && instance_of(t, fl);
    CHECK(lhs == (instance_of(t, w) && instance_of(t, s) && instance_of(t, fl)));
    both += lhs;
  }
  CHECK(both > 0);
}
