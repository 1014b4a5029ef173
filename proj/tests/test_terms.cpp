#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "prooftree/substitution.hpp"
#include "prooftree/syntax.hpp"
#include "prooftree/term_enum.hpp"

using namespace prooftree;

namespace {

fixtures::Parsing impl_parser(const std::vector<std::string>& atoms = {"p", "q"}) {
  auto sig = fixtures::impl_signature(atoms);
  return {sig, fixtures::impl_pool(*sig)};
}

fixtures::Parsing intro_parser() {
  auto sig = fixtures::intro_signature();
  return {sig, fixtures::intro_pool(*sig)};
}

}  // namespace

TEST_CASE("signature validation") {
  auto sig = fixtures::impl_signature();
  CHECK(validate_signature(sig->spec()).empty());

  SignatureSpec empty;
  auto issues = validate_signature(empty);
  REQUIRE_FALSE(issues.empty());
  CHECK(issues.front().kind == SignatureIssueKind::empty_sorts);

  SignatureSpec bad;
  bad.sorts = {{"Nat"}};
  bad.connectives = {{"zero", {}, "Nat"}, {"succ", {"Nat"}, "Num"}};
  issues = validate_signature(bad);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].kind == SignatureIssueKind::undeclared_sort);
  CHECK(issues[0].subject == "succ");
  CHECK_THROWS_AS(Signature{bad}, SignatureError);

  SignatureSpec dup;
  dup.sorts = {{"A"}, {"A"}, {"L", SortKind::sequence, "M"}};
  dup.connectives = {{"c", {}, "A"}, {"c", {}, "A"}, {"k", {"A"}, "L"}};
  std::set<SignatureIssueKind> kinds;
  for (const auto& i : validate_signature(dup)) kinds.insert(i.kind);
  CHECK(kinds.contains(SignatureIssueKind::duplicate_name));
  CHECK(kinds.contains(SignatureIssueKind::undeclared_sort));
  CHECK(kinds.contains(SignatureIssueKind::sequence_target));

  SignatureSpec nested;
  nested.sorts = {{"A"}, {"L", SortKind::sequence, "A"}, {"LL", SortKind::sequence, "L"}};
  kinds.clear();
  for (const auto& i : validate_signature(nested)) kinds.insert(i.kind);
  CHECK(kinds.contains(SignatureIssueKind::sequence_base_not_atomic));
}

TEST_CASE("mk_term checks arity and sorts") {
  auto intro = fixtures::intro_signature();
  Term a = mk_term(*intro, "a", {});
  Term t = mk_term(*intro, "r", {mk_term(*intro, "l", {a})});
  CHECK(t.sort() == intro->sort_id("A"));
  CHECK(print(*intro, t) == "r(l(a))");
  CHECK_THROWS_AS(mk_term(*intro, "r", {a}), TermError);

  SignatureSpec arith;
  arith.sorts = {{"N"}};
  arith.connectives = {{"Zero", {}, "N"}, {"Incr", {"N"}, "N"}, {"Add", {"N", "N"}, "N"}};
  Signature as(arith);
  try {
    mk_term(as, "Incr", {});
    FAIL("expected an arity error");
  } catch (const TermError& e) {
    CHECK(e.kind() == TermErrorKind::arity_mismatch);
  }

  auto impl = fixtures::impl_signature();
  Term p = mk_term(*impl, "p", {});
  Term ctx = mk_seq(*impl, impl->sort_id("Cont"), {p});
  Term seqt = mk_term(*impl, "|-", {ctx, p});
  CHECK(seqt.sort() == impl->sort_id("Seq"));
  CHECK_NOTHROW(check_term(*impl, seqt));
  CHECK(print(*impl, seqt) == "[p] |- p");
  CHECK_THROWS_AS(mk_term(*impl, "|-", {p, p}), TermError);
}

TEST_CASE("parser and printer") {
  auto P = impl_parser();
  Term s = P("G*, phi -> psi |- chi");
  CHECK(P.show(s) == "[G*, phi -> psi] |- chi");
  CHECK(P(P.show(s)) == s);
  CHECK(P.show(P("(p -> q) -> p |- p")) == "[(p -> q) -> p] |- p");
  CHECK(P.show(P("[] |- p -> q -> p")) == "[] |- p -> q -> p");
  CHECK(P("p |- p") == P("[p] |- p"));
  CHECK(P("phi$3 |- phi$3").is_ground() == false);
  CHECK_THROWS_AS(P("p |- G*"), ParseError);
  CHECK_THROWS_AS(P("[G*, G*] |- p"), ParseError);
  CHECK_THROWS_AS(P("p |-"), ParseError);
  try {
    P("p |- ?");
  } catch (const ParseError& e) {
    CHECK(e.column() == 6);
  }

  auto I = intro_parser();
  Term t = I("f(l(r(g(a)))) |-AB g(a)");
  CHECK(I.show(t) == "f(l(r(g(a)))) |-AB g(a)");
  CHECK(I.show(I("u |-AA r(t)")) == "u |-AA r(t)");
}

TEST_CASE("apply substitution") {
  auto I = intro_parser();
  Subst s{{"v", I("r(t)")}};
  CHECK(apply_subst(I("u |-AA v"), s) == I("u |-AA r(t)"));
  CHECK(apply_subst(I("u |-AA v"), {}) == I("u |-AA v"));

  auto P = impl_parser({"a", "b"});
  Term ctx = parse_pattern(*P.sig, P.pool, "[a -> b, a]", P.sig->sort_id("Cont"));
  Subst sigma{{"G", ctx}, {"phi", P("b")}};
  Term r = apply_subst(P("G* |- phi"), sigma);
  CHECK(r.is_ground());
  CHECK_NOTHROW(check_term(*P.sig, r));
  CHECK(P.show(r) == "[a -> b, a] |- b");
  CHECK(r.sort() == P("G* |- phi").sort());
}

TEST_CASE("ground matching") {
  auto I = intro_parser();
  auto ms = match_ground(I("u |-AA r(t)"), I("a |-AA r(l(a))"));
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].at("u") == I("a"));
  CHECK(ms[0].at("t") == I("l(a)"));

  auto P = impl_parser({"p", "q", "r", "s"});
  CHECK(match_ground(P("phi |- phi"), P("p |- q")).empty());
  CHECK(match_ground(P("phi |- phi"), P("p |- p")).size() == 1);

  Term pat = P("G*, phi1, phi2, D* |- psi");
  Term tgt = P("[p, q, r] |- s");
  auto got = match_ground(pat, tgt);
  REQUIRE(got.size() == 2);
  CHECK(P.show(got[0].at("G")) == "[]");
  CHECK(P.show(got[0].at("D")) == "[r]");
  CHECK(P.show(got[1].at("G")) == "[p]");
  CHECK(P.show(got[1].at("D")) == "[]");
  // Oracle: all 4 split positions by brute force.
  CHECK(oracle::brute_match(pat, tgt).size() == 2);

  CHECK_THROWS_AS(match_ground(P("phi"), P("p |- p")), TermError);
}

TEST_CASE("unification") {
  auto I = intro_parser();
  auto us = unify(I("u |-AA v"), I("u$1 |-AA r(t)"));
  REQUIRE(us.size() == 1);
  CHECK(apply_subst(I("u |-AA v"), us[0]) == apply_subst(I("u$1 |-AA r(t)"), us[0]));
  CHECK(apply_subst(I("v"), us[0]) == I("r(t)"));

  auto P = impl_parser({"a", "b", "c"});
  auto id = unify(P("a"), P("a"));
  REQUIRE(id.size() == 1);
  CHECK(id[0].empty());

  CHECK(unify(P("phi"), P("phi -> psi")).empty());  // occurs check
  CHECK(unify(P("a |- b"), P("phi |- phi")).empty());

  Term lhs = P("D*, phi |- psi");
  Term rhs = P("D$1* |- phi$1 -> psi$1");
  auto sols = unify(lhs, rhs);
  CHECK_FALSE(sols.empty());
  for (const auto& s : sols) CHECK(apply_subst(lhs, s) == apply_subst(rhs, s));
  // Common instance by bounded enumeration of ground sequents.
  GroundEnumerator en(P.sig);
  bool found = false;
  for (const auto& t : en.up_to(P.sig->sort_id("Seq"), 5)) {
    if (oracle::brute_instance(t, lhs) && oracle::brute_instance(t, rhs)) {
      found = true;
      break;
    }
  }
  CHECK(found);
  CHECK_FALSE(oracle::brute_instance(P("[a, b] |- c"), rhs));
  CHECK(oracle::brute_instance(P("[a, b] |- c -> b"), lhs));
}

TEST_CASE("subsumption") {
  auto P = impl_parser();
  Term general = P("G* |- phi");
  Term specific = P("D*, phi |- psi");
  CHECK(subsumes(general, specific));
  GroundEnumerator en(P.sig);
  auto inst = en.instances(specific, 7);
  REQUIRE(inst.size() >= 20);
  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto& t = inst[std::uniform_int_distribution<std::size_t>(0, inst.size() - 1)(rng)];
    CHECK(oracle::brute_instance(t, general));
  }
  CHECK_FALSE(subsumes(P("phi |- phi"), P("G* |- psi")));
  CHECK(subsumes(P("p"), P("p")));
}

TEST_CASE("inhabited sorts") {
  auto impl = fixtures::impl_signature();
  CHECK(inhabited(*impl, impl->sort_id("Form")));
  CHECK(inhabited(*impl, impl->sort_id("Seq")));

  SignatureSpec spec;
  spec.sorts = {{"s"}};
  spec.connectives = {{"f", {"s", "s"}, "s"}};
  Signature loop(spec);
  CHECK_FALSE(inhabited(loop, loop.sort_id("s")));

  auto intro = fixtures::intro_signature();
  CHECK(inhabited(*intro, intro->sort_id("C")));
}

TEST_CASE("ground enumeration counts") {
  auto impl = fixtures::impl_signature();
  GroundEnumerator en(impl);
  const SortId form = impl->sort_id("Form");
  CHECK(en.exact(form, 1).size() == 2);
  CHECK(en.exact(form, 3).size() == 4);
  CHECK(en.exact(form, 5).size() == 16);
  CHECK(en.exact(impl->sort_id("Cont"), 0).size() == 1);
  CHECK(en.exact(impl->sort_id("Cont"), 2).size() == 4);
}

TEST_CASE("matching agrees with brute force on random patterns") {
  for (bool lists : {false, true}) {
    auto sig = fixtures::small_signature(lists);
    oracle::PatternGen pats(*sig, 11);
    oracle::PatternGen grounds(*sig, 12, false);
    int agree = 0;
    for (int i = 0; i < 300; ++i) {
      Term p = pats.pattern(3);
      Term t = grounds.pattern(4);
      auto lib = match_all(p, t);
      auto ref = oracle::brute_match(p, t);
      std::set<Subst> a(lib.begin(), lib.end());
      std::set<Subst> b(ref.begin(), ref.end());
      CHECK(a == b);
      agree += a == b;
      // Also match against an instance of p, which must succeed.
      GroundEnumerator en(sig);
      Subst g;
      for (const auto& m : metavariables(p)) g[m.name()] = en.smallest(m.sort());
      CHECK_FALSE(match_all(p, apply_subst(p, g)).empty());
    }
    CHECK(agree == 300);
  }
}

TEST_CASE("unification agrees with instance intersection") {
  auto sig = fixtures::small_signature(true);
  GroundEnumerator en(sig);
  auto universe = en.up_to(sig->sort_id("S"), 5);
  oracle::PatternGen gen(*sig, 21);
  for (int i = 0; i < 120; ++i) {
    Term p = gen.pattern(3);
    Term q = gen.pattern(3, "'");
    auto sols = unify(p, q);
    for (const auto& s : sols) CHECK(apply_subst(p, s) == apply_subst(q, s));
    for (const auto& t : universe) {
      bool both = oracle::brute_instance(t, p) && oracle::brute_instance(t, q);
      bool via = false;
      for (const auto& s : sols) via = via || oracle::brute_instance(t, apply_subst(p, s));
      CHECK(both == via);
    }
  }
}
