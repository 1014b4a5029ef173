// Signatures and helpers shared by the test binaries.

#ifndef PROOFTREE_TESTS_FIXTURES_HPP_
#define PROOFTREE_TESTS_FIXTURES_HPP_

#include <memory>
#include <string>
#include <vector>

#include "prooftree/io.hpp"
#include "prooftree/signature.hpp"
#include "prooftree/syntax.hpp"
#include "prooftree/term.hpp"

namespace fixtures {

using namespace prooftree;

inline std::shared_ptr<const Signature> impl_signature(const std::vector<std::string>& atoms = {"p", "q"}) {
  SignatureSpec spec;
  spec.sorts = {{"Form"}, {"Cont", SortKind::sequence, "Form"}, {"Seq"}};
  for (const auto& a : atoms) spec.connectives.push_back({a, {}, "Form"});
  spec.connectives.push_back({"->", {"Form", "Form"}, "Form", 20});
  spec.connectives.push_back({"|-", {"Cont", "Form"}, "Seq", 10});
  return std::make_shared<const Signature>(spec);
}

inline VariablePool impl_pool(const Signature& sig) {
  VariablePool pool;
  for (auto m : {"phi", "psi", "chi", "phi1", "phi2"}) pool.metavars[m] = sig.sort_id("Form");
  for (auto m : {"G", "D", "E"}) pool.metavars[m] = sig.sort_id("Cont");
  return pool;
}

inline std::shared_ptr<const Signature> intro_signature() {
  SignatureSpec spec;
  spec.sorts = {{"A"}, {"B"}, {"C"}};
  spec.connectives = {
      {"a", {}, "A"},         {"r", {"B"}, "A"},           {"f", {"B"}, "A"},
      {"l", {"A"}, "B"},      {"g", {"A"}, "B"},           {"|-AA", {"A", "A"}, "C", 10},
      {"|-AB", {"A", "B"}, "C", 10}, {"|-BB", {"B", "B"}, "C", 10},
  };
  return std::make_shared<const Signature>(spec);
}

inline VariablePool intro_pool(const Signature& sig) {
  VariablePool pool;
  for (auto m : {"u", "v"}) pool.metavars[m] = sig.sort_id("A");
  for (auto m : {"s", "t"}) pool.metavars[m] = sig.sort_id("B");
  pool.metavars["h"] = sig.sort_id("C");
  return pool;
}

// One sort S with f : S S -> S and a : -> S, plus a list sort for sequence
// patterns under bag : L -> S.
inline std::shared_ptr<const Signature> small_signature(bool with_lists) {
  SignatureSpec spec;
  spec.sorts = {{"S"}};
  spec.connectives = {{"a", {}, "S"}, {"f", {"S", "S"}, "S"}};
  if (with_lists) {
    spec.sorts.push_back({"L", SortKind::sequence, "S"});
    spec.connectives.push_back({"b", {}, "S"});
    spec.connectives.push_back({"bag", {"L"}, "S"});
  }
  return std::make_shared<const Signature>(spec);
}

inline VariablePool small_pool(const Signature& sig) {
  VariablePool pool;
  for (auto m : {"x", "y", "z"}) pool.metavars[m] = sig.sort_id("S");
  if (auto l = sig.find_sort("L")) {
    for (auto m : {"X", "Y", "Z"}) pool.metavars[m] = *l;
  }
  return pool;
}

struct Parsing {
  std::shared_ptr<const Signature> sig;
  VariablePool pool;

  Term operator()(const std::string& text) const { return parse_pattern(*sig, pool, text); }
  std::string show(const Term& t) const { return print(*sig, t); }
};

inline std::string data_path(const std::string& name) { return std::string(PROOFTREE_DATA_DIR) + "/" + name; }

inline std::string golden_path(const std::string& name) { return std::string(PROOFTREE_GOLDEN_DIR) + "/" + name; }

inline std::shared_ptr<const Calculus> load_calculus(const std::string& name) {
  return parse_calculus(read_file(data_path(name)));
}

inline SchematicPta load_pta(const std::string& name) {
  return parse_pta(read_file(data_path(name)), [](const std::string& c) { return load_calculus(c); }).pta;
}

inline Derivation load_derivation(const std::string& name, const Calculus& k) {
  return parse_derivation_json(read_file(data_path(name)), calculus_codec(k));
}

}  // namespace fixtures

#endif  // PROOFTREE_TESTS_FIXTURES_HPP_
