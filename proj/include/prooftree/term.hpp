// Ground and schematic terms.
//
// A Term is an immutable tree shared by pointer. Sequence-sort positions
// always hold a `seq` node whose items are base-sort terms or sequence
// metavariables.

#ifndef PROOFTREE_TERM_HPP_
#define PROOFTREE_TERM_HPP_

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prooftree/signature.hpp"

namespace prooftree {

enum class TermKind : std::uint8_t { app, var, meta, seq, lit };

class Term {
 public:
  Term() = default;

  // Unchecked constructors; see mk_term() and check_term() for sort checks.
  static Term app(ConnectiveId fn, SortId sort, std::vector<Term> args);
  static Term var(std::string name, SortId sort);
  static Term meta(std::string name, SortId sort, bool sequence = false);
  static Term seq(SortId sort, std::vector<Term> items);
  static Term lit(SortId sort, std::string digits);

  explicit operator bool() const { return node_ != nullptr; }

  TermKind kind() const { return node_->kind; }
  SortId sort() const { return node_->sort; }
  ConnectiveId fn() const { return node_->fn; }
  const std::string& name() const { return node_->name; }  // var, meta, lit digits
  const std::vector<Term>& args() const { return node_->args; }  // app args or seq items
  bool seq_meta() const { return node_->kind == TermKind::meta && node_->seq_meta; }
  bool is_ground() const { return node_->ground; }
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  bool is(TermKind k) const { return node_ && node_->kind == k; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind = TermKind::app;
    SortId sort = 0;
    ConnectiveId fn = 0;
    bool seq_meta = false;
    bool ground = true;
    std::string name;
    std::vector<Term> args;
    std::size_t size = 0;
    std::size_t hash = 0;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Node n);

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

enum class TermErrorKind : std::uint8_t {
  unknown_connective,
  arity_mismatch,
  sort_mismatch,
  linearity_violation,
  not_ground,
};

class TermError : public std::runtime_error {
 public:
  TermError(TermErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  TermErrorKind kind() const { return kind_; }

 private:
  TermErrorKind kind_;
};

// Declared variables and metavariables. Generated names base$N resolve
// through their base.
struct VariablePool {
  std::map<std::string, SortId> variables;
  std::map<std::string, SortId> metavars;

  std::optional<SortId> meta_sort(const std::string& name) const;
  std::optional<SortId> variable_sort(const std::string& name) const;
};

// Names must be disjoint from each other and from connective names.
std::vector<std::string> validate_pool(const Signature& sig, const VariablePool& pool);

// Sort-checked application. Children at sequence positions must be seq nodes.
Term mk_term(const Signature& sig, std::string_view connective, std::vector<Term> children);

// Sequence node of the given sequence sort, checking item sorts.
Term mk_seq(const Signature& sig, SortId seq_sort, std::vector<Term> items);

// Throws TermError when `t` is not sort-correct or repeats a sequence
// metavariable.
void check_term(const Signature& sig, const Term& t);

// Metavariables of `t` in first-occurrence order (one entry per name).
std::vector<Term> metavariables(const Term& t);
void collect_metavariables(const Term& t, std::vector<Term>& out);
bool occurs(const std::string& meta_name, const Term& t);

// Number of sequence-metavariable occurrences, by name.
std::map<std::string, int> sequence_meta_counts(const Term& t);

// Base part of a generated metavariable name: "phi$3" -> "phi".
std::string meta_base(const std::string& name);

// Natural numbers stored on literal sorts.
std::string normalize_digits(std::string_view digits);

}  // namespace prooftree

#endif  // PROOFTREE_TERM_HPP_
