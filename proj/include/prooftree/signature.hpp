// Multi-sorted signatures.
//
// A signature is declared as a SignatureSpec (plain names, possibly
// ill-formed) and compiled into a Signature once validate_signature()
// reports no issue.

#ifndef PROOFTREE_SIGNATURE_HPP_
#define PROOFTREE_SIGNATURE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace prooftree {

using SortId = std::uint32_t;
using ConnectiveId = std::uint32_t;

enum class SortKind : std::uint8_t { atomic, sequence };

struct SortDecl {
  std::string name;
  SortKind kind = SortKind::atomic;
  std::string base;       // sequence sorts only
  bool literals = false;  // sort additionally hosts natural-number literals
};

struct ConnectiveDecl {
  std::string name;
  std::vector<std::string> src;
  std::string trg;
  int precedence = 0;  // > 0: binary right-associative infix operator
};

struct SignatureSpec {
  std::vector<SortDecl> sorts;
  std::vector<ConnectiveDecl> connectives;
};

enum class SignatureIssueKind : std::uint8_t {
  empty_sorts,
  duplicate_name,
  undeclared_sort,
  sequence_base_not_atomic,
  sequence_target,
  bad_infix,
};

struct SignatureIssue {
  SignatureIssueKind kind;
  std::string subject;  // offending sort or connective
  std::string message;
};

std::vector<SignatureIssue> validate_signature(const SignatureSpec& spec);

class SignatureError : public std::runtime_error {
 public:
  explicit SignatureError(std::vector<SignatureIssue> issues);
  const std::vector<SignatureIssue>& issues() const { return issues_; }

 private:
  std::vector<SignatureIssue> issues_;
};

struct Sort {
  std::string name;
  SortKind kind = SortKind::atomic;
  SortId base = 0;
  bool literals = false;
};

struct Connective {
  std::string name;
  std::vector<SortId> src;
  SortId trg = 0;
  int precedence = 0;

  std::size_t arity() const { return src.size(); }
  bool infix() const { return precedence > 0; }
};

// A validated signature. Sort and connective ids are dense indices in
// declaration order.
class Signature {
 public:
  // Throws SignatureError when validate_signature(spec) is non-empty.
  explicit Signature(const SignatureSpec& spec);

  std::span<const Sort> sorts() const { return sorts_; }
  std::span<const Connective> connectives() const { return connectives_; }
  const Sort& sort(SortId id) const { return sorts_.at(id); }
  const Connective& connective(ConnectiveId id) const { return connectives_.at(id); }

  std::optional<SortId> find_sort(std::string_view name) const;
  std::optional<ConnectiveId> find_connective(std::string_view name) const;

  SortId sort_id(std::string_view name) const;  // throws std::out_of_range
  ConnectiveId connective_id(std::string_view name) const;

  bool is_sequence(SortId s) const { return sorts_.at(s).kind == SortKind::sequence; }

  // Connectives of each sort, in declaration order.
  std::span<const ConnectiveId> connectives_of(SortId s) const { return by_target_.at(s); }

  const SignatureSpec& spec() const { return spec_; }

 private:
  SignatureSpec spec_;
  std::vector<Sort> sorts_;
  std::vector<Connective> connectives_;
  std::unordered_map<std::string, SortId> sort_index_;
  std::unordered_map<std::string, ConnectiveId> connective_index_;
  std::vector<std::vector<ConnectiveId>> by_target_;
};

}  // namespace prooftree

#endif  // PROOFTREE_SIGNATURE_HPP_
