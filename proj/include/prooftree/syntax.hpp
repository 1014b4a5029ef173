// Textual pattern syntax.
//
//   f(x, y)        prefix application; a bare name for 0-ary connectives
//   x OP y         declared infix connectives, right-associative
//   [a, b, G*]     sequence; a lone item or G* at a sequence position is
//                  wrapped automatically, and at top level a comma list
//                  binds tighter than the loosest operator taking a sequence
//   42             literal on a sort that hosts literals

#ifndef PROOFTREE_SYNTAX_HPP_
#define PROOFTREE_SYNTAX_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "prooftree/signature.hpp"
#include "prooftree/substitution.hpp"
#include "prooftree/term.hpp"

namespace prooftree {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

// `line`/`column` locate the first character of `text` for error reports.
Term parse_pattern(const Signature& sig, const VariablePool& pool, std::string_view text,
                   std::optional<SortId> expected = std::nullopt, std::size_t line = 1, std::size_t column = 1);

std::string print(const Signature& sig, const Term& t);
std::string print(const Signature& sig, const Subst& s);

}  // namespace prooftree

#endif  // PROOFTREE_SYNTAX_HPP_
