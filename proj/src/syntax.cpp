#include "prooftree/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <vector>

namespace prooftree {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c == '\'' || c >= 0x80; }

// Binding power of the comma at top level, or -1 when no infix connective
// takes a sequence argument.
int comma_power(const Signature& sig) {
  int best = -1;
  for (const auto& c : sig.connectives()) {
    if (!c.infix()) continue;
    bool seq = std::any_of(c.src.begin(), c.src.end(), [&](SortId s) { return sig.is_sequence(s); });
    if (seq && (best < 0 || c.precedence < best)) best = c.precedence;
  }
  return best < 0 ? -1 : 2 * best + 1;
}

int item_power(const Signature& sig) { return std::max(comma_power(sig) + 1, 0); }

enum class Tok { ident, number, op, lparen, rparen, lbrack, rbrack, comma, star, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t col;
};

struct Ast {
  enum class K { ident, number, call, infix, list };
  Ast(K k, std::string n = {}) : kind(k), name(std::move(n)) {}
  K kind;
  std::string name;
  bool star = false;
  bool bracketed = false;
  bool called = false;
  std::vector<Ast> kids;
  std::size_t col = 0;
};

class Parser {
 public:
  Parser(const Signature& sig, const VariablePool& pool, std::string_view text, std::size_t line, std::size_t col)
      : sig_(sig), pool_(pool), line_(line), col0_(col), comma_bp_(comma_power(sig)) {
    for (const auto& c : sig.connectives()) {
      if (c.infix()) ops_.push_back(c.name);
    }
    std::sort(ops_.begin(), ops_.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    lex(text);
  }

  Term parse(std::optional<SortId> expected) {
    if (peek().kind == Tok::end) fail(peek().col, "empty pattern");
    Ast ast = expr(0);
    if (peek().kind != Tok::end) fail(peek().col, "unexpected '" + peek().text + "'");
    return type(ast, expected);
  }

 private:
  [[noreturn]] void fail(std::size_t col, const std::string& msg) const { throw ParseError(line_, col0_ + col, msg); }

  void lex(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
      auto c = static_cast<unsigned char>(s[i]);
      if (std::isspace(c)) {
        ++i;
        continue;
      }
      if (std::isdigit(c)) {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        toks_.push_back({Tok::number, std::string(s.substr(i, j - i)), i});
        i = j;
        continue;
      }
      if (ident_start(c)) {
        std::size_t j = i;
        while (j < s.size() && ident_char(static_cast<unsigned char>(s[j]))) ++j;
        std::string word(s.substr(i, j - i));
        bool is_op = std::find(ops_.begin(), ops_.end(), word) != ops_.end();
        toks_.push_back({is_op ? Tok::op : Tok::ident, word, i});
        i = j;
        continue;
      }
      bool matched = false;
      for (const auto& op : ops_) {
        if (!op.empty() && !ident_start(static_cast<unsigned char>(op[0])) && s.substr(i, op.size()) == op) {
          toks_.push_back({Tok::op, op, i});
          i += op.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
      Tok k;
      switch (c) {
        case '(': k = Tok::lparen; break;
        case ')': k = Tok::rparen; break;
        case '[': k = Tok::lbrack; break;
        case ']': k = Tok::rbrack; break;
        case ',': k = Tok::comma; break;
        case '*': k = Tok::star; break;
        default: fail(i, std::string("unexpected character '") + s[i] + "'");
      }
      toks_.push_back({k, std::string(1, s[i]), i});
      ++i;
    }
    toks_.push_back({Tok::end, "end of input", s.size()});
  }

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) fail(peek().col, std::string("expected ") + what);
    ++pos_;
  }

  int op_power(const std::string& name) const { return 2 * sig_.connective(sig_.connective_id(name)).precedence; }

  Ast expr(int min_bp) {
    Ast lhs = primary();
    for (;;) {
      const Token& t = peek();
      if (t.kind == Tok::op) {
        int bp = op_power(t.text);
        if (bp < min_bp) break;
        Token op = next();
        Ast rhs = expr(bp);
        Ast node{Ast::K::infix, op.text};
        node.col = op.col;
        node.kids.push_back(std::move(lhs));
        node.kids.push_back(std::move(rhs));
        lhs = std::move(node);
      } else if (t.kind == Tok::comma && comma_bp_ >= 0 && comma_bp_ >= min_bp) {
        Ast list{Ast::K::list};
        list.col = lhs.col;
        list.kids.push_back(std::move(lhs));
        while (peek().kind == Tok::comma) {
          next();
          list.kids.push_back(expr(comma_bp_ + 1));
        }
        lhs = std::move(list);
      } else {
        break;
      }
    }
    return lhs;
  }

  std::vector<Ast> items(Tok close, const char* what) {
    std::vector<Ast> out;
    if (peek().kind == close) {
      next();
      return out;
    }
    const int bp = std::max(comma_bp_ + 1, 0);
    out.push_back(expr(bp));
    while (peek().kind == Tok::comma) {
      next();
      out.push_back(expr(bp));
    }
    expect(close, what);
    return out;
  }

  Ast primary() {
    Token t = next();
    switch (t.kind) {
      case Tok::ident: {
        Ast a{Ast::K::ident, t.text};
        a.col = t.col;
        if (peek().kind == Tok::lparen) {
          next();
          a.kind = Ast::K::call;
          a.called = true;
          a.kids = items(Tok::rparen, "')'");
        } else if (peek().kind == Tok::star) {
          next();
          a.star = true;
        }
        return a;
      }
      case Tok::number: {
        Ast a{Ast::K::number, t.text};
        a.col = t.col;
        return a;
      }
      case Tok::lparen: {
        Ast inner = expr(0);
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::lbrack: {
        Ast a{Ast::K::list};
        a.col = t.col;
        a.bracketed = true;
        a.kids = items(Tok::rbrack, "']'");
        return a;
      }
      default:
        fail(t.col, "unexpected '" + t.text + "'");
    }
  }

  std::string sort_name(SortId s) const { return sig_.sort(s).name; }

  void check_sort(const Ast& a, SortId got, std::optional<SortId> expected) const {
    if (expected && got != *expected)
      fail(a.col, "'" + a.name + "' has sort " + sort_name(got) + ", expected " + sort_name(*expected));
  }

  Term seq_item(const Ast& a, SortId seq_sort) {
    if (a.kind == Ast::K::ident && !a.called) {
      auto ms = pool_.meta_sort(a.name);
      if (ms && *ms == seq_sort && !sig_.find_connective(a.name)) return Term::meta(a.name, seq_sort, true);
      if (a.star) fail(a.col, "'" + a.name + "' is not a sequence metavariable of sort " + sort_name(seq_sort));
    }
    if (a.kind == Ast::K::list) fail(a.col, "nested sequence");
    return type(a, sig_.sort(seq_sort).base);
  }

  Term type(const Ast& a, std::optional<SortId> expected) {
    if (expected && sig_.is_sequence(*expected)) {
      std::vector<Term> xs;
      if (a.kind == Ast::K::list) {
        for (const auto& k : a.kids) xs.push_back(seq_item(k, *expected));
      } else {
        xs.push_back(seq_item(a, *expected));
      }
      std::set<std::string> seen;
      for (const auto& x : xs) {
        if (x.seq_meta() && !seen.insert(x.name()).second)
          fail(a.col, "sequence metavariable '" + x.name() + "' repeated");
      }
      return Term::seq(*expected, std::move(xs));
    }
    switch (a.kind) {
      case Ast::K::list:
        fail(a.col, a.bracketed ? "sequence where " + (expected ? sort_name(*expected) : std::string("a term")) +
                                      " is expected"
                                : "unexpected ','");
      case Ast::K::number: {
        std::optional<SortId> s = expected;
        if (!s) {
          for (SortId i = 0; i < sig_.sorts().size(); ++i) {
            if (sig_.sort(i).literals) {
              if (s) fail(a.col, "ambiguous literal sort");
              s = i;
            }
          }
        }
        if (!s || !sig_.sort(*s).literals) fail(a.col, "literal not allowed here");
        return Term::lit(*s, a.name);
      }
      case Ast::K::ident: {
        if (a.star) fail(a.col, "sequence metavariable '" + a.name + "' outside a sequence");
        if (auto cid = sig_.find_connective(a.name)) {
          const auto& c = sig_.connective(*cid);
          if (c.arity() != 0)
            fail(a.col, "connective '" + a.name + "' expects " + std::to_string(c.arity()) + " argument(s)");
          check_sort(a, c.trg, expected);
          return Term::app(*cid, c.trg, {});
        }
        if (auto ms = pool_.meta_sort(a.name)) {
          if (sig_.is_sequence(*ms)) fail(a.col, "sequence metavariable '" + a.name + "' outside a sequence");
          check_sort(a, *ms, expected);
          return Term::meta(a.name, *ms);
        }
        if (auto vs = pool_.variable_sort(a.name)) {
          check_sort(a, *vs, expected);
          return Term::var(a.name, *vs);
        }
        fail(a.col, "unknown name '" + a.name + "'");
      }
      case Ast::K::call:
      case Ast::K::infix: {
        auto cid = sig_.find_connective(a.name);
        if (!cid) fail(a.col, "unknown connective '" + a.name + "'");
        const auto& c = sig_.connective(*cid);
        if (a.kids.size() != c.arity())
          fail(a.col, "connective '" + a.name + "' expects " + std::to_string(c.arity()) + " argument(s), got " +
                          std::to_string(a.kids.size()));
        check_sort(a, c.trg, expected);
        std::vector<Term> args;
        for (std::size_t i = 0; i < a.kids.size(); ++i) args.push_back(type(a.kids[i], c.src[i]));
        return Term::app(*cid, c.trg, std::move(args));
      }
    }
    fail(a.col, "malformed pattern");
  }

  const Signature& sig_;
  const VariablePool& pool_;
  std::size_t line_;
  std::size_t col0_;
  int comma_bp_;
  std::vector<std::string> ops_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

class Printer {
 public:
  explicit Printer(const Signature& sig) : sig_(sig), item_bp_(item_power(sig)) {}

  void term(const Term& t, std::ostream& out) const {
    switch (t.kind()) {
      case TermKind::meta:
        out << t.name();
        if (t.seq_meta()) out << '*';
        return;
      case TermKind::var:
      case TermKind::lit:
        out << t.name();
        return;
      case TermKind::seq: {
        out << '[';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) out << ", ";
          guarded(t.args()[i], item_bp_, out);
        }
        out << ']';
        return;
      }
      case TermKind::app:
        break;
    }
    const auto& c = sig_.connective(t.fn());
    if (c.infix()) {
      const int bp = 2 * c.precedence;
      guarded(t.args()[0], bp + 1, out);
      out << ' ' << c.name << ' ';
      guarded(t.args()[1], bp, out);
      return;
    }
    out << c.name;
    if (c.arity() == 0) return;
    out << '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out << ", ";
      guarded(t.args()[i], item_bp_, out);
    }
    out << ')';
  }

 private:
  // Parenthesizes infix terms whose binding power is below `min_bp`.
  void guarded(const Term& t, int min_bp, std::ostream& out) const {
    bool paren = false;
    if (t.is(TermKind::app)) {
      const auto& c = sig_.connective(t.fn());
      paren = c.infix() && 2 * c.precedence < min_bp;
    }
    if (paren) out << '(';
    term(t, out);
    if (paren) out << ')';
  }

  const Signature& sig_;
  int item_bp_;
};

}  // namespace

Term parse_pattern(const Signature& sig, const VariablePool& pool, std::string_view text,
                   std::optional<SortId> expected, std::size_t line, std::size_t column) {
  Parser p(sig, pool, text, line, column);
  return p.parse(expected);
}

std::string print(const Signature& sig, const Term& t) {
  std::ostringstream out;
  Printer(sig).term(t, out);
  return out.str();
}

std::string print(const Signature& sig, const Subst& s) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [k, v] : s) {
    if (!first) out << ", ";
    first = false;
    out << k << " := " << print(sig, v);
  }
  out << '}';
  return out.str();
}

}  // namespace prooftree
