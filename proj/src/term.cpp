#include "prooftree/term.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace prooftree {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::string sort_name(const Signature& sig, SortId s) { return sig.sort(s).name; }

}  // namespace

Term Term::make(Node n) {
  std::size_t h = mix(static_cast<std::size_t>(n.kind), n.sort);
  h = mix(h, n.fn);
  h = mix(h, n.seq_meta ? 1U : 0U);
  h = mix(h, std::hash<std::string>{}(n.name));
  switch (n.kind) {
    case TermKind::app:
    case TermKind::seq:
      n.size = n.kind == TermKind::app ? 1 : 0;
      n.ground = true;
      for (const auto& a : n.args) {
        n.size += a.size();
        n.ground = n.ground && a.is_ground();
        h = mix(h, a.hash());
      }
      break;
    case TermKind::meta:
      n.size = 1;
      n.ground = false;
      break;
    case TermKind::var:
    case TermKind::lit:
      n.size = 1;
      n.ground = true;
      break;
  }
  n.hash = h;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::app(ConnectiveId fn, SortId sort, std::vector<Term> args) {
  Node n;
  n.kind = TermKind::app;
  n.fn = fn;
  n.sort = sort;
  n.args = std::move(args);
  return make(std::move(n));
}

Term Term::var(std::string name, SortId sort) {
  Node n;
  n.kind = TermKind::var;
  n.sort = sort;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::meta(std::string name, SortId sort, bool sequence) {
  Node n;
  n.kind = TermKind::meta;
  n.sort = sort;
  n.seq_meta = sequence;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::seq(SortId sort, std::vector<Term> items) {
  Node n;
  n.kind = TermKind::seq;
  n.sort = sort;
  n.args = std::move(items);
  return make(std::move(n));
}

Term Term::lit(SortId sort, std::string digits) {
  Node n;
  n.kind = TermKind::lit;
  n.sort = sort;
  n.name = normalize_digits(digits);
  return make(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = x.kind <=> y.kind; c != 0) return c;
  if (auto c = x.sort <=> y.sort; c != 0) return c;
  if (auto c = x.fn <=> y.fn; c != 0) return c;
  if (auto c = x.seq_meta <=> y.seq_meta; c != 0) return c;
  if (x.kind == TermKind::lit) {
    if (auto c = x.name.size() <=> y.name.size(); c != 0) return c;
  }
  if (auto c = x.name.compare(y.name) <=> 0; c != 0) return c;
  if (auto c = x.args.size() <=> y.args.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (auto c = x.args[i] <=> y.args[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::optional<SortId> VariablePool::meta_sort(const std::string& name) const {
  auto it = metavars.find(name);
  if (it == metavars.end()) it = metavars.find(meta_base(name));
  if (it == metavars.end()) return std::nullopt;
  return it->second;
}

std::optional<SortId> VariablePool::variable_sort(const std::string& name) const {
  auto it = variables.find(name);
  if (it == variables.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> validate_pool(const Signature& sig, const VariablePool& pool) {
  std::vector<std::string> errors;
  for (const auto& [name, sort] : pool.variables) {
    if (sig.find_connective(name)) errors.push_back("variable '" + name + "' clashes with a connective");
    if (pool.metavars.contains(name)) errors.push_back("variable '" + name + "' clashes with a metavariable");
    if (sort >= sig.sorts().size()) errors.push_back("variable '" + name + "' has an undeclared sort");
    else if (sig.is_sequence(sort)) errors.push_back("variable '" + name + "' has a sequence sort");
  }
  for (const auto& [name, sort] : pool.metavars) {
    if (sig.find_connective(name)) errors.push_back("metavariable '" + name + "' clashes with a connective");
    if (name.find('$') != std::string::npos) errors.push_back("metavariable '" + name + "' contains '$'");
    if (sort >= sig.sorts().size()) errors.push_back("metavariable '" + name + "' has an undeclared sort");
  }
  return errors;
}

Term mk_term(const Signature& sig, std::string_view connective, std::vector<Term> children) {
  auto id = sig.find_connective(connective);
  if (!id) throw TermError(TermErrorKind::unknown_connective, "unknown connective '" + std::string(connective) + "'");
  const auto& c = sig.connective(*id);
  if (children.size() != c.arity()) {
    throw TermError(TermErrorKind::arity_mismatch,
                    "connective '" + c.name + "' expects " + std::to_string(c.arity()) + " argument(s), got " +
                        std::to_string(children.size()));
  }
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (!children[i] || children[i].sort() != c.src[i]) {
      throw TermError(TermErrorKind::sort_mismatch,
                      "argument " + std::to_string(i + 1) + " of '" + c.name + "' must have sort " +
                          sort_name(sig, c.src[i]));
    }
  }
  return Term::app(*id, c.trg, std::move(children));
}

Term mk_seq(const Signature& sig, SortId seq_sort, std::vector<Term> items) {
  if (!sig.is_sequence(seq_sort))
    throw TermError(TermErrorKind::sort_mismatch, "sort " + sort_name(sig, seq_sort) + " is not a sequence sort");
  const SortId base = sig.sort(seq_sort).base;
  for (const auto& it : items) {
    bool ok = it.seq_meta() ? it.sort() == seq_sort : (it.sort() == base && !it.is(TermKind::seq));
    if (!ok)
      throw TermError(TermErrorKind::sort_mismatch,
                      "sequence of sort " + sort_name(sig, seq_sort) + " holds an item of the wrong sort");
  }
  return Term::seq(seq_sort, std::move(items));
}

void check_term(const Signature& sig, const Term& t) {
  std::set<std::string> seen;
  std::function<void(const Term&)> go = [&](const Term& x) {
    if (x.sort() >= sig.sorts().size()) throw TermError(TermErrorKind::sort_mismatch, "undeclared sort id");
    switch (x.kind()) {
      case TermKind::app: {
        if (x.fn() >= sig.connectives().size())
          throw TermError(TermErrorKind::unknown_connective, "undeclared connective id");
        const auto& c = sig.connective(x.fn());
        if (x.args().size() != c.arity())
          throw TermError(TermErrorKind::arity_mismatch, "wrong arity under '" + c.name + "'");
        if (x.sort() != c.trg) throw TermError(TermErrorKind::sort_mismatch, "wrong target sort for '" + c.name + "'");
        for (std::size_t i = 0; i < c.arity(); ++i) {
          const auto& a = x.args()[i];
          bool seq_pos = sig.is_sequence(c.src[i]);
          if (a.sort() != c.src[i] || seq_pos != a.is(TermKind::seq))
            throw TermError(TermErrorKind::sort_mismatch,
                            "argument " + std::to_string(i + 1) + " of '" + c.name + "' must have sort " +
                                sort_name(sig, c.src[i]));
          go(a);
        }
        break;
      }
      case TermKind::seq: {
        if (!sig.is_sequence(x.sort())) throw TermError(TermErrorKind::sort_mismatch, "sequence node on atomic sort");
        const SortId base = sig.sort(x.sort()).base;
        for (const auto& it : x.args()) {
          if (it.seq_meta()) {
            if (it.sort() != x.sort())
              throw TermError(TermErrorKind::sort_mismatch, "sequence metavariable of the wrong sort");
            if (!seen.insert(it.name()).second)
              throw TermError(TermErrorKind::linearity_violation,
                              "sequence metavariable '" + it.name() + "' occurs twice");
          } else {
            if (it.sort() != base || it.is(TermKind::seq))
              throw TermError(TermErrorKind::sort_mismatch, "sequence item of the wrong sort");
            go(it);
          }
        }
        break;
      }
      case TermKind::meta:
        if (x.seq_meta()) throw TermError(TermErrorKind::sort_mismatch, "sequence metavariable outside a sequence");
        if (sig.is_sequence(x.sort()))
          throw TermError(TermErrorKind::sort_mismatch, "metavariable of sequence sort must be a sequence metavariable");
        break;
      case TermKind::var:
        if (sig.is_sequence(x.sort())) throw TermError(TermErrorKind::sort_mismatch, "variable of sequence sort");
        break;
      case TermKind::lit:
        if (!sig.sort(x.sort()).literals)
          throw TermError(TermErrorKind::sort_mismatch, "sort " + sort_name(sig, x.sort()) + " has no literals");
        break;
    }
  };
  go(t);
}

void collect_metavariables(const Term& t, std::vector<Term>& out) {
  switch (t.kind()) {
    case TermKind::meta:
      if (std::none_of(out.begin(), out.end(), [&](const Term& m) { return m.name() == t.name(); }))
        out.push_back(t);
      break;
    case TermKind::app:
    case TermKind::seq:
      if (t.is_ground()) return;
      for (const auto& a : t.args()) collect_metavariables(a, out);
      break;
    default:
      break;
  }
}

std::vector<Term> metavariables(const Term& t) {
  std::vector<Term> out;
  collect_metavariables(t, out);
  return out;
}

bool occurs(const std::string& meta_name, const Term& t) {
  if (t.is_ground()) return false;
  if (t.kind() == TermKind::meta) return t.name() == meta_name;
  for (const auto& a : t.args()) {
    if (occurs(meta_name, a)) return true;
  }
  return false;
}

std::map<std::string, int> sequence_meta_counts(const Term& t) {
  std::map<std::string, int> out;
  std::function<void(const Term&)> go = [&](const Term& x) {
    if (x.is_ground()) return;
    if (x.seq_meta()) ++out[x.name()];
    for (const auto& a : x.args()) go(a);
  };
  go(t);
  return out;
}

std::string meta_base(const std::string& name) {
  auto pos = name.find('$');
  return pos == std::string::npos ? name : name.substr(0, pos);
}

std::string normalize_digits(std::string_view digits) {
  std::size_t i = 0;
  while (i + 1 < digits.size() && digits[i] == '0') ++i;
  return std::string(digits.substr(i));
}

}  // namespace prooftree
