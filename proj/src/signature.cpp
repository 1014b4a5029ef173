#include "prooftree/signature.hpp"

#include <set>

namespace prooftree {

namespace {

std::string join_messages(const std::vector<SignatureIssue>& issues) {
  std::string out = "invalid signature";
  for (const auto& issue : issues) {
    out += "; ";
    out += issue.message;
  }
  return out;
}

}  // namespace

std::vector<SignatureIssue> validate_signature(const SignatureSpec& spec) {
  std::vector<SignatureIssue> issues;
  auto report = [&](SignatureIssueKind kind, const std::string& subject, std::string message) {
    issues.push_back({kind, subject, std::move(message)});
  };

  if (spec.sorts.empty()) report(SignatureIssueKind::empty_sorts, "", "no sort declared");

  std::unordered_map<std::string, const SortDecl*> sorts;
  for (const auto& s : spec.sorts) {
    if (!sorts.emplace(s.name, &s).second)
      report(SignatureIssueKind::duplicate_name, s.name, "duplicate sort '" + s.name + "'");
  }
  for (const auto& s : spec.sorts) {
    if (s.kind != SortKind::sequence) continue;
    auto it = sorts.find(s.base);
    if (it == sorts.end()) {
      report(SignatureIssueKind::undeclared_sort, s.name,
             "sequence sort '" + s.name + "' has undeclared base '" + s.base + "'");
    } else if (it->second->kind != SortKind::atomic) {
      report(SignatureIssueKind::sequence_base_not_atomic, s.name,
             "base of sequence sort '" + s.name + "' is not atomic");
    }
  }

  std::set<std::string> names;
  for (const auto& c : spec.connectives) {
    if (!names.insert(c.name).second)
      report(SignatureIssueKind::duplicate_name, c.name, "duplicate connective '" + c.name + "'");
    if (sorts.contains(c.name))
      report(SignatureIssueKind::duplicate_name, c.name,
             "connective '" + c.name + "' clashes with a sort name");
    for (const auto& s : c.src) {
      if (!sorts.contains(s))
        report(SignatureIssueKind::undeclared_sort, c.name,
               "connective '" + c.name + "' uses undeclared sort '" + s + "'");
    }
    auto trg = sorts.find(c.trg);
    if (trg == sorts.end()) {
      report(SignatureIssueKind::undeclared_sort, c.name,
             "connective '" + c.name + "' targets undeclared sort '" + c.trg + "'");
    } else if (trg->second->kind == SortKind::sequence) {
      report(SignatureIssueKind::sequence_target, c.name,
             "connective '" + c.name + "' targets sequence sort '" + c.trg + "'");
    }
    if (c.precedence < 0 || (c.precedence > 0 && c.src.size() != 2))
      report(SignatureIssueKind::bad_infix, c.name,
             "infix connective '" + c.name + "' must be binary with positive precedence");
  }
  return issues;
}

SignatureError::SignatureError(std::vector<SignatureIssue> issues)
    : std::runtime_error(join_messages(issues)), issues_(std::move(issues)) {}

Signature::Signature(const SignatureSpec& spec) : spec_(spec) {
  if (auto issues = validate_signature(spec); !issues.empty()) throw SignatureError(std::move(issues));

  for (const auto& s : spec.sorts) {
    sort_index_.emplace(s.name, static_cast<SortId>(sorts_.size()));
    sorts_.push_back({s.name, s.kind, 0, s.literals});
  }
  for (std::size_t i = 0; i < spec.sorts.size(); ++i) {
    if (spec.sorts[i].kind == SortKind::sequence) sorts_[i].base = sort_index_.at(spec.sorts[i].base);
  }
  by_target_.resize(sorts_.size());
  for (const auto& c : spec.connectives) {
    Connective out;
    out.name = c.name;
    for (const auto& s : c.src) out.src.push_back(sort_index_.at(s));
    out.trg = sort_index_.at(c.trg);
    out.precedence = c.precedence;
    auto id = static_cast<ConnectiveId>(connectives_.size());
    connective_index_.emplace(c.name, id);
    by_target_[out.trg].push_back(id);
    connectives_.push_back(std::move(out));
  }
}

std::optional<SortId> Signature::find_sort(std::string_view name) const {
  auto it = sort_index_.find(std::string(name));
  if (it == sort_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ConnectiveId> Signature::find_connective(std::string_view name) const {
  auto it = connective_index_.find(std::string(name));
  if (it == connective_index_.end()) return std::nullopt;
  return it->second;
}

SortId Signature::sort_id(std::string_view name) const {
  if (auto id = find_sort(name)) return *id;
  throw std::out_of_range("unknown sort '" + std::string(name) + "'");
}

ConnectiveId Signature::connective_id(std::string_view name) const {
  if (auto id = find_connective(name)) return *id;
  throw std::out_of_range("unknown connective '" + std::string(name) + "'");
}

}  // namespace prooftree
