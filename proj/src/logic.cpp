#include "spa/logic.hpp"

#include <algorithm>

namespace spa {

std::string step_label(StepId id) {
  if (id == kGoalStep) return "G";
  return std::to_string(id);
}

Term Term::variable(std::string_view n, StepId scope) {
  if (n.empty() || n[0] != '?') throw ValidationError("variable names must start with '?': " + std::string(n));
  return Term{Symbol(n), scope};
}

std::string Term::str() const {
  if (is_constant() || scope == kNoScope) return name.str();
  return name.str() + "#" + step_label(scope);
}

Literal::Literal(Symbol predicate, std::span<const Term> args) : predicate_(predicate) {
  if (args.size() > kMaxArity)
    throw ValidationError("literal " + predicate.str() + " exceeds maximum arity " + std::to_string(kMaxArity));
  arity_ = static_cast<std::uint8_t>(args.size());
  std::copy(args.begin(), args.end(), args_.begin());
}

bool Literal::is_ground() const {
  return std::none_of(args().begin(), args().end(), [](const Term& t) { return t.is_variable(); });
}

std::string Literal::str() const {
  std::string s = "(" + predicate_.str();
  for (const auto& a : args()) {
    s += ' ';
    s += a.str();
  }
  s += ')';
  return s;
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (auto c = a.predicate_ <=> b.predicate_; c != 0) return c;
  if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
  for (std::size_t i = 0; i < a.arity_; ++i)
    if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

BindingConstraint BindingConstraint::make(Polarity p, const Term& a, const Term& b) {
  if (a.is_constant() && b.is_constant())
    throw ValidationError("binding constraint between two constants: " + a.str() + " " + b.str());
  BindingConstraint c{p, a, b};
  if (c.left.is_constant() || (c.right.is_variable() && c.right < c.left)) std::swap(c.left, c.right);
  return c;
}

std::string BindingConstraint::str() const {
  return std::string(polarity == Polarity::Codesignate ? "(= " : "(<> ") + left.str() + " " + right.str() + ")";
}

std::string to_string(const BindingSet& set) {
  std::string s = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) s += ", ";
    s += set[i].str();
  }
  return s + "}";
}

Term Substitution::apply(const Term& t) const {
  if (t.is_constant()) return t;
  auto it = map_.find(t);
  return it == map_.end() ? t : it->second;
}

Literal Substitution::apply(const Literal& l) const {
  Literal out = l;
  for (auto& a : out.args()) a = apply(a);
  return out;
}

BindingConstraint Substitution::apply(const BindingConstraint& c) const {
  return BindingConstraint::make(c.polarity, apply(c.left), apply(c.right));
}

Term rename_into(const Term& t, StepId scope) {
  if (t.is_variable() && t.scope == kNoScope) return Term{t.name, scope};
  return t;
}

Literal rename_into(const Literal& l, StepId scope) {
  Literal out = l;
  for (auto& a : out.args()) a = rename_into(a, scope);
  return out;
}

}  // namespace spa
