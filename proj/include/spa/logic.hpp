#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spa/symbol.hpp"

namespace spa {

using StepId = std::uint32_t;

inline constexpr StepId kInitialStep = 0;
inline constexpr StepId kGoalStep = std::numeric_limits<StepId>::max();
// Scope of constants and of variables not owned by any step (schema
// variables before instantiation, library object variables).
inline constexpr StepId kNoScope = kGoalStep - 1;

std::string step_label(StepId id);

// Contract breach inside the planner (a caller violated a precondition).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  Symbol name;
  StepId scope = kNoScope;

  static Term constant(std::string_view n) { return Term{Symbol(n), kNoScope}; }
  static Term variable(std::string_view n, StepId scope = kNoScope);

  bool is_variable() const { return name.is_variable(); }
  bool is_constant() const { return !name.is_variable(); }

  std::string str() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend auto operator<=>(const Term&, const Term&) = default;
};

inline constexpr std::size_t kMaxArity = 6;

// Fixed-capacity argument storage keeps literals trivially copyable; plans
// are copied on every refinement.
class Literal {
 public:
  Literal() = default;
  Literal(Symbol predicate, std::span<const Term> args);
  Literal(std::string_view predicate, std::initializer_list<Term> args)
      : Literal(Symbol(predicate), std::span<const Term>(args.begin(), args.size())) {}

  Symbol predicate() const { return predicate_; }
  std::size_t arity() const { return arity_; }
  std::span<const Term> args() const { return {args_.data(), arity_}; }
  std::span<Term> args() { return {args_.data(), arity_}; }
  const Term& arg(std::size_t i) const { return args_[i]; }

  bool is_ground() const;
  std::string str() const;

  friend bool operator==(const Literal& a, const Literal& b) {
    if (a.predicate_ != b.predicate_ || a.arity_ != b.arity_) return false;
    for (std::size_t i = 0; i < a.arity_; ++i)
      if (a.args_[i] != b.args_[i]) return false;
    return true;
  }
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);

 private:
  Symbol predicate_;
  std::uint8_t arity_ = 0;
  std::array<Term, kMaxArity> args_{};
};

enum class Polarity : std::uint8_t { Codesignate, Separate };

// (= left right) or (<> left right). Normalized so that `left` is a
// variable, and for two variables left < right.
struct BindingConstraint {
  Polarity polarity = Polarity::Codesignate;
  Term left;
  Term right;

  // Throws ValidationError when both sides are constants.
  static BindingConstraint make(Polarity p, const Term& a, const Term& b);
  static BindingConstraint equal(const Term& a, const Term& b) { return make(Polarity::Codesignate, a, b); }
  static BindingConstraint distinct(const Term& a, const Term& b) { return make(Polarity::Separate, a, b); }

  std::string str() const;

  friend bool operator==(const BindingConstraint&, const BindingConstraint&) = default;
  friend auto operator<=>(const BindingConstraint&, const BindingConstraint&) = default;
};

using BindingSet = std::vector<BindingConstraint>;

std::string to_string(const BindingSet& set);

// Variable -> term mapping applied syntactically.
class Substitution {
 public:
  void bind(const Term& var, const Term& value) { map_[var] = value; }
  bool contains(const Term& var) const { return map_.contains(var); }
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }
  const std::map<Term, Term>& entries() const { return map_; }

  Term apply(const Term& t) const;
  Literal apply(const Literal& l) const;
  BindingConstraint apply(const BindingConstraint& c) const;

 private:
  std::map<Term, Term> map_;
};

// Renames every unscoped variable in `l` into `scope`.
Literal rename_into(const Literal& l, StepId scope);
Term rename_into(const Term& t, StepId scope);

}  // namespace spa
