#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spa/logic.hpp"

namespace spa {

// Codesignation / non-codesignation constraint store: a partition of terms
// into equivalence classes plus a set of class pairs that must stay apart.
// Terms never mentioned are implicit singleton classes.
class BindingStore {
 public:
  BindingStore() = default;

  // Returns nullopt when the constraints force two constants together or
  // contradict a separation.
  static std::optional<BindingStore> build(std::span<const BindingConstraint> constraints);

  // Copy with `extra` added, or nullopt if inconsistent.
  std::optional<BindingStore> with(std::span<const BindingConstraint> extra) const;

  // In-place insertion used while a plan is being assembled. On failure the
  // store is left in an unspecified state and must be discarded.
  bool add(const BindingConstraint& c);
  bool merge(const Term& a, const Term& b);
  bool separate(const Term& a, const Term& b);

  bool consistent_with(std::span<const BindingConstraint> extra) const { return with(extra).has_value(); }

  bool equal(const Term& a, const Term& b) const;
  // True when a and b can never codesignate.
  bool distinct(const Term& a, const Term& b) const;

  // Canonical class representative: the class constant if any, otherwise
  // the smallest member.
  Term representative(const Term& t) const;

  // Constant forced on a variable, if any.
  std::optional<Term> value_of(const Term& t) const;

  // Every variable whose class holds a constant, mapped to that constant.
  Substitution forced_substitution() const;

  // Non-singleton classes (each sorted, list sorted) and separated class
  // pairs expressed over representatives (sorted).
  std::vector<std::vector<Term>> classes() const;
  std::vector<std::pair<Term, Term>> separations() const;

  std::size_t term_count() const { return terms_.size(); }

  friend bool operator==(const BindingStore& a, const BindingStore& b);

 private:
  friend class UnifyOverlay;

  static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

  std::uint32_t lookup(const Term& t) const;
  std::uint32_t intern(const Term& t);
  std::uint32_t root(std::uint32_t i) const;
  bool roots_separated(std::uint32_t ra, std::uint32_t rb) const;

  std::vector<Term> terms_;
  std::vector<std::uint32_t> order_;   // indices into terms_, sorted by raw key
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> constant_;  // per root: index of its constant or kAbsent
  std::vector<std::pair<std::uint32_t, std::uint32_t>> apart_;  // root pairs, first < second
};

// Most general unifier of `produced` and `needed` relative to `store`:
// nullopt if they cannot codesignate, otherwise the minimal set of new
// codesignations (empty when already equal).
std::optional<BindingSet> unify(const Literal& produced, const Literal& needed, const BindingStore& store);

// Cheap test for unify(...).has_value().
bool can_unify(const Literal& a, const Literal& b, const BindingStore& store);

// All unifiers (at most one for STRIPS literals), as a list.
std::vector<BindingSet> unifiers(const Literal& produced, const Literal& needed, const BindingStore& store);

// Minimal, mutually exclusive constraint sets each of which makes `effect`
// and `protected_lit` non-unifiable. [{}] when they already cannot unify,
// [] when no separation exists.
std::vector<BindingSet> separations(const Literal& effect, const Literal& protected_lit, const BindingStore& store);

}  // namespace spa
