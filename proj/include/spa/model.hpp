#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spa/bindings.hpp"
#include "spa/logic.hpp"

namespace spa {

struct ActionSchema {
  Literal head;  // (name ?param...)
  std::vector<Literal> preconds;
  std::vector<Literal> adds;
  std::vector<Literal> deletes;
  BindingSet constraints;

  Symbol name() const { return head.predicate(); }
};

struct PlanningProblem {
  std::string name;
  std::vector<Literal> initial;
  std::vector<Literal> goal;
  std::vector<ActionSchema> actions;
};

// Throws ValidationError when the initial state is not ground or a schema
// is malformed.
void validate(const PlanningProblem& problem);

struct Step {
  StepId index = 0;
  Literal head;  // schema head with renamed parameters
  std::vector<Literal> preconds;
  std::vector<Literal> adds;
  std::vector<Literal> deletes;

  Symbol schema() const { return head.predicate(); }

  friend bool operator==(const Step&, const Step&) = default;
};

using StepPtr = std::shared_ptr<const Step>;

extern const Symbol kInitialSchema;  // "initial"
extern const Symbol kGoalSchema;     // "goal"

struct Ordering {
  StepId before = 0;
  StepId after = 0;

  friend bool operator==(const Ordering&, const Ordering&) = default;
  friend auto operator<=>(const Ordering&, const Ordering&) = default;
};

struct CausalLink {
  StepId producer = 0;
  Literal proposition;
  StepId consumer = 0;

  std::string str() const;

  friend bool operator==(const CausalLink&, const CausalLink&) = default;
  friend std::strong_ordering operator<=>(const CausalLink& a, const CausalLink& b);
};

struct Threat {
  CausalLink link;
  StepId threatener = 0;

  std::string str() const;

  friend bool operator==(const Threat&, const Threat&) = default;
  friend std::strong_ordering operator<=>(const Threat& a, const Threat& b);
};

// Provenance of a constraint. Constraints with equal reasons were added by
// one planning decision.
struct Reason {
  enum class Kind : std::uint8_t { Root, AddStep, Establish, Protect };

  Kind kind = Kind::Root;
  StepId step = 0;      // AddStep
  CausalLink link;      // Establish, Protect
  StepId threatener = 0;  // Protect

  static Reason root() { return {}; }
  static Reason add_step(StepId s) { return Reason{Kind::AddStep, s, {}, 0}; }
  static Reason establish(const CausalLink& l) { return Reason{Kind::Establish, 0, l, 0}; }
  static Reason protect(const Threat& t) { return Reason{Kind::Protect, 0, t.link, t.threatener}; }

  Threat threat() const { return Threat{link, threatener}; }
  std::string str() const;

  friend bool operator==(const Reason&, const Reason&) = default;
  friend std::strong_ordering operator<=>(const Reason& a, const Reason& b);
};

template <typename T>
struct Tagged {
  T constraint;
  Reason reason;

  friend bool operator==(const Tagged&, const Tagged&) = default;
  friend auto operator<=>(const Tagged&, const Tagged&) = default;
};

struct OpenCondition {
  Literal proposition;
  StepId consumer = 0;
  std::size_t position = 0;  // index into the consumer's preconditions

  std::string str() const;

  friend bool operator==(const OpenCondition&, const OpenCondition&) = default;
};

class Flaw {
 public:
  Flaw(OpenCondition oc) : value_(std::move(oc)) {}  // NOLINT(google-explicit-constructor)
  Flaw(Threat t) : value_(std::move(t)) {}           // NOLINT(google-explicit-constructor)

  bool is_open() const { return std::holds_alternative<OpenCondition>(value_); }
  bool is_threat() const { return std::holds_alternative<Threat>(value_); }
  const OpenCondition& open() const { return std::get<OpenCondition>(value_); }
  const Threat& threat() const { return std::get<Threat>(value_); }

  std::string str() const;

  friend bool operator==(const Flaw&, const Flaw&) = default;

 private:
  std::variant<OpenCondition, Threat> value_;
};

// A partial plan. Operators copy a plan and extend or shrink the copy; the
// binding store and the transitive ordering relation are kept as caches.
class Plan {
 public:
  Plan() = default;

  const std::vector<StepPtr>& steps() const { return steps_; }
  const std::vector<Tagged<Ordering>>& orderings() const { return orderings_; }
  const std::vector<Tagged<BindingConstraint>>& bindings() const { return bindings_; }
  const std::vector<CausalLink>& links() const { return links_; }
  const BindingStore& store() const { return store_; }

  const Step* find_step(StepId id) const;
  const Step& step(StepId id) const;  // throws ContractError if absent
  bool has_step(StepId id) const { return find_step(id) != nullptr; }
  bool has_link(const CausalLink& l) const;
  std::size_t inner_step_count() const { return steps_.size() >= 2 ? steps_.size() - 2 : 0; }

  // a < b is entailed by the transitive closure of the orderings.
  bool precedes(StepId a, StepId b) const;
  // a < b can be added without a cycle.
  bool can_precede(StepId a, StepId b) const { return a != b && !precedes(b, a); }

  // Smallest index above every non-goal step.
  StepId next_index() const;

  // Every distinct reason tagging a constraint, sorted.
  std::vector<Reason> reasons() const;

  // --- mutation, for operators working on a private copy ---
  void insert_step(StepPtr step);
  bool add_ordering(const Ordering& o, const Reason& r);
  bool add_binding(const BindingConstraint& c, const Reason& r);
  void add_link(const CausalLink& l);
  void remove_link(const CausalLink& l);
  void remove_step(StepId id);
  // Drops every ordering and binding tagged with `r`.
  void remove_tagged(const Reason& r);
  template <typename Pred>
  void remove_orderings_if(Pred pred) {
    std::erase_if(orderings_, pred);
    dirty_ = true;
  }
  template <typename Pred>
  void remove_bindings_if(Pred pred) {
    std::erase_if(bindings_, pred);
    dirty_ = true;
  }
  template <typename Pred>
  void remove_links_if(Pred pred) {
    std::erase_if(links_, pred);
  }
  // Replaces step literals wholesale (used by library fitting).
  void replace_step(StepPtr step);
  void replace_links(std::vector<CausalLink> links) { links_ = std::move(links); }
  void replace_bindings(std::vector<Tagged<BindingConstraint>> b) {
    bindings_ = std::move(b);
    dirty_ = true;
  }
  void replace_orderings(std::vector<Tagged<Ordering>> o) {
    orderings_ = std::move(o);
    dirty_ = true;
  }

  // Recomputes caches after removals. Throws ContractError if the remaining
  // constraints are inconsistent.
  void rebuild();

 private:
  std::size_t position(StepId id) const;
  void rebuild_reachability();
  bool reach(std::size_t from, std::size_t to) const {
    return (reach_[from * words_ + to / 64] >> (to % 64)) & 1u;
  }

  std::vector<StepPtr> steps_;  // sorted by index; goal last
  std::vector<Tagged<Ordering>> orderings_;
  std::vector<Tagged<BindingConstraint>> bindings_;
  std::vector<CausalLink> links_;

  BindingStore store_;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> reach_;
  bool dirty_ = false;
};

// Order-insensitive equality of every component.
bool structurally_equal(const Plan& a, const Plan& b);

Plan make_null_plan(const PlanningProblem& problem);

// Null plan of an already-validated initial state and goal.
Plan make_null_plan(std::span<const Literal> initial, std::span<const Literal> goal);

// Fresh step for `schema` with index plan.next_index() and variables renamed
// into that index.
Step instantiate_action(const ActionSchema& schema, const Plan& plan);

// Ordered by (consumer index, precondition position).
std::vector<OpenCondition> open_conditions(const Plan& plan);

// Ordered by (producer, proposition, consumer, threatener).
std::vector<Threat> threats(const Plan& plan);

// Open conditions followed by threats.
std::vector<Flaw> flaws(const Plan& plan);

bool is_solution(const Plan& plan);

}  // namespace spa
