#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spa/model.hpp"

namespace spa {

enum class Direction : std::uint8_t { Up, Down };

const char* to_string(Direction d);

// Picks one reason (by index) from a non-empty list of exposed reasons.
using RetractionChooser = std::function<std::size_t(const Plan&, std::span<const Reason>)>;

// Decisions that no surviving decision depends on, sorted. [add-step]
// reasons never qualify: a step leaves the plan together with its last
// outgoing link.
std::vector<Reason> exposed_reasons(const Plan& plan);

bool is_exposed(const Reason& reason, const Plan& plan);

struct Removal {
  Flaw flaw;
  Plan plan;
};

// Deletes the structure a single decision added and reports the flaw it
// had fixed. Throws ContractError when `reason` is not exposed.
Removal remove_structure(const Reason& reason, const Plan& plan);

struct RetractionResult {
  Plan parent;
  std::vector<Plan> siblings;
  Reason retracted;
  Flaw flaw;
};

// One retraction step: nullopt if no reason is exposed.
std::optional<RetractionResult> retract(const Plan& plan, std::span<const ActionSchema> actions,
                                        const RetractionChooser& chooser = {});

// Parent tagged up, followed by every non-isomorphic sibling tagged down.
std::vector<std::pair<Plan, Direction>> retract_refinement(const Plan& plan, std::span<const ActionSchema> actions,
                                                           const RetractionChooser& chooser = {});

// Exact test: a schema-preserving step bijection under which links,
// orderings and binding constraints coincide.
bool plans_isomorphic(const Plan& a, const Plan& b);

// Removes every inner step that produces no link (with the links it
// consumes and its [add-step] constraints), then every constraint whose
// reason refers to structure no longer in the plan, until nothing changes.
Plan prune_superfluous(const Plan& plan);

// Relabelling-invariant text form: equal strings iff isomorphic plans, as
// long as colour refinement leaves at most 8! relabellings to try. Beyond
// that, ties are broken by step index and equal plans may print apart.
std::string canonical_form(const Plan& plan);

}  // namespace spa
