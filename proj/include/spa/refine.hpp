#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spa/model.hpp"

namespace spa {

// Picks one flaw (by index) from the non-empty list produced by flaws().
using FlawSelector = std::function<std::size_t(const Plan&, std::span<const Flaw>)>;

// Selects a flaw (default: the first open condition, else the first threat)
// and returns every way of correcting it. Throws ContractError on a plan
// that has no flaws.
std::vector<Plan> refine_plan(const Plan& plan, std::span<const ActionSchema> actions,
                              const FlawSelector& selector = {});

std::vector<Plan> correct_flaw(const Flaw& flaw, const Plan& plan, std::span<const ActionSchema> actions);

// Children reusing an existing step, then children adding a new step, in
// schema order.
std::vector<Plan> resolve_open(const OpenCondition& flaw, const Plan& plan, std::span<const ActionSchema> actions);

// Copy of `plan` with a new instance of `schema`, its constraints and the
// two boundary orderings, all tagged [add-step k]. nullopt when the
// schema's constraints cannot be satisfied.
std::optional<std::pair<StepId, Plan>> add_step(const ActionSchema& schema, const Plan& plan);

// One child per way `producer` can assert `q` for `consumer`.
std::vector<Plan> support(StepId producer, const Literal& q, StepId consumer, const Plan& plan);

// Demotion, promotion, then one child per separation.
std::vector<Plan> resolve_threat(const Threat& threat, const Plan& plan);

// Every combined binding set that keeps all of `threatener`'s effects from
// unifying with `q`; mutually exclusive.
std::vector<BindingSet> threat_separations(const Step& threatener, const Literal& q, const BindingStore& store);

}  // namespace spa
