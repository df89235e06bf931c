#include "fixtures.hpp"

#include <algorithm>
#include <stdexcept>

#include "spa/io.hpp"
#include "spa/refine.hpp"

namespace fixture {

namespace {

constexpr const char* kDomain = R"(
(defaction :name (sa) :preconds ((fresh)) :adds ((p) (q)) :deletes ((fresh)) :constraints ())
(defaction :name (st) :preconds ((q)) :adds ((np) (r)) :deletes ((p)) :constraints ())
(defaction :name (sb) :preconds ((p) (r)) :adds ((gb)) :deletes ((q)) :constraints ())
(defaction :name (su) :preconds ((np)) :adds ((gu)) :deletes () :constraints ())
(defaction :name (sw) :preconds () :adds ((np)) :deletes () :constraints ())
(defaction :name (sr) :preconds () :adds ((r)) :deletes () :constraints ())
)";

constexpr const char* kProblem = "(defproblem :name desired-effect :initial ((fresh)) :goal ((gb) (gu)))";

const spa::ActionSchema& schema(const spa::PlanningProblem& p, std::string_view name) {
  for (const auto& a : p.actions)
    if (a.name().str() == name) return a;
  throw std::logic_error("missing schema");
}

spa::Literal lit(std::string_view name) { return spa::Literal(name, {}); }

spa::StepId add(spa::Plan& plan, const spa::PlanningProblem& p, std::string_view name) {
  auto added = spa::add_step(schema(p, name), plan);
  if (!added) throw std::logic_error("add_step failed");
  plan = added->second;
  return added->first;
}

void link(spa::Plan& plan, spa::StepId from, std::string_view prop, spa::StepId to) {
  auto children = spa::support(from, lit(prop), to, plan);
  if (children.size() != 1) throw std::logic_error("support failed");
  plan = children.front();
}

}  // namespace

DesiredEffectThreat desired_effect_threat() {
  DesiredEffectThreat f;
  f.problem = spa::parse_problem(kProblem, spa::parse_domain(kDomain));
  spa::Plan plan = spa::make_null_plan(f.problem);
  f.sb = add(plan, f.problem, "sb");
  link(plan, f.sb, "gb", spa::kGoalStep);
  f.su = add(plan, f.problem, "su");
  link(plan, f.su, "gu", spa::kGoalStep);
  f.st = add(plan, f.problem, "st");
  link(plan, f.st, "r", f.sb);
  link(plan, f.st, "np", f.su);
  f.sa = add(plan, f.problem, "sa");
  link(plan, f.sa, "q", f.st);
  link(plan, f.sa, "p", f.sb);
  link(plan, spa::kInitialStep, "fresh", f.sa);
  f.plan = std::move(plan);
  return f;
}

}  // namespace fixture
