#pragma once

// The desired-effect threat construction: steps sa, st, sb forced into that
// order by causal links, st deleting p while sb still needs it from sa, and
// su consuming np, which st asserts as its "not p" effect. Every repair of
// the threat is blocked. sw is the other way to assert np; sr is another
// source of r. sa can run only once and sb consumes q, so no solution
// contains st.

#include "spa/model.hpp"

namespace fixture {

struct DesiredEffectThreat {
  spa::PlanningProblem problem;
  spa::Plan plan;
  spa::StepId sa = 0, st = 0, sb = 0, su = 0;
};

DesiredEffectThreat desired_effect_threat();

}  // namespace fixture
