#include "spa/refine.hpp"

#include <algorithm>

namespace spa {

std::vector<Plan> refine_plan(const Plan& plan, std::span<const ActionSchema> actions, const FlawSelector& selector) {
  auto fs = flaws(plan);
  if (fs.empty()) throw ContractError("refine_plan called on a solution");
  std::size_t pick = selector ? selector(plan, fs) : 0;
  if (pick >= fs.size()) throw ContractError("flaw selector returned an out-of-range index");
  return correct_flaw(fs[pick], plan, actions);
}

std::vector<Plan> correct_flaw(const Flaw& flaw, const Plan& plan, std::span<const ActionSchema> actions) {
  if (flaw.is_open()) {
    if (!plan.has_step(flaw.open().consumer))
      throw ContractError("open condition names a missing step: " + flaw.str());
    return resolve_open(flaw.open(), plan, actions);
  }
  const Threat& t = flaw.threat();
  if (!plan.has_step(t.link.producer) || !plan.has_step(t.link.consumer) || !plan.has_step(t.threatener))
    throw ContractError("threat names a missing step: " + flaw.str());
  return resolve_threat(t, plan);
}

std::vector<Plan> resolve_open(const OpenCondition& flaw, const Plan& plan, std::span<const ActionSchema> actions) {
  std::vector<Plan> out;
  const Literal& q = flaw.proposition;
  const StepId consumer = flaw.consumer;

  for (const auto& s : plan.steps()) {
    if (s->index == consumer || !plan.can_precede(s->index, consumer)) continue;
    bool adds_q = std::any_of(s->adds.begin(), s->adds.end(),
                              [&](const Literal& a) { return can_unify(a, q, plan.store()); });
    if (!adds_q) continue;
    for (auto& child : support(s->index, q, consumer, plan)) out.push_back(std::move(child));
  }

  for (const auto& schema : actions) {
    bool may_add = std::any_of(schema.adds.begin(), schema.adds.end(), [&](const Literal& a) {
      return a.predicate() == q.predicate() && a.arity() == q.arity();
    });
    if (!may_add) continue;
    auto added = add_step(schema, plan);
    if (!added) continue;
    auto& [k, with_step] = *added;
    for (auto& child : support(k, q, consumer, with_step)) out.push_back(std::move(child));
  }
  return out;
}

std::optional<std::pair<StepId, Plan>> add_step(const ActionSchema& schema, const Plan& plan) {
  Step s = instantiate_action(schema, plan);
  const StepId k = s.index;
  const Reason r = Reason::add_step(k);
  Plan child = plan;
  child.insert_step(std::make_shared<const Step>(std::move(s)));
  for (const auto& c : schema.constraints) {
    BindingConstraint renamed{c.polarity, rename_into(c.left, k), rename_into(c.right, k)};
    if (!child.add_binding(BindingConstraint::make(renamed.polarity, renamed.left, renamed.right), r))
      return std::nullopt;
  }
  child.add_ordering({kInitialStep, k}, r);
  child.add_ordering({k, kGoalStep}, r);
  return std::make_pair(k, std::move(child));
}

std::vector<Plan> support(StepId producer, const Literal& q, StepId consumer, const Plan& plan) {
  std::vector<Plan> out;
  const CausalLink link{producer, q, consumer};
  if (plan.has_link(link) || !plan.can_precede(producer, consumer)) return out;
  const Reason r = Reason::establish(link);
  std::vector<BindingSet> seen;
  for (const auto& effect : plan.step(producer).adds) {
    for (auto& mgu : unifiers(effect, q, plan.store())) {
      // The link keeps every argument equality, including those the store
      // already implies through other reasons; retracting those reasons
      // later must not leave the link unsupported.
      BindingSet b = mgu;
      for (std::size_t i = 0; i < q.arity(); ++i)
        if (effect.arg(i) != q.arg(i)) b.push_back(BindingConstraint::equal(effect.arg(i), q.arg(i)));
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      if (std::find(seen.begin(), seen.end(), b) != seen.end()) continue;
      Plan child = plan;
      child.add_link(link);
      child.add_ordering({producer, consumer}, r);
      bool ok = true;
      for (const auto& c : b) ok = ok && child.add_binding(c, r);
      if (!ok) continue;
      seen.push_back(std::move(b));
      out.push_back(std::move(child));
    }
  }
  return out;
}

namespace {

void collect_separations(std::span<const Literal> effects, const Literal& q, const BindingStore& store,
                         BindingSet& acc, std::vector<BindingSet>& out) {
  if (effects.empty()) {
    out.push_back(acc);
    return;
  }
  for (const auto& set : separations(effects.front(), q, store)) {
    auto next = store.with(set);
    if (!next) continue;
    const auto mark = acc.size();
    for (const auto& c : set)
      if (std::find(acc.begin(), acc.end(), c) == acc.end()) acc.push_back(c);
    collect_separations(effects.subspan(1), q, *next, acc, out);
    acc.resize(mark);
  }
}

}  // namespace

std::vector<BindingSet> threat_separations(const Step& threatener, const Literal& q, const BindingStore& store) {
  std::vector<Literal> effects;
  for (const auto& e : threatener.adds)
    if (can_unify(e, q, store)) effects.push_back(e);
  for (const auto& e : threatener.deletes)
    if (can_unify(e, q, store)) effects.push_back(e);
  std::vector<BindingSet> out;
  if (effects.empty()) return {BindingSet{}};
  BindingSet acc;
  collect_separations(effects, q, store, acc, out);
  return out;
}

std::vector<Plan> resolve_threat(const Threat& threat, const Plan& plan) {
  std::vector<Plan> out;
  const Reason r = Reason::protect(threat);
  const StepId si = threat.link.producer;
  const StepId sj = threat.link.consumer;
  const StepId st = threat.threatener;

  if (plan.can_precede(st, si)) {
    Plan child = plan;
    child.add_ordering({st, si}, r);
    out.push_back(std::move(child));
  }
  if (plan.can_precede(sj, st)) {
    Plan child = plan;
    child.add_ordering({sj, st}, r);
    out.push_back(std::move(child));
  }
  for (const auto& set : threat_separations(plan.step(st), threat.link.proposition, plan.store())) {
    Plan child = plan;
    if (!child.add_ordering({si, st}, r) || !child.add_ordering({st, sj}, r)) continue;
    bool ok = true;
    for (const auto& c : set) ok = ok && child.add_binding(c, r);
    if (ok) out.push_back(std::move(child));
  }
  return out;
}

}  // namespace spa
