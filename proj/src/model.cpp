#include "spa/model.hpp"

#include <algorithm>
#include <set>

namespace spa {

const Symbol kInitialSchema("initial");
const Symbol kGoalSchema("goal");

namespace {

void check_schema(const ActionSchema& a) {
  if (a.name().empty()) throw ValidationError("action schema without a name");
  for (const auto& p : a.head.args())
    if (!p.is_variable()) throw ValidationError("action " + a.name().str() + ": parameter " + p.str() + " is not a variable");
  for (const auto& c : a.constraints)
    if (c.left.scope != kNoScope || c.right.scope != kNoScope)
      throw ValidationError("action " + a.name().str() + ": constraint over instantiated variables");
}

}  // namespace

void validate(const PlanningProblem& problem) {
  for (const auto& l : problem.initial)
    if (!l.is_ground()) throw ValidationError("initial condition is not ground: " + l.str());
  for (const auto& a : problem.actions) check_schema(a);
}

std::string CausalLink::str() const {
  return step_label(producer) + " -" + proposition.str() + "-> " + step_label(consumer);
}

std::strong_ordering operator<=>(const CausalLink& a, const CausalLink& b) {
  if (auto c = a.producer <=> b.producer; c != 0) return c;
  if (auto c = a.proposition <=> b.proposition; c != 0) return c;
  return a.consumer <=> b.consumer;
}

std::string Threat::str() const { return "<" + link.str() + ", " + step_label(threatener) + ">"; }

std::strong_ordering operator<=>(const Threat& a, const Threat& b) {
  if (auto c = a.link <=> b.link; c != 0) return c;
  return a.threatener <=> b.threatener;
}

std::string Reason::str() const {
  switch (kind) {
    case Kind::Root:
      return "(root)";
    case Kind::AddStep:
      return "(add-step " + step_label(step) + ")";
    case Kind::Establish:
      return "(establish " + step_label(link.producer) + " " + link.proposition.str() + " " +
             step_label(link.consumer) + ")";
    case Kind::Protect:
      return "(protect " + step_label(link.producer) + " " + link.proposition.str() + " " +
             step_label(link.consumer) + " " + step_label(threatener) + ")";
  }
  return {};
}

std::strong_ordering operator<=>(const Reason& a, const Reason& b) {
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  switch (a.kind) {
    case Reason::Kind::Root:
      return std::strong_ordering::equal;
    case Reason::Kind::AddStep:
      return a.step <=> b.step;
    case Reason::Kind::Establish:
      return a.link <=> b.link;
    case Reason::Kind::Protect:
      if (auto c = a.link <=> b.link; c != 0) return c;
      return a.threatener <=> b.threatener;
  }
  return std::strong_ordering::equal;
}

std::string OpenCondition::str() const { return proposition.str() + " -> " + step_label(consumer); }

std::string Flaw::str() const { return is_open() ? "open " + open().str() : "threat " + threat().str(); }

// ---------------------------------------------------------------------------

std::size_t Plan::position(StepId id) const {
  auto it = std::lower_bound(steps_.begin(), steps_.end(), id,
                             [](const StepPtr& s, StepId key) { return s->index < key; });
  if (it == steps_.end() || (*it)->index != id) return steps_.size();
  return static_cast<std::size_t>(it - steps_.begin());
}

const Step* Plan::find_step(StepId id) const {
  auto pos = position(id);
  return pos == steps_.size() ? nullptr : steps_[pos].get();
}

const Step& Plan::step(StepId id) const {
  const Step* s = find_step(id);
  if (s == nullptr) throw ContractError("plan has no step " + step_label(id));
  return *s;
}

bool Plan::has_link(const CausalLink& l) const { return std::find(links_.begin(), links_.end(), l) != links_.end(); }

bool Plan::precedes(StepId a, StepId b) const {
  if (dirty_) throw ContractError("plan caches are stale; call rebuild()");
  auto pa = position(a), pb = position(b);
  if (pa == steps_.size() || pb == steps_.size()) return false;
  return reach(pa, pb);
}

StepId Plan::next_index() const {
  StepId hi = 0;
  for (const auto& s : steps_)
    if (s->index != kGoalStep) hi = std::max(hi, s->index);
  return hi + 1;
}

std::vector<Reason> Plan::reasons() const {
  std::vector<Reason> out;
  out.reserve(orderings_.size() + bindings_.size());
  for (const auto& o : orderings_) out.push_back(o.reason);
  for (const auto& b : bindings_) out.push_back(b.reason);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void Plan::insert_step(StepPtr step) {
  auto it = std::lower_bound(steps_.begin(), steps_.end(), step->index,
                             [](const StepPtr& s, StepId key) { return s->index < key; });
  if (it != steps_.end() && (*it)->index == step->index)
    throw ContractError("duplicate step index " + step_label(step->index));
  steps_.insert(it, std::move(step));
  if (!dirty_) rebuild_reachability();
}

void Plan::replace_step(StepPtr step) {
  auto pos = position(step->index);
  if (pos == steps_.size()) throw ContractError("replace_step: no step " + step_label(step->index));
  steps_[pos] = std::move(step);
}

bool Plan::add_ordering(const Ordering& o, const Reason& r) {
  if (o.before == o.after) return false;
  auto pa = position(o.before), pb = position(o.after);
  if (pa == steps_.size() || pb == steps_.size())
    throw ContractError("ordering mentions a missing step");
  if (!dirty_) {
    if (reach(pb, pa)) return false;
    // Everything reaching `before` (and `before` itself) now reaches `after`
    // and all of its successors.
    for (std::size_t x = 0; x < steps_.size(); ++x) {
      if (x != pa && !reach(x, pa)) continue;
      reach_[x * words_ + pb / 64] |= std::uint64_t{1} << (pb % 64);
      for (std::size_t w = 0; w < words_; ++w) reach_[x * words_ + w] |= reach_[pb * words_ + w];
    }
  }
  orderings_.push_back({o, r});
  return true;
}

bool Plan::add_binding(const BindingConstraint& c, const Reason& r) {
  bindings_.push_back({c, r});
  if (dirty_) return true;
  return store_.add(c);
}

void Plan::add_link(const CausalLink& l) {
  if (has_link(l)) throw ContractError("duplicate causal link " + l.str());
  links_.push_back(l);
}

void Plan::remove_link(const CausalLink& l) { std::erase(links_, l); }

void Plan::remove_step(StepId id) {
  auto pos = position(id);
  if (pos == steps_.size()) return;
  steps_.erase(steps_.begin() + static_cast<std::ptrdiff_t>(pos));
  dirty_ = true;
}

void Plan::remove_tagged(const Reason& r) {
  std::erase_if(orderings_, [&](const auto& o) { return o.reason == r; });
  std::erase_if(bindings_, [&](const auto& b) { return b.reason == r; });
  dirty_ = true;
}

void Plan::rebuild_reachability() {
  const std::size_t n = steps_.size();
  words_ = (n + 63) / 64;
  reach_.assign(n * words_, 0);
  // Direct edges, then Warshall over bit rows.
  for (const auto& t : orderings_) {
    auto pa = position(t.constraint.before), pb = position(t.constraint.after);
    if (pa == n || pb == n) throw ContractError("ordering mentions a missing step");
    reach_[pa * words_ + pb / 64] |= std::uint64_t{1} << (pb % 64);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach(i, k))
        for (std::size_t w = 0; w < words_; ++w) reach_[i * words_ + w] |= reach_[k * words_ + w];
  for (std::size_t i = 0; i < n; ++i)
    if (reach(i, i)) throw ContractError("ordering constraints are cyclic");
}

void Plan::rebuild() {
  std::vector<BindingConstraint> cs;
  cs.reserve(bindings_.size());
  for (const auto& b : bindings_) cs.push_back(b.constraint);
  auto store = BindingStore::build(cs);
  if (!store) throw ContractError("binding constraints are inconsistent");
  store_ = std::move(*store);
  dirty_ = false;
  rebuild_reachability();
}

bool structurally_equal(const Plan& a, const Plan& b) {
  if (a.steps().size() != b.steps().size()) return false;
  for (std::size_t i = 0; i < a.steps().size(); ++i)
    if (!(*a.steps()[i] == *b.steps()[i])) return false;
  auto sorted = [](auto v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  return sorted(a.orderings()) == sorted(b.orderings()) && sorted(a.bindings()) == sorted(b.bindings()) &&
         sorted(a.links()) == sorted(b.links());
}

// ---------------------------------------------------------------------------

Plan make_null_plan(std::span<const Literal> initial, std::span<const Literal> goal) {
  Plan p;
  auto init = std::make_shared<Step>();
  init->index = kInitialStep;
  init->head = Literal(kInitialSchema, {});
  init->adds.assign(initial.begin(), initial.end());
  auto fin = std::make_shared<Step>();
  fin->index = kGoalStep;
  fin->head = Literal(kGoalSchema, {});
  for (const auto& g : goal) fin->preconds.push_back(rename_into(g, kGoalStep));
  p.insert_step(std::move(init));
  p.insert_step(std::move(fin));
  p.add_ordering({kInitialStep, kGoalStep}, Reason::root());
  return p;
}

Plan make_null_plan(const PlanningProblem& problem) {
  validate(problem);
  return make_null_plan(problem.initial, problem.goal);
}

Step instantiate_action(const ActionSchema& schema, const Plan& plan) {
  Step s;
  s.index = plan.next_index();
  s.head = rename_into(schema.head, s.index);
  auto rename_all = [&](const std::vector<Literal>& in) {
    std::vector<Literal> out;
    out.reserve(in.size());
    for (const auto& l : in) out.push_back(rename_into(l, s.index));
    return out;
  };
  s.preconds = rename_all(schema.preconds);
  s.adds = rename_all(schema.adds);
  s.deletes = rename_all(schema.deletes);
  return s;
}

std::vector<OpenCondition> open_conditions(const Plan& plan) {
  std::vector<OpenCondition> out;
  for (const auto& s : plan.steps()) {
    for (std::size_t i = 0; i < s->preconds.size(); ++i) {
      const Literal& q = s->preconds[i];
      bool linked = std::any_of(plan.links().begin(), plan.links().end(), [&](const CausalLink& l) {
        return l.consumer == s->index && l.proposition == q;
      });
      if (!linked) out.push_back({q, s->index, i});
    }
  }
  return out;
}

std::vector<Threat> threats(const Plan& plan) {
  std::vector<const CausalLink*> links;
  links.reserve(plan.links().size());
  for (const auto& l : plan.links()) links.push_back(&l);
  std::sort(links.begin(), links.end(), [](const CausalLink* a, const CausalLink* b) { return *a < *b; });

  std::vector<Threat> out;
  for (const CausalLink* l : links) {
    for (const auto& s : plan.steps()) {
      StepId t = s->index;
      if (t == l->producer || t == l->consumer) continue;
      if (s->adds.empty() && s->deletes.empty()) continue;
      if (plan.precedes(t, l->producer) || plan.precedes(l->consumer, t)) continue;
      auto hits = [&](const std::vector<Literal>& effects) {
        return std::any_of(effects.begin(), effects.end(),
                           [&](const Literal& e) { return can_unify(e, l->proposition, plan.store()); });
      };
      if (hits(s->adds) || hits(s->deletes)) out.push_back({*l, t});
    }
  }
  return out;
}

std::vector<Flaw> flaws(const Plan& plan) {
  std::vector<Flaw> out;
  for (auto& oc : open_conditions(plan)) out.emplace_back(std::move(oc));
  for (auto& t : threats(plan)) out.emplace_back(std::move(t));
  return out;
}

bool is_solution(const Plan& plan) { return open_conditions(plan).empty() && threats(plan).empty(); }

}  // namespace spa
