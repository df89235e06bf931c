#include "spa/retract.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "spa/refine.hpp"

namespace spa {

const char* to_string(Direction d) { return d == Direction::Up ? "up" : "down"; }

namespace {

// True when `step` is an endpoint of some link other than `except`.
bool in_other_link(const Plan& plan, StepId step, const CausalLink& except) {
  return std::any_of(plan.links().begin(), plan.links().end(), [&](const CausalLink& l) {
    return (l.producer == step || l.consumer == step) && !(l == except);
  });
}

}  // namespace

bool is_exposed(const Reason& reason, const Plan& plan) {
  switch (reason.kind) {
    case Reason::Kind::Root:
    case Reason::Kind::AddStep:
      return false;
    case Reason::Kind::Protect:
      return true;
    case Reason::Kind::Establish:
      break;
  }
  const CausalLink& link = reason.link;
  if (!plan.has_link(link)) return false;
  const auto all = plan.reasons();
  bool protected_link = std::any_of(all.begin(), all.end(), [&](const Reason& r) {
    return r.kind == Reason::Kind::Protect && r.link == link;
  });
  if (protected_link) return false;
  const StepId si = link.producer;
  if (si == kInitialStep || in_other_link(plan, si, link)) return true;
  // The producer leaves with this link, so no protection may name it.
  bool protected_threatener = std::any_of(all.begin(), all.end(), [&](const Reason& r) {
    return r.kind == Reason::Kind::Protect && r.threatener == si;
  });
  return !protected_threatener;
}

std::vector<Reason> exposed_reasons(const Plan& plan) {
  std::vector<Reason> out;
  for (const auto& r : plan.reasons())
    if (is_exposed(r, plan)) out.push_back(r);
  return out;
}

Removal remove_structure(const Reason& reason, const Plan& plan) {
  if (!is_exposed(reason, plan)) throw ContractError("reason is not exposed: " + reason.str());
  Plan out = plan;
  if (reason.kind == Reason::Kind::Protect) {
    out.remove_tagged(reason);
    out.rebuild();
    return {Flaw(reason.threat()), std::move(out)};
  }
  const CausalLink& link = reason.link;
  const Step& consumer = plan.step(link.consumer);
  auto pos = std::find(consumer.preconds.begin(), consumer.preconds.end(), link.proposition);
  OpenCondition oc{link.proposition, link.consumer, static_cast<std::size_t>(pos - consumer.preconds.begin())};
  out.remove_link(link);
  out.remove_tagged(reason);
  if (link.producer != kInitialStep && !in_other_link(out, link.producer, link)) {
    out.remove_step(link.producer);
    out.remove_tagged(Reason::add_step(link.producer));
  }
  out.rebuild();
  return {Flaw(std::move(oc)), std::move(out)};
}

std::optional<RetractionResult> retract(const Plan& plan, std::span<const ActionSchema> actions,
                                        const RetractionChooser& chooser) {
  auto exposed = exposed_reasons(plan);
  if (exposed.empty()) return std::nullopt;
  std::size_t pick = chooser ? chooser(plan, exposed) : 0;
  if (pick >= exposed.size()) throw ContractError("retraction chooser returned an out-of-range index");
  auto removal = remove_structure(exposed[pick], plan);
  RetractionResult result{std::move(removal.plan), {}, exposed[pick], std::move(removal.flaw)};
  for (auto& child : correct_flaw(result.flaw, result.parent, actions))
    if (!plans_isomorphic(child, plan)) result.siblings.push_back(std::move(child));
  return result;
}

std::vector<std::pair<Plan, Direction>> retract_refinement(const Plan& plan, std::span<const ActionSchema> actions,
                                                           const RetractionChooser& chooser) {
  std::vector<std::pair<Plan, Direction>> out;
  auto r = retract(plan, actions, chooser);
  if (!r) return out;
  out.emplace_back(std::move(r->parent), Direction::Up);
  for (auto& s : r->siblings) out.emplace_back(std::move(s), Direction::Down);
  return out;
}

Plan prune_superfluous(const Plan& plan) {
  Plan out = plan;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<StepId> idle;
    for (const auto& s : out.steps()) {
      if (s->index == kInitialStep || s->index == kGoalStep) continue;
      bool produces = std::any_of(out.links().begin(), out.links().end(),
                                  [&](const CausalLink& l) { return l.producer == s->index; });
      if (!produces) idle.push_back(s->index);
    }
    for (StepId id : idle) {
      out.remove_step(id);
      out.remove_links_if([&](const CausalLink& l) { return l.consumer == id; });
      changed = true;
    }
    auto stale = [&](const Reason& r) {
      switch (r.kind) {
        case Reason::Kind::Root:
          return false;
        case Reason::Kind::AddStep:
          return !out.has_step(r.step);
        case Reason::Kind::Establish:
          return !out.has_link(r.link);
        case Reason::Kind::Protect:
          return !out.has_link(r.link) || !out.has_step(r.threatener);
      }
      return false;
    };
    auto mentions_missing = [&](const Term& t) {
      return t.is_variable() && t.scope != kNoScope && !out.has_step(t.scope);
    };
    const auto before = out.orderings().size() + out.bindings().size();
    out.remove_orderings_if([&](const Tagged<Ordering>& o) {
      return stale(o.reason) || !out.has_step(o.constraint.before) || !out.has_step(o.constraint.after);
    });
    out.remove_bindings_if([&](const Tagged<BindingConstraint>& b) {
      return stale(b.reason) || mentions_missing(b.constraint.left) || mentions_missing(b.constraint.right);
    });
    if (out.orderings().size() + out.bindings().size() != before) changed = true;
  }
  out.rebuild();
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism by backtracking over schema-preserving step bijections.

namespace {

struct Shape {
  std::vector<StepId> ids;
  std::map<StepId, std::size_t> pos;
  std::vector<Symbol> schema;
  std::set<std::pair<StepId, StepId>> orderings;
  std::map<std::pair<StepId, StepId>, std::vector<Literal>> links;  // (producer, consumer) -> props
  std::vector<std::array<std::size_t, 4>> degree;  // out/in links, out/in orderings

  explicit Shape(const Plan& p) {
    for (const auto& s : p.steps()) {
      pos[s->index] = ids.size();
      ids.push_back(s->index);
      schema.push_back(s->schema());
    }
    degree.assign(ids.size(), {0, 0, 0, 0});
    for (const auto& o : p.orderings()) {
      if (orderings.insert({o.constraint.before, o.constraint.after}).second) {
        degree[pos[o.constraint.before]][2]++;
        degree[pos[o.constraint.after]][3]++;
      }
    }
    for (const auto& l : p.links()) {
      links[{l.producer, l.consumer}].push_back(l.proposition);
      degree[pos[l.producer]][0]++;
      degree[pos[l.consumer]][1]++;
    }
  }
};

Term rename_scope(const Term& t, const std::map<StepId, StepId>& sigma) {
  if (!t.is_variable() || t.scope == kNoScope) return t;
  auto it = sigma.find(t.scope);
  return it == sigma.end() ? t : Term{t.name, it->second};
}

Literal rename_scope(const Literal& l, const std::map<StepId, StepId>& sigma) {
  Literal out = l;
  for (auto& a : out.args()) a = rename_scope(a, sigma);
  return out;
}

std::vector<Literal> sorted_props(std::vector<Literal> v) {
  std::sort(v.begin(), v.end());
  return v;
}

class IsoSearch {
 public:
  IsoSearch(const Plan& a, const Plan& b) : pa_(a), pb_(b), a_(a), b_(b) {}

  bool run() {
    if (a_.ids.size() != b_.ids.size() || a_.orderings.size() != b_.orderings.size() ||
        pa_.links().size() != pb_.links().size())
      return false;
    used_.assign(b_.ids.size(), false);
    return extend(0);
  }

 private:
  bool compatible(std::size_t i, std::size_t j) const {
    if (a_.schema[i] != b_.schema[j] || a_.degree[i] != b_.degree[j]) return false;
    StepId ai = a_.ids[i], bj = b_.ids[j];
    if ((ai == kInitialStep) != (bj == kInitialStep) || (ai == kGoalStep) != (bj == kGoalStep)) return false;
    // Pairs with every already-mapped step (and with itself).
    for (const auto& [x, y] : sigma_) {
      if (a_.orderings.contains({ai, x}) != b_.orderings.contains({bj, y})) return false;
      if (a_.orderings.contains({x, ai}) != b_.orderings.contains({y, bj})) return false;
    }
    return true;
  }

  bool links_agree() const {
    for (const auto& [ends, props] : a_.links) {
      auto it = b_.links.find({sigma_.at(ends.first), sigma_.at(ends.second)});
      if (it == b_.links.end() || it->second.size() != props.size()) return false;
      std::vector<Literal> renamed;
      for (const auto& q : props) renamed.push_back(rename_scope(q, sigma_));
      if (sorted_props(renamed) != sorted_props(it->second)) return false;
    }
    return true;
  }

  bool bindings_agree() const {
    BindingStore renamed;
    for (const auto& b : pa_.bindings()) {
      const auto& c = b.constraint;
      renamed.add(BindingConstraint::make(c.polarity, rename_scope(c.left, sigma_), rename_scope(c.right, sigma_)));
    }
    return renamed == pb_.store();
  }

  bool extend(std::size_t i) {
    if (i == a_.ids.size()) return links_agree() && bindings_agree();
    for (std::size_t j = 0; j < b_.ids.size(); ++j) {
      if (used_[j] || !compatible(i, j)) continue;
      used_[j] = true;
      sigma_[a_.ids[i]] = b_.ids[j];
      if (extend(i + 1)) return true;
      sigma_.erase(a_.ids[i]);
      used_[j] = false;
    }
    return false;
  }

  const Plan& pa_;
  const Plan& pb_;
  Shape a_;
  Shape b_;
  std::vector<bool> used_;
  std::map<StepId, StepId> sigma_;
};

}  // namespace

bool plans_isomorphic(const Plan& a, const Plan& b) { return IsoSearch(a, b).run(); }

}  // namespace spa
