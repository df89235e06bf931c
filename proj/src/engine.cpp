#include "spa/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <deque>
#include <iostream>
#include <limits>
#include <map>
#include <queue>

namespace spa {

namespace {

struct Entry {
  Plan plan;
  Direction direction;
  double rank = 0.0;
  std::size_t seq = 0;
};

struct LaterFirst {
  bool operator()(const Entry& a, const Entry& b) const {
    return a.rank != b.rank ? a.rank > b.rank : a.seq > b.seq;
  }
};

// FIFO, priority or LIFO container behind one interface.
class Frontier {
 public:
  enum class Kind { Fifo, Priority, Lifo };

  explicit Frontier(Kind kind) : kind_(kind) {}

  bool empty() const { return kind_ == Kind::Priority ? heap_.empty() : list_.empty(); }

  void push(Entry e) {
    if (kind_ == Kind::Priority)
      heap_.push(std::move(e));
    else
      list_.push_back(std::move(e));
  }

  Entry pop() {
    Entry e;
    if (kind_ == Kind::Priority) {
      e = heap_.top();
      heap_.pop();
    } else if (kind_ == Kind::Fifo) {
      e = std::move(list_.front());
      list_.pop_front();
    } else {
      e = std::move(list_.back());
      list_.pop_back();
    }
    return e;
  }

 private:
  Kind kind_;
  std::deque<Entry> list_;
  std::priority_queue<Entry, std::vector<Entry>, LaterFirst> heap_;
};

class Search {
 public:
  Search(std::span<const ActionSchema> actions, const ControlHooks& hooks, const SearchOptions& options)
      : actions_(actions), hooks_(hooks), options_(options) {}

  SearchResult run(const std::vector<std::pair<Plan, Direction>>& seeds) {
    const auto t0 = std::chrono::steady_clock::now();
    SearchResult result;
    if (options_.strategy == Strategy::BreadthFirst) {
      bool cut = false;
      std::optional<std::size_t> cap;
      if (options_.depth_bound != 0) cap = options_.depth_bound;
      result.solution = pass(seeds, cap, cut);
    } else {
      std::size_t limit = 0;
      for (const auto& [p, d] : seeds) limit = std::max(limit, p.inner_step_count());
      for (;;) {
        bool cut = false;
        result.solution = pass(seeds, limit, cut);
        if (result.solution || !cut || limit_hit_) break;
        if (options_.depth_bound != 0 && limit >= options_.depth_bound) break;
        ++limit;
      }
    }
    stats_.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    result.stats = stats_;
    result.limit_reached = limit_hit_;
    return result;
  }

 private:
  Frontier::Kind frontier_kind() const {
    if (options_.strategy == Strategy::IterativeDeepening) return Frontier::Kind::Lifo;
    return hooks_.rank_entry ? Frontier::Kind::Priority : Frontier::Kind::Fifo;
  }

  // One sweep. `limit`, when set, caps inner steps of enqueued plans; `cut`
  // reports whether anything was discarded by the cap.
  std::optional<Plan> pass(const std::vector<std::pair<Plan, Direction>>& seeds, std::optional<std::size_t> limit,
                           bool& cut) {
    Frontier frontier(frontier_kind());
    const bool lifo = frontier_kind() == Frontier::Kind::Lifo;
    std::size_t seq = 0;
    auto enqueue = [&](std::vector<std::pair<Plan, Direction>>& batch) {
      if (lifo) std::reverse(batch.begin(), batch.end());
      for (auto& [p, d] : batch) {
        if (limit && p.inner_step_count() > *limit) {
          cut = true;
          continue;
        }
        double rank = hooks_.rank_entry && !lifo ? hooks_.rank_entry(p, d) : 0.0;
        frontier.push(Entry{std::move(p), d, rank, seq++});
      }
    };

    // Seeds are exempt from the cap.
    auto initial = seeds;
    if (lifo) std::reverse(initial.begin(), initial.end());
    for (auto& [p, d] : initial) {
      double rank = hooks_.rank_entry && !lifo ? hooks_.rank_entry(p, d) : 0.0;
      frontier.push(Entry{std::move(p), d, rank, seq++});
    }

    while (!frontier.empty()) {
      if (options_.node_limit != 0 && stats_.nodes >= options_.node_limit) {
        limit_hit_ = true;
        return std::nullopt;
      }
      Entry e = frontier.pop();
      ++stats_.nodes;
      if (options_.observer) options_.observer(Visit{stats_.nodes, &e.plan, e.direction});
      if (is_solution(e.plan)) {
        trace(e, "solution", 0);
        return std::move(e.plan);
      }
      auto children = e.direction == Direction::Down ? expand_down(e) : expand_up(e);
      enqueue(children);
    }
    return std::nullopt;
  }

  void order_children(std::vector<Plan>& plans) const {
    if (hooks_.rank_children) hooks_.rank_children(plans);
  }

  std::vector<std::pair<Plan, Direction>> expand_down(const Entry& e) {
    auto fs = flaws(e.plan);
    std::size_t pick = hooks_.choose_flaw ? hooks_.choose_flaw(e.plan, fs) : 0;
    if (pick >= fs.size()) throw ContractError("flaw selector returned an out-of-range index");
    auto plans = correct_flaw(fs[pick], e.plan, actions_);
    ++stats_.refinements;
    order_children(plans);
    trace(e, fs[pick].str(), plans.size());
    std::vector<std::pair<Plan, Direction>> out;
    for (auto& p : plans) out.emplace_back(std::move(p), Direction::Down);
    return out;
  }

  std::vector<std::pair<Plan, Direction>> expand_up(const Entry& e) {
    std::vector<std::pair<Plan, Direction>> out;
    auto r = retract(e.plan, actions_, hooks_.choose_retraction);
    if (!r) {
      // Nothing left to retract: whatever remains beyond the null plan is
      // superfluous, and the pruned plan still needs its downward subtree.
      Plan pruned = prune_superfluous(e.plan);
      if (!structurally_equal(pruned, e.plan)) out.emplace_back(std::move(pruned), Direction::Down);
      trace(e, "prune", out.size());
      return out;
    }
    ++stats_.retractions;
    ++stats_.refinements;
    order_children(r->siblings);
    trace(e, r->retracted.str(), 1 + r->siblings.size());
    out.emplace_back(std::move(r->parent), Direction::Up);
    for (auto& s : r->siblings) out.emplace_back(std::move(s), Direction::Down);
    return out;
  }

  void trace(const Entry& e, const std::string& decision, std::size_t children) const {
    if (!options_.trace) return;
    *options_.trace << stats_.nodes << '\t' << to_string(e.direction) << '\t' << plan_hash(e.plan) << '\t'
                    << decision << '\t' << children << '\n';
  }

  std::span<const ActionSchema> actions_;
  const ControlHooks& hooks_;
  const SearchOptions& options_;
  SearchStats stats_;
  bool limit_hit_ = false;
};

// --- bottom-up hooks -------------------------------------------------------

const Symbol kOn("on");

// Height of the support position of a goal (on X Y): 0 when Y rests on
// nothing named in the goal, else one more than the goal literal for Y.
std::size_t tower_level(const Literal& lit, std::span<const Literal> goal) {
  std::size_t level = 0;
  Term below = lit.arg(1);
  for (std::size_t guard = 0; guard <= goal.size(); ++guard) {
    auto it = std::find_if(goal.begin(), goal.end(), [&](const Literal& g) {
      return g.predicate() == kOn && g.arity() == 2 && g.arg(0) == below;
    });
    if (it == goal.end()) break;
    ++level;
    below = it->arg(1);
  }
  return level;
}

// A threat whose threatener already codesignates with the protected
// proposition; any other threat may still vanish as bindings accumulate.
bool definite(const Plan& plan, const Threat& t) {
  const Step& st = plan.step(t.threatener);
  for (const auto* effects : {&st.adds, &st.deletes})
    for (const auto& e : *effects) {
      auto u = unify(e, t.link.proposition, plan.store());
      if (u && u->empty()) return true;
    }
  return false;
}

std::size_t bottom_up_flaw(const Plan& plan, std::span<const Flaw> fs) {
  std::optional<std::size_t> newest, lowest, possible;
  std::size_t lowest_level = std::numeric_limits<std::size_t>::max();
  const auto& goal = plan.step(kGoalStep).preconds;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].is_threat()) {
      if (definite(plan, fs[i].threat())) return i;
      if (!possible) possible = i;
      continue;
    }
    const auto& oc = fs[i].open();
    if (oc.consumer != kGoalStep) {
      if (!newest || oc.consumer > fs[*newest].open().consumer) newest = i;
      continue;
    }
    const Literal& q = oc.proposition;
    std::size_t level = q.predicate() == kOn && q.arity() == 2 ? tower_level(q, goal) : goal.size() + 1;
    if (level < lowest_level) {
      lowest_level = level;
      lowest = i;
    }
  }
  if (newest) return *newest;
  if (lowest) return *lowest;
  return *possible;
}

// Weights found by measurement on the xBS/xBS1 benchmark pairs.
constexpr double kOpenWeight = 0.75;
constexpr double kUpPenalty = 2.0;

double bottom_up_rank(const Plan& plan, Direction d) {
  return static_cast<double>(plan.inner_step_count()) +
         kOpenWeight * static_cast<double>(open_conditions(plan).size()) + (d == Direction::Up ? kUpPenalty : 0.0);
}

}  // namespace

ControlHooks default_hooks() { return {}; }

ControlHooks bottom_up_hooks() {
  ControlHooks h;
  h.choose_flaw = bottom_up_flaw;
  h.rank_entry = bottom_up_rank;
  return h;
}

ControlHooks hooks_by_name(const std::string& name) {
  if (name == "default") return default_hooks();
  if (name == "bottom-up") return bottom_up_hooks();
  throw ValidationError("unknown hook set '" + name + "' (expected default or bottom-up)");
}

SearchResult refinement_loop(const Plan& start, std::span<const ActionSchema> actions, const ControlHooks& hooks,
                             const SearchOptions& options) {
  return Search(actions, hooks, options).run({{start, Direction::Down}});
}

SearchResult plan_generatively(const PlanningProblem& problem, const ControlHooks& hooks,
                               const SearchOptions& options) {
  return refinement_loop(make_null_plan(problem), problem.actions, hooks, options);
}

SearchResult adaptation_loop(const Plan& fitted, std::span<const ActionSchema> actions, const ControlHooks& hooks,
                             const SearchOptions& options) {
  return Search(actions, hooks, options).run({{fitted, Direction::Up}, {fitted, Direction::Down}});
}

AdaptiveResult plan_adaptively(const PlanningProblem& problem, const PlanLibrary& library, const ControlHooks& hooks,
                               const SearchOptions& options, const AdaptOptions& adapt) {
  validate(problem);
  const auto t0 = std::chrono::steady_clock::now();
  AdaptiveResult out;
  if (library.empty()) {
    std::cerr << "spa: plan library is empty; planning from scratch\n";
    out.search = plan_generatively(problem, hooks, options);
  } else {
    auto hit = retrieve(library, problem, adapt.mapping);
    const LibraryEntry& entry = library.entries[hit->index];
    out.retrieved = entry.name;
    out.fit = fit(entry, hit->mapping, problem, adapt.fit);
    out.search = adaptation_loop(out.fit->fitted, problem.actions, hooks, options);
  }
  out.search.stats.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  out.library = out.search.solution ? store(library, *out.search.solution, problem, adapt.store) : library;
  return out;
}

std::vector<Literal> linearize(const Plan& plan) {
  const Substitution forced = plan.store().forced_substitution();
  std::vector<StepId> pending;
  for (const auto& s : plan.steps())
    if (s->index != kInitialStep && s->index != kGoalStep) pending.push_back(s->index);
  std::vector<Literal> out;
  while (!pending.empty()) {
    auto ready = std::find_if(pending.begin(), pending.end(), [&](StepId a) {
      return std::none_of(pending.begin(), pending.end(), [&](StepId b) { return plan.precedes(b, a); });
    });
    out.push_back(forced.apply(plan.step(*ready).head));
    pending.erase(ready);
  }
  return out;
}

std::string plan_hash(const Plan& plan) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical_form(plan)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace spa
