#include "spa/library.hpp"

#include <algorithm>
#include <functional>

#include "spa/retract.hpp"

namespace spa {

namespace {

using TermMap = std::function<Term(const Term&)>;

Literal map_literal(const Literal& l, const TermMap& f) {
  Literal out = l;
  for (auto& a : out.args()) a = f(a);
  return out;
}

std::vector<Literal> map_literals(const std::vector<Literal>& ls, const TermMap& f) {
  std::vector<Literal> out;
  out.reserve(ls.size());
  for (const auto& l : ls) out.push_back(map_literal(l, f));
  return out;
}

CausalLink map_link(const CausalLink& l, const TermMap& f) {
  return {l.producer, map_literal(l.proposition, f), l.consumer};
}

Reason map_reason(const Reason& r, const TermMap& f) {
  Reason out = r;
  out.link = map_link(r.link, f);
  return out;
}

// Rewrites every term of the plan, reasons included. Bindings that become
// constant/constant are dropped when trivially true; a false one means the
// mapping was not injective.
Plan map_terms(const Plan& plan, const TermMap& f) {
  Plan out;
  for (const auto& s : plan.steps()) {
    auto copy = std::make_shared<Step>(*s);
    copy->head = map_literal(s->head, f);
    copy->preconds = map_literals(s->preconds, f);
    copy->adds = map_literals(s->adds, f);
    copy->deletes = map_literals(s->deletes, f);
    out.insert_step(std::move(copy));
  }
  std::vector<Tagged<Ordering>> orderings;
  for (const auto& o : plan.orderings()) orderings.push_back({o.constraint, map_reason(o.reason, f)});
  std::vector<Tagged<BindingConstraint>> bindings;
  for (const auto& b : plan.bindings()) {
    Term l = f(b.constraint.left), r = f(b.constraint.right);
    if (l.is_constant() && r.is_constant()) {
      bool holds = (l == r) == (b.constraint.polarity == Polarity::Codesignate);
      if (!holds) throw ContractError("object mapping violates " + b.constraint.str());
      continue;
    }
    bindings.push_back({BindingConstraint::make(b.constraint.polarity, l, r), map_reason(b.reason, f)});
  }
  std::vector<CausalLink> links;
  for (const auto& l : plan.links()) links.push_back(map_link(l, f));
  out.replace_orderings(std::move(orderings));
  out.replace_bindings(std::move(bindings));
  out.replace_links(std::move(links));
  out.rebuild();
  return out;
}

bool is_object_variable(const Term& t) { return t.is_variable() && t.scope == kNoScope; }

void collect_object_vars(const std::vector<Literal>& ls, std::vector<Term>& out) {
  for (const auto& l : ls)
    for (const auto& a : l.args())
      if (is_object_variable(a) && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
}

Literal apply_mapping(const Literal& l, const ObjectMapping& m) {
  Literal out = l;
  for (auto& a : out.args()) {
    auto it = m.find(a);
    if (it != m.end()) a = it->second;
  }
  return out;
}

std::size_t count_matches(const std::vector<Literal>& schema, const ObjectMapping& m,
                          const std::vector<Literal>& target) {
  std::size_t n = 0;
  for (const auto& l : schema) {
    Literal g = apply_mapping(l, m);
    if (g.is_ground() && std::find(target.begin(), target.end(), g) != target.end()) ++n;
  }
  return n;
}

class Matcher {
 public:
  Matcher(const PlanningProblem& problem) {
    for (const auto& o : problem_objects(problem)) objects_.insert(o);
  }

  // Extends `m` so that `lib` maps onto `target`; leaves `m` untouched on
  // failure.
  bool try_match(const Literal& lib, const Literal& target, ObjectMapping& m) const {
    if (lib.predicate() != target.predicate() || lib.arity() != target.arity()) return false;
    ObjectMapping ext = m;
    for (std::size_t i = 0; i < lib.arity(); ++i) {
      const Term& a = lib.arg(i);
      const Term& b = target.arg(i);
      if (!is_object_variable(a)) {
        if (a != b) return false;
        continue;
      }
      auto it = ext.find(a);
      if (it != ext.end()) {
        if (it->second != b) return false;
        continue;
      }
      if (!objects_.contains(b)) return false;
      bool taken = std::any_of(ext.begin(), ext.end(), [&](const auto& kv) { return kv.second == b; });
      if (taken) return false;
      ext.emplace(a, b);
    }
    m = std::move(ext);
    return true;
  }

 private:
  std::set<Term> objects_;
};

ObjectMapping greedy_mapping(const LibraryEntry& entry, const PlanningProblem& problem) {
  Matcher matcher(problem);
  auto complete = [&](ObjectMapping m, std::size_t skip_goal) {
    for (std::size_t i = skip_goal; i < entry.goal_schema.size(); ++i)
      for (const auto& g : problem.goal)
        if (matcher.try_match(entry.goal_schema[i], g, m)) break;
    for (const auto& l : entry.initial_schema)
      for (const auto& g : problem.initial)
        if (matcher.try_match(l, g, m)) break;
    return m;
  };

  ObjectMapping best = complete({}, 0);
  MatchScore best_score = match_score(entry, best, problem);
  if (entry.goal_schema.empty()) return best;
  for (const auto& anchor : problem.goal) {
    ObjectMapping m;
    if (!matcher.try_match(entry.goal_schema.front(), anchor, m)) continue;
    m = complete(std::move(m), 1);
    MatchScore s = match_score(entry, m, problem);
    if (s >= best_score) {
      best_score = s;
      best = std::move(m);
    }
  }
  return best;
}

ObjectMapping exact_mapping(const LibraryEntry& entry, const PlanningProblem& problem) {
  const auto lib = entry.objects();
  const auto targets = problem_objects(problem);
  std::vector<bool> used(targets.size(), false);
  ObjectMapping current, best;
  std::optional<MatchScore> best_score;

  std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t i, std::size_t n_used) {
    if (i == lib.size()) {
      MatchScore s = match_score(entry, current, problem);
      if (!best_score || s > *best_score) {
        best_score = s;
        best = current;
      }
      return;
    }
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      current[lib[i]] = targets[j];
      walk(i + 1, n_used + 1);
      current.erase(lib[i]);
      used[j] = false;
    }
    // Leaving an object unmapped only pays when the targets run out.
    if (lib.size() - i > targets.size() - n_used) walk(i + 1, n_used);
  };
  walk(0, 0);
  return best;
}

}  // namespace

std::vector<Term> LibraryEntry::objects() const {
  std::vector<Term> out;
  collect_object_vars(goal_schema, out);
  collect_object_vars(initial_schema, out);
  return out;
}

const LibraryEntry* PlanLibrary::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

const char* to_string(FitMode m) { return m == FitMode::Generous ? "generous" : "conservative"; }

std::set<Symbol> schema_constants(std::span<const ActionSchema> actions) {
  std::set<Symbol> out;
  for (const auto& a : actions)
    for (const auto& c : a.constraints)
      for (const Term* t : {&c.left, &c.right})
        if (t->is_constant()) out.insert(t->name);
  return out;
}

std::vector<Term> problem_objects(const PlanningProblem& problem) {
  const auto fixed = schema_constants(problem.actions);
  std::vector<Term> out;
  auto scan = [&](const std::vector<Literal>& ls) {
    for (const auto& l : ls)
      for (const auto& a : l.args())
        if (a.is_constant() && !fixed.contains(a.name) && std::find(out.begin(), out.end(), a) == out.end())
          out.push_back(a);
  };
  scan(problem.initial);
  scan(problem.goal);
  return out;
}

LibraryEntry variabilize(const Plan& solution, const PlanningProblem& problem) {
  const auto fixed = schema_constants(problem.actions);
  std::map<Term, Term> rename;
  auto note = [&](const Term& t) {
    if (t.is_constant() && !fixed.contains(t.name) && !rename.contains(t))
      rename.emplace(t, Term::variable("?o" + std::to_string(rename.size() + 1)));
  };
  for (const auto* ls : {&problem.goal, &problem.initial})
    for (const auto& l : *ls)
      for (const auto& a : l.args()) note(a);
  for (const auto& b : solution.bindings()) {
    note(b.constraint.left);
    note(b.constraint.right);
  }
  TermMap f = [&](const Term& t) {
    auto it = rename.find(t);
    return it == rename.end() ? t : it->second;
  };
  LibraryEntry e;
  e.name = problem.name;
  e.plan = map_terms(solution, f);
  e.goal_schema = map_literals(problem.goal, f);
  e.initial_schema = map_literals(problem.initial, f);
  return e;
}

MatchScore match_score(const LibraryEntry& entry, const ObjectMapping& mapping, const PlanningProblem& problem) {
  return {count_matches(entry.goal_schema, mapping, problem.goal),
          count_matches(entry.initial_schema, mapping, problem.initial)};
}

ObjectMapping map_objects(const LibraryEntry& entry, const PlanningProblem& problem, MappingMode mode) {
  return mode == MappingMode::Exact ? exact_mapping(entry, problem) : greedy_mapping(entry, problem);
}

std::optional<Retrieval> retrieve(const PlanLibrary& library, const PlanningProblem& problem, MappingMode mode) {
  std::optional<Retrieval> best;
  for (std::size_t i = 0; i < library.entries.size(); ++i) {
    auto m = map_objects(library.entries[i], problem, mode);
    MatchScore s = match_score(library.entries[i], m, problem);
    if (!best || s > best->score) best = Retrieval{i, std::move(m), s};
  }
  return best;
}

FitReport fit(const LibraryEntry& entry, const ObjectMapping& mapping, const PlanningProblem& problem,
              FitMode mode) {
  // (1) instantiate the entry with the mapping.
  Plan p = map_terms(entry.plan, [&](const Term& t) {
    auto it = mapping.find(t);
    return it == mapping.end() ? t : it->second;
  });

  // (2)-(4) new goal and initial conditions; unmatched goals surface as open
  // conditions because no link names them.
  auto goal = std::make_shared<Step>(p.step(kGoalStep));
  goal->preconds.clear();
  for (const auto& g : problem.goal) goal->preconds.push_back(rename_into(g, kGoalStep));
  auto init = std::make_shared<Step>(p.step(kInitialStep));
  init->adds = problem.initial;
  p.replace_step(goal);
  p.replace_step(init);

  // (5)-(6) links resting on vanished initial or goal literals.
  const Substitution forced = p.store().forced_substitution();
  std::vector<CausalLink> dropped;
  for (const auto& l : p.links()) {
    bool keep = true;
    if (l.producer == kInitialStep) {
      Literal g = forced.apply(l.proposition);
      keep = g.is_ground() && std::find(init->adds.begin(), init->adds.end(), g) != init->adds.end();
    }
    if (keep && l.consumer == kGoalStep)
      keep = std::find(goal->preconds.begin(), goal->preconds.end(), l.proposition) != goal->preconds.end();
    if (!keep) dropped.push_back(l);
  }
  for (const auto& l : dropped) {
    p.remove_link(l);
    p.remove_tagged(Reason::establish(l));
  }
  auto names_dropped = [&](const Reason& r) {
    return r.kind == Reason::Kind::Protect && std::find(dropped.begin(), dropped.end(), r.link) != dropped.end();
  };
  p.remove_orderings_if([&](const Tagged<Ordering>& o) { return names_dropped(o.reason); });
  p.remove_bindings_if([&](const Tagged<BindingConstraint>& b) {
    return names_dropped(b.reason) || is_object_variable(b.constraint.left) ||
           is_object_variable(b.constraint.right);
  });
  p.rebuild();

  FitReport report;
  report.mode = mode;
  report.deleted_links = dropped.size();
  if (mode == FitMode::Conservative) {
    const auto before = p.steps().size();
    p = prune_superfluous(p);
    report.removed_steps = before - p.steps().size();
  }
  report.new_open_conditions = open_conditions(p).size();
  report.fitted = std::move(p);
  return report;
}

PlanLibrary store(const PlanLibrary& library, const Plan& solution, const PlanningProblem& problem,
                  StorePolicy policy) {
  if (policy == StorePolicy::Never) return library;
  PlanLibrary out = library;
  LibraryEntry e = variabilize(solution, problem);
  if (out.find(e.name)) {
    std::size_t n = 2;
    while (out.find(e.name + "-" + std::to_string(n))) ++n;
    e.name += "-" + std::to_string(n);
  }
  out.entries.push_back(std::move(e));
  return out;
}

}  // namespace spa
