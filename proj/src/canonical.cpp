#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "spa/retract.hpp"

namespace spa {

namespace {

// Upper bound on the relabellings tried when colour refinement leaves ties.
constexpr std::size_t kPermutationBudget = 40320;

using Relabel = std::map<StepId, StepId>;

Term relabel(const Term& t, const Relabel& sigma) {
  if (!t.is_variable() || t.scope == kNoScope) return t;
  auto it = sigma.find(t.scope);
  return it == sigma.end() ? t : Term{t.name, it->second};
}

Literal relabel(const Literal& l, const Relabel& sigma) {
  Literal out = l;
  for (auto& a : out.args()) a = relabel(a, sigma);
  return out;
}

std::string render(const Plan& plan, const Relabel& sigma) {
  std::ostringstream out;
  std::vector<std::pair<StepId, std::string>> steps;
  for (const auto& s : plan.steps()) steps.emplace_back(sigma.at(s->index), relabel(s->head, sigma).str());
  std::sort(steps.begin(), steps.end());
  out << "steps";
  for (const auto& [id, head] : steps) out << ' ' << step_label(id) << ':' << head;

  std::set<std::pair<StepId, StepId>> orderings;
  for (const auto& o : plan.orderings())
    orderings.insert({sigma.at(o.constraint.before), sigma.at(o.constraint.after)});
  out << "\norderings";
  for (const auto& [a, b] : orderings) out << ' ' << step_label(a) << '<' << step_label(b);

  std::vector<CausalLink> links;
  for (const auto& l : plan.links())
    links.push_back({sigma.at(l.producer), relabel(l.proposition, sigma), sigma.at(l.consumer)});
  std::sort(links.begin(), links.end());
  out << "\nlinks";
  for (const auto& l : links) out << ' ' << l.str();

  BindingStore store;
  for (const auto& b : plan.bindings()) {
    const auto& c = b.constraint;
    store.add(BindingConstraint::make(c.polarity, relabel(c.left, sigma), relabel(c.right, sigma)));
  }
  out << "\nclasses";
  for (const auto& cls : store.classes()) {
    out << " {";
    for (std::size_t i = 0; i < cls.size(); ++i) out << (i ? " " : "") << cls[i].str();
    out << '}';
  }
  out << "\napart";
  for (const auto& [a, b] : store.separations()) out << " (" << a.str() << ' ' << b.str() << ')';
  return out.str();
}

// Weisfeiler-Lehman style refinement of inner steps. Colours are strings so
// that they are comparable across plans.
std::map<StepId, std::string> refine_colours(const Plan& plan) {
  std::map<StepId, std::string> colour;
  for (const auto& s : plan.steps()) colour[s->index] = s->index == kInitialStep ? "I"
                                                      : s->index == kGoalStep  ? "G"
                                                                               : s->schema().str();
  std::set<std::pair<StepId, StepId>> orderings;
  for (const auto& o : plan.orderings()) orderings.insert({o.constraint.before, o.constraint.after});

  std::size_t classes = 0;
  for (std::size_t round = 0; round <= plan.steps().size(); ++round) {
    std::map<StepId, std::string> next;
    for (const auto& [id, c] : colour) {
      std::vector<std::string> nbrs;
      for (const auto& l : plan.links()) {
        if (l.producer == id) nbrs.push_back("out " + l.proposition.predicate().str() + " " + colour[l.consumer]);
        if (l.consumer == id) nbrs.push_back("in " + l.proposition.predicate().str() + " " + colour[l.producer]);
      }
      for (const auto& [a, b] : orderings) {
        if (a == id) nbrs.push_back("< " + colour[b]);
        if (b == id) nbrs.push_back("> " + colour[a]);
      }
      std::sort(nbrs.begin(), nbrs.end());
      std::string sig = c + "[";
      for (const auto& n : nbrs) sig += n + ";";
      next[id] = sig + "]";
    }
    std::set<std::string> distinct;
    for (const auto& [id, c] : next) distinct.insert(c);
    colour = std::move(next);
    if (distinct.size() == classes) break;
    classes = distinct.size();
  }
  return colour;
}

}  // namespace

std::string canonical_form(const Plan& plan) {
  auto colour = refine_colours(plan);

  // Group inner steps by colour; groups in colour order.
  std::map<std::string, std::vector<StepId>> groups;
  for (const auto& s : plan.steps())
    if (s->index != kInitialStep && s->index != kGoalStep) groups[colour[s->index]].push_back(s->index);
  std::vector<std::vector<StepId>> tied;
  std::size_t combinations = 1;
  for (auto& [c, ids] : groups) {
    tied.push_back(ids);
    for (std::size_t k = 2; k <= ids.size() && combinations <= kPermutationBudget; ++k) combinations *= k;
  }

  auto assign = [&]() {
    Relabel sigma{{kInitialStep, kInitialStep}, {kGoalStep, kGoalStep}};
    StepId next = 1;
    for (const auto& g : tied)
      for (StepId id : g) sigma[id] = next++;
    return render(plan, sigma);
  };

  if (combinations > kPermutationBudget) return assign();  // ties broken by index

  // Enumerate the product of permutations of every tie group.
  std::string best;
  bool first = true;
  std::function<void(std::size_t)> walk = [&](std::size_t g) {
    if (g == tied.size()) {
      std::string s = assign();
      if (first || s < best) best = std::move(s);
      first = false;
      return;
    }
    std::sort(tied[g].begin(), tied[g].end());
    do walk(g + 1);
    while (std::next_permutation(tied[g].begin(), tied[g].end()));
  };
  walk(0);
  return best;
}

}  // namespace spa
