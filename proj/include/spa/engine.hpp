#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spa/library.hpp"
#include "spa/refine.hpp"
#include "spa/retract.hpp"

namespace spa {

// The four control points of the search. Every hook is optional; an empty
// hook falls back to the default behaviour noted beside it.
struct ControlHooks {
  // Priority of a frontier entry, lower first; ties in insertion order.
  // Empty: plain FIFO (breadth-first).
  std::function<double(const Plan&, Direction)> rank_entry;
  // Empty: first open condition, else first threat.
  FlawSelector choose_flaw;
  // Reorders children in place before they are enqueued. Empty: as generated.
  std::function<void(std::vector<Plan>&)> rank_children;
  // Empty: first exposed reason.
  RetractionChooser choose_retraction;
};

ControlHooks default_hooks();

// Stack building from the bottom up. Flaws: threats whose threatener
// already codesignates with the protected proposition, then the newest
// step's open conditions, then goal `on` literals lowest in the goal tower,
// then the remaining threats. Entries: best first on inner steps plus
// weighted open conditions, with a fixed penalty on up entries.
ControlHooks bottom_up_hooks();

// "default" or "bottom-up"; throws ValidationError otherwise.
ControlHooks hooks_by_name(const std::string& name);

enum class Strategy : std::uint8_t { BreadthFirst, IterativeDeepening };

// One dequeued entry, reported before it is expanded.
struct Visit {
  std::size_t node = 0;
  const Plan* plan = nullptr;
  Direction direction = Direction::Down;
};

struct SearchOptions {
  Strategy strategy = Strategy::BreadthFirst;
  // Maximum number of non-boundary steps in an enqueued plan; 0 = none.
  std::size_t depth_bound = 0;
  // Give up after this many dequeues; 0 = none.
  std::size_t node_limit = 0;
  // Tab-separated trace, one line per dequeue:
  // node, direction, plan hash, decision, child count.
  std::ostream* trace = nullptr;
  std::function<void(const Visit&)> observer;
};

struct SearchStats {
  std::size_t nodes = 0;        // dequeues
  std::size_t refinements = 0;  // flaw corrections
  std::size_t retractions = 0;  // structure removals
  double ms = 0.0;
};

struct SearchResult {
  std::optional<Plan> solution;
  SearchStats stats;
  bool limit_reached = false;  // failure caused by node_limit, not exhaustion

  bool solved() const { return solution.has_value(); }
};

SearchResult refinement_loop(const Plan& start, std::span<const ActionSchema> actions, const ControlHooks& hooks,
                             const SearchOptions& options = {});

SearchResult plan_generatively(const PlanningProblem& problem, const ControlHooks& hooks,
                               const SearchOptions& options = {});

// Seeds `fitted` in both directions.
SearchResult adaptation_loop(const Plan& fitted, std::span<const ActionSchema> actions, const ControlHooks& hooks,
                             const SearchOptions& options = {});

struct AdaptOptions {
  FitMode fit = FitMode::Generous;
  MappingMode mapping = MappingMode::Greedy;
  StorePolicy store = StorePolicy::Never;
};

struct AdaptiveResult {
  SearchResult search;
  std::optional<std::string> retrieved;  // entry name; empty when falling back
  std::optional<FitReport> fit;
  PlanLibrary library;  // after the store policy was applied
};

// Retrieve, fit, adapt, store. An empty library falls back to generative
// planning and logs a notice on stderr.
AdaptiveResult plan_adaptively(const PlanningProblem& problem, const PlanLibrary& library, const ControlHooks& hooks,
                               const SearchOptions& options = {}, const AdaptOptions& adapt = {});

// Inner step heads in one total order consistent with the plan's orderings
// (smallest index first among the ready steps), with forced bindings
// applied.
std::vector<Literal> linearize(const Plan& plan);

// 64-bit FNV-1a of canonical_form, rendered as 16 hex digits.
std::string plan_hash(const Plan& plan);

}  // namespace spa
