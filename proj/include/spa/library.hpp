#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spa/model.hpp"

namespace spa {

// A solved plan with its problem objects replaced by variables ?o1, ?o2, ...
struct LibraryEntry {
  std::string name;
  Plan plan;
  std::vector<Literal> goal_schema;
  std::vector<Literal> initial_schema;

  // Object variables in order of first appearance (goal, then initial).
  std::vector<Term> objects() const;
};

struct PlanLibrary {
  std::vector<LibraryEntry> entries;

  bool empty() const { return entries.empty(); }
  const LibraryEntry* find(std::string_view name) const;
};

// Library object variable -> problem constant. Partial and injective.
using ObjectMapping = std::map<Term, Term>;

struct MatchScore {
  std::size_t goal = 0;
  std::size_t initial = 0;

  friend auto operator<=>(const MatchScore&, const MatchScore&) = default;
};

enum class MappingMode : std::uint8_t { Exact, Greedy };
enum class FitMode : std::uint8_t { Conservative, Generous };
enum class StorePolicy : std::uint8_t { Always, Never };

const char* to_string(FitMode m);

// Constants that appear in any schema constraint (TABLE in the blocks world).
std::set<Symbol> schema_constants(std::span<const ActionSchema> actions);

// Constants of the problem that are not schema constants, in order of first
// appearance (initial, then goal).
std::vector<Term> problem_objects(const PlanningProblem& problem);

LibraryEntry variabilize(const Plan& solution, const PlanningProblem& problem);

MatchScore match_score(const LibraryEntry& entry, const ObjectMapping& mapping, const PlanningProblem& problem);

// Exact: every injective mapping is scored and the best (goal, initial)
// pair wins, earliest in enumeration order on ties. Greedy: for each
// problem goal literal the first entry goal literal is anchored on it, the
// remaining goal and then initial literals are matched first-fit, and the
// best anchor wins, the later anchor on ties.
ObjectMapping map_objects(const LibraryEntry& entry, const PlanningProblem& problem, MappingMode mode);

struct Retrieval {
  std::size_t index = 0;
  ObjectMapping mapping;
  MatchScore score;
};

// Best entry by (goal, initial) matches, library order on ties. nullopt for
// an empty library.
std::optional<Retrieval> retrieve(const PlanLibrary& library, const PlanningProblem& problem,
                                  MappingMode mode = MappingMode::Greedy);

struct FitReport {
  Plan fitted;
  std::size_t new_open_conditions = 0;
  std::size_t deleted_links = 0;
  std::size_t removed_steps = 0;
  FitMode mode = FitMode::Generous;
};

FitReport fit(const LibraryEntry& entry, const ObjectMapping& mapping, const PlanningProblem& problem, FitMode mode);

PlanLibrary store(const PlanLibrary& library, const Plan& solution, const PlanningProblem& problem,
                  StorePolicy policy);

}  // namespace spa
