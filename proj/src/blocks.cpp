#include "spa/blocks.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "spa/io.hpp"

namespace spa {

namespace {

constexpr int kMinBlocks = 3;
constexpr int kMaxBlocks = 12;

std::string block(int i) { return "B" + std::to_string(i); }

void check_size(int x) {
  if (x < kMinBlocks || x > kMaxBlocks)
    throw ValidationError("block count must lie in [" + std::to_string(kMinBlocks) + ", " +
                          std::to_string(kMaxBlocks) + "], got " + std::to_string(x));
}

std::vector<Literal> tower_goal(int x) {
  std::vector<Literal> goal;
  for (int i = 1; i < x; ++i) goal.emplace_back("on", std::initializer_list<Term>{Term::constant(block(i)), Term::constant(block(i + 1))});
  return goal;
}

}  // namespace

std::string blocks_domain_text() {
  return R"((defaction :name (puton ?x ?y)
  :preconds ((on ?x ?z) (clear ?x) (clear ?y))
  :adds ((on ?x ?y) (clear ?z))
  :deletes ((on ?x ?z) (clear ?y))
  :constraints ((<> ?x ?y) (<> ?x ?z) (<> ?y ?z) (<> ?x TABLE) (<> ?y TABLE)))
(defaction :name (puttable ?x)
  :preconds ((on ?x ?z) (clear ?x))
  :adds ((on ?x TABLE) (clear ?z))
  :deletes ((on ?x ?z))
  :constraints ((<> ?x ?z) (<> ?x TABLE) (<> ?z TABLE)))
)";
}

std::vector<ActionSchema> blocks_domain() {
  static const std::vector<ActionSchema> domain = parse_domain(blocks_domain_text());
  return domain;
}

std::vector<Literal> blocks_state(const std::vector<std::pair<std::string, std::string>>& on) {
  std::vector<Literal> out;
  std::set<std::string> covered;
  for (const auto& [b, s] : on) {
    out.emplace_back("on", std::initializer_list<Term>{Term::constant(b), Term::constant(s)});
    covered.insert(s);
  }
  for (const auto& [b, s] : on)
    if (!covered.contains(b)) out.emplace_back("clear", std::initializer_list<Term>{Term::constant(b)});
  return out;
}

int bs1_pairs(int x) { return std::min(3, std::max(1, x / 4)); }

PlanningProblem generate_bs(int x) {
  check_size(x);
  std::vector<std::pair<std::string, std::string>> on;
  for (int i = 1; i <= x; ++i) on.emplace_back(block(i), "TABLE");
  return {std::to_string(x) + "BS", blocks_state(on), tower_goal(x), blocks_domain()};
}

PlanningProblem generate_bs1(int x) {
  check_size(x);
  const int pairs = bs1_pairs(x);
  std::vector<std::pair<std::string, std::string>> on;
  for (int i = 1; i <= x; ++i) {
    std::string support = "TABLE";
    if (i <= pairs) support = block(x - i);
    on.emplace_back(block(i), support);
  }
  return {std::to_string(x) + "BS1", blocks_state(on), tower_goal(x), blocks_domain()};
}

PlanningProblem problem_by_name(const std::string& name) {
  int x = 0;
  auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), x);
  std::string_view rest(ptr, static_cast<std::size_t>(name.data() + name.size() - ptr));
  if (ec == std::errc{} && rest == "BS") return generate_bs(x);
  if (ec == std::errc{} && rest == "BS1") return generate_bs1(x);
  throw ValidationError("unknown benchmark problem '" + name + "' (expected xBS or xBS1)");
}

}  // namespace spa
