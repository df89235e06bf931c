#pragma once

#include <string>
#include <utility>
#include <vector>

#include "spa/model.hpp"

namespace spa {

// puton moves a clear block onto another clear block (from the table or
// from a block); puttable moves a clear block from a block to the table.
std::string blocks_domain_text();
std::vector<ActionSchema> blocks_domain();

// (block, support) pairs; support is another block or "TABLE". Blocks with
// nothing on them become (clear ...) facts.
std::vector<Literal> blocks_state(const std::vector<std::pair<std::string, std::string>>& on);

// xBS: B1..Bx on the table and clear; goal is the tower B1 on B2 on ... Bx.
PlanningProblem generate_bs(int x);

// xBS1: the same goal, with bs1_pairs(x) two-block stacks initially (block
// Bk on block B(x-k) for k = 1..pairs) and everything else on the table.
// For x = 5 the top block of the goal tower starts on the fourth one.
PlanningProblem generate_bs1(int x);

// min(3, max(1, x / 4)).
int bs1_pairs(int x);

// "5BS", "8BS1" and so on; throws ValidationError for other names.
PlanningProblem problem_by_name(const std::string& name);

}  // namespace spa
