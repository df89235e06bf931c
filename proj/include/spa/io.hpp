#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spa/library.hpp"
#include "spa/model.hpp"
#include "spa/sexpr.hpp"

namespace spa {

// Domain files hold (defaction ...) forms; problem files one (defproblem ...)
// form; library files one (library (entry ...)...) form. All parse errors
// are ParseError with a line:column prefix, including a predicate used with
// two different arities.
std::vector<ActionSchema> parse_domain(std::string_view text);

// The returned problem carries `actions`; arities are checked across both.
PlanningProblem parse_problem(std::string_view text, std::span<const ActionSchema> actions = {});

PlanLibrary parse_library(std::string_view text);

Plan parse_plan(const SExpr& form);

// Canonical text. Library output sorts every constraint list, so
// serialize_library(parse_library(serialize_library(x))) reproduces its
// input byte for byte.
std::string serialize_domain(std::span<const ActionSchema> actions);
std::string serialize_problem(const PlanningProblem& problem);
std::string serialize_plan(const Plan& plan, std::size_t indent = 0);
std::string serialize_library(const PlanLibrary& library);

// Parses a term as written by Term::str ("?x#3", "?x#G", "?x", "A").
Term parse_term(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace spa
