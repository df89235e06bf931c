#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "spa/logic.hpp"

namespace spa {

// Input error with a 1-based line/column position.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view text) const { return !is_list && atom == text; }

  [[noreturn]] void fail(const std::string& what) const;
};

// Reads every top-level form. `;` starts a comment to end of line; a quote
// before a form (as in '(puton ?x ?y)) is ignored.
std::vector<SExpr> parse_sexprs(std::string_view text);

// Keyword arguments of a form such as (defaction :name ... :adds ...),
// starting at item `first`. Fails on a missing value or a repeated key.
std::vector<std::pair<std::string, const SExpr*>> keyword_args(const SExpr& form, std::size_t first);

}  // namespace spa
