#pragma once

#include <string_view>
#include <vector>

#include "spa/io.hpp"
#include "spa/logic.hpp"
#include "spa/sexpr.hpp"

namespace testutil {

// "(on ?x#3 B)" -> Literal; terms use the parse_term syntax.
inline spa::Literal lit(std::string_view text) {
  auto forms = spa::parse_sexprs(text);
  const auto& f = forms.at(0);
  std::vector<spa::Term> args;
  for (std::size_t i = 1; i < f.items.size(); ++i) args.push_back(spa::parse_term(f.items[i].atom));
  return spa::Literal(spa::Symbol(f.items.at(0).atom), args);
}

inline spa::Term term(std::string_view text) { return spa::parse_term(text); }

}  // namespace testutil
