#include "spa/sexpr.hpp"

#include <cctype>

namespace spa {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : ValidationError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

void SExpr::fail(const std::string& what) const { throw ParseError(what, line, column); }

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> all() {
    std::vector<SExpr> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(form());
      skip();
    }
    return out;
  }

 private:
  SExpr form() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    if (text_[pos_] == '\'') {
      advance();
      return form();
    }
    SExpr e;
    e.line = line_;
    e.column = col_;
    if (text_[pos_] == ')') throw ParseError("unbalanced ')'", line_, col_);
    if (text_[pos_] == '(') {
      e.is_list = true;
      advance();
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("missing ')' for list opened here", e.line, e.column);
        if (text_[pos_] == ')') {
          advance();
          return e;
        }
        e.items.push_back(form());
      }
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !delimiter(text_[pos_])) advance();
    e.atom = std::string(text_.substr(start, pos_ - start));
    return e;
  }

  static bool delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' || c == '\'';
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<SExpr> parse_sexprs(std::string_view text) { return Reader(text).all(); }

std::vector<std::pair<std::string, const SExpr*>> keyword_args(const SExpr& form, std::size_t first) {
  std::vector<std::pair<std::string, const SExpr*>> out;
  for (std::size_t i = first; i < form.items.size(); i += 2) {
    const SExpr& key = form.items[i];
    if (!key.is_atom() || key.atom.empty() || key.atom[0] != ':') key.fail("expected a :keyword");
    if (i + 1 >= form.items.size()) key.fail("missing value for " + key.atom);
    for (const auto& [k, v] : out)
      if (k == key.atom) key.fail("repeated keyword " + key.atom);
    out.emplace_back(key.atom, &form.items[i + 1]);
  }
  return out;
}

}  // namespace spa
