#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace spa {

// Interned identifier. Equality is pointer identity; ordering is by text so
// that every sorted structure is independent of interning order.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text);

  const std::string& str() const { return *text_; }
  bool empty() const { return text_ == nullptr || text_->empty(); }
  bool is_variable() const { return text_ != nullptr && !text_->empty() && (*text_)[0] == '?'; }

  friend bool operator==(Symbol a, Symbol b) { return a.text_ == b.text_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) {
    if (a.text_ == b.text_) return std::strong_ordering::equal;
    return a.str().compare(b.str()) <=> 0;
  }

  std::size_t hash() const { return std::hash<const void*>{}(text_); }
  // Identity key for hashing and raw (non-lexical) ordering.
  const void* id() const { return text_; }

 private:
  const std::string* text_ = &empty_text();
  static const std::string& empty_text();
};

}  // namespace spa

template <>
struct std::hash<spa::Symbol> {
  std::size_t operator()(spa::Symbol s) const noexcept { return s.hash(); }
};
