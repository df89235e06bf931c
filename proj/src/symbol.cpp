#include "spa/symbol.hpp"

#include <mutex>
#include <unordered_set>

namespace spa {
namespace {

struct SymbolTable {
  std::mutex mutex;
  std::unordered_set<std::string> names;  // node-based: element addresses are stable
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

const std::string& Symbol::empty_text() {
  static const std::string e;
  return e;
}

Symbol::Symbol(std::string_view text) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  text_ = &*t.names.emplace(text).first;
}

}  // namespace spa
