#include "spa/bindings.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace spa {
namespace {

bool raw_less(const Term& a, const Term& b) {
  if (a.name.id() != b.name.id()) return std::less<const void*>{}(a.name.id(), b.name.id());
  return a.scope < b.scope;
}

}  // namespace

std::optional<BindingStore> BindingStore::build(std::span<const BindingConstraint> constraints) {
  BindingStore s;
  for (const auto& c : constraints)
    if (!s.add(c)) return std::nullopt;
  return s;
}

std::optional<BindingStore> BindingStore::with(std::span<const BindingConstraint> extra) const {
  BindingStore s = *this;
  for (const auto& c : extra)
    if (!s.add(c)) return std::nullopt;
  return s;
}

std::uint32_t BindingStore::lookup(const Term& t) const {
  auto it = std::lower_bound(order_.begin(), order_.end(), t,
                             [this](std::uint32_t i, const Term& key) { return raw_less(terms_[i], key); });
  if (it != order_.end() && terms_[*it] == t) return *it;
  return kAbsent;
}

std::uint32_t BindingStore::intern(const Term& t) {
  auto it = std::lower_bound(order_.begin(), order_.end(), t,
                             [this](std::uint32_t i, const Term& key) { return raw_less(terms_[i], key); });
  if (it != order_.end() && terms_[*it] == t) return *it;
  auto idx = static_cast<std::uint32_t>(terms_.size());
  terms_.push_back(t);
  parent_.push_back(idx);
  size_.push_back(1);
  constant_.push_back(t.is_constant() ? idx : kAbsent);
  order_.insert(it, idx);
  return idx;
}

std::uint32_t BindingStore::root(std::uint32_t i) const {
  while (parent_[i] != i) i = parent_[i];
  return i;
}

bool BindingStore::roots_separated(std::uint32_t ra, std::uint32_t rb) const {
  if (ra > rb) std::swap(ra, rb);
  return std::binary_search(apart_.begin(), apart_.end(), std::make_pair(ra, rb));
}

bool BindingStore::add(const BindingConstraint& c) {
  return c.polarity == Polarity::Codesignate ? merge(c.left, c.right) : separate(c.left, c.right);
}

bool BindingStore::merge(const Term& a, const Term& b) {
  if (a == b) return true;
  if (a.is_constant() && b.is_constant()) return false;
  std::uint32_t ra = root(intern(a));
  std::uint32_t rb = root(intern(b));
  if (ra == rb) return true;
  if (constant_[ra] != kAbsent && constant_[rb] != kAbsent) return false;
  if (roots_separated(ra, rb)) return false;
  if (size_[ra] < size_[rb]) std::swap(ra, rb);
  parent_[rb] = ra;
  size_[ra] += size_[rb];
  if (constant_[ra] == kAbsent) constant_[ra] = constant_[rb];
  // Re-key separations that mentioned the absorbed root.
  bool touched = false;
  for (auto& p : apart_) {
    if (p.first == rb) p.first = ra, touched = true;
    if (p.second == rb) p.second = ra, touched = true;
    if (p.first > p.second) std::swap(p.first, p.second);
  }
  if (touched || constant_[ra] != kAbsent) {
    // Separation between two constant classes is tautological.
    std::erase_if(apart_, [this](const auto& p) {
      return constant_[p.first] != kAbsent && constant_[p.second] != kAbsent;
    });
    std::sort(apart_.begin(), apart_.end());
    apart_.erase(std::unique(apart_.begin(), apart_.end()), apart_.end());
  }
  return true;
}

bool BindingStore::separate(const Term& a, const Term& b) {
  if (a == b) return false;
  if (a.is_constant() && b.is_constant()) return true;
  std::uint32_t ra = root(intern(a));
  std::uint32_t rb = root(intern(b));
  if (ra == rb) return false;
  if (constant_[ra] != kAbsent && constant_[rb] != kAbsent) return true;
  std::pair<std::uint32_t, std::uint32_t> key = std::minmax(ra, rb);
  auto it = std::lower_bound(apart_.begin(), apart_.end(), key);
  if (it == apart_.end() || *it != key) apart_.insert(it, key);
  return true;
}

bool BindingStore::equal(const Term& a, const Term& b) const {
  if (a == b) return true;
  auto ia = lookup(a), ib = lookup(b);
  if (ia == kAbsent || ib == kAbsent) return false;
  return root(ia) == root(ib);
}

bool BindingStore::distinct(const Term& a, const Term& b) const {
  if (a == b) return false;
  auto ia = lookup(a), ib = lookup(b);
  auto ra = ia == kAbsent ? kAbsent : root(ia);
  auto rb = ib == kAbsent ? kAbsent : root(ib);
  if (ra != kAbsent && ra == rb) return false;
  std::optional<Term> ca = a.is_constant() ? std::optional(a) : std::nullopt;
  std::optional<Term> cb = b.is_constant() ? std::optional(b) : std::nullopt;
  if (ra != kAbsent && constant_[ra] != kAbsent) ca = terms_[constant_[ra]];
  if (rb != kAbsent && constant_[rb] != kAbsent) cb = terms_[constant_[rb]];
  if (ca && cb && *ca != *cb) return true;
  if (ra == kAbsent || rb == kAbsent) return false;
  return roots_separated(ra, rb);
}

Term BindingStore::representative(const Term& t) const {
  auto i = lookup(t);
  if (i == kAbsent) return t;
  auto r = root(i);
  if (constant_[r] != kAbsent) return terms_[constant_[r]];
  const Term* best = nullptr;
  for (std::uint32_t j = 0; j < terms_.size(); ++j)
    if (root(j) == r && (best == nullptr || terms_[j] < *best)) best = &terms_[j];
  return *best;
}

std::optional<Term> BindingStore::value_of(const Term& t) const {
  if (t.is_constant()) return t;
  auto i = lookup(t);
  if (i == kAbsent) return std::nullopt;
  auto r = root(i);
  if (constant_[r] == kAbsent) return std::nullopt;
  return terms_[constant_[r]];
}

Substitution BindingStore::forced_substitution() const {
  Substitution s;
  for (std::uint32_t i = 0; i < terms_.size(); ++i) {
    if (!terms_[i].is_variable()) continue;
    auto r = root(i);
    if (constant_[r] != kAbsent) s.bind(terms_[i], terms_[constant_[r]]);
  }
  return s;
}

std::vector<std::vector<Term>> BindingStore::classes() const {
  std::vector<std::vector<Term>> by_root(terms_.size());
  for (std::uint32_t i = 0; i < terms_.size(); ++i) by_root[root(i)].push_back(terms_[i]);
  std::vector<std::vector<Term>> out;
  for (auto& members : by_root) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<Term, Term>> BindingStore::separations() const {
  std::vector<std::pair<Term, Term>> out;
  out.reserve(apart_.size());
  for (auto [a, b] : apart_) {
    Term ta = representative(terms_[a]);
    Term tb = representative(terms_[b]);
    if (tb < ta) std::swap(ta, tb);
    out.emplace_back(ta, tb);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const BindingStore& a, const BindingStore& b) {
  return a.classes() == b.classes() && a.separations() == b.separations();
}

// Tentative merges over at most 2*kMaxArity classes, checked against a
// store without copying it.
class UnifyOverlay {
 public:
  explicit UnifyOverlay(const BindingStore& store) : store_(store) {}

  // Returns false on conflict.
  bool merge(const Term& a, const Term& b, bool& changed) {
    changed = false;
    int ka = key(a), kb = key(b);
    int ga = find(ka), gb = find(kb);
    if (ga == gb) return true;
    const Term* ca = constant_of_group(ga);
    const Term* cb = constant_of_group(gb);
    if (ca && cb && *ca != *cb) return false;
    for (int i = 0; i < n_; ++i) {
      if (find(i) != ga) continue;
      for (int j = 0; j < n_; ++j) {
        if (find(j) != gb) continue;
        if (apart(i, j)) return false;
      }
    }
    parent_[gb] = ga;
    changed = true;
    return true;
  }

 private:
  int key(const Term& t) {
    auto idx = store_.lookup(t);
    std::uint32_t r = idx == BindingStore::kAbsent ? BindingStore::kAbsent : store_.root(idx);
    for (int i = 0; i < n_; ++i) {
      if (r != BindingStore::kAbsent ? roots_[i] == r : (roots_[i] == BindingStore::kAbsent && terms_[i] == t))
        return i;
    }
    roots_[n_] = r;
    terms_[n_] = t;
    parent_[n_] = n_;
    return n_++;
  }
  int find(int i) const {
    while (parent_[i] != i) i = parent_[i];
    return i;
  }
  const Term* constant_of(int i) const {
    if (roots_[i] != BindingStore::kAbsent) {
      auto c = store_.constant_[roots_[i]];
      return c == BindingStore::kAbsent ? nullptr : &store_.terms_[c];
    }
    return terms_[i].is_constant() ? &terms_[i] : nullptr;
  }
  const Term* constant_of_group(int g) const {
    for (int i = 0; i < n_; ++i)
      if (find(i) == g)
        if (const Term* c = constant_of(i)) return c;
    return nullptr;
  }
  bool apart(int i, int j) const {
    if (roots_[i] == BindingStore::kAbsent || roots_[j] == BindingStore::kAbsent) return false;
    return store_.roots_separated(roots_[i], roots_[j]);
  }

  const BindingStore& store_;
  int n_ = 0;
  std::array<std::uint32_t, 2 * kMaxArity> roots_{};
  std::array<Term, 2 * kMaxArity> terms_{};
  std::array<int, 2 * kMaxArity> parent_{};
};

std::optional<BindingSet> unify(const Literal& produced, const Literal& needed, const BindingStore& store) {
  if (produced.predicate() != needed.predicate() || produced.arity() != needed.arity()) return std::nullopt;
  UnifyOverlay overlay(store);
  BindingSet out;
  for (std::size_t i = 0; i < produced.arity(); ++i) {
    const Term& a = produced.arg(i);
    const Term& b = needed.arg(i);
    bool changed = false;
    if (!overlay.merge(a, b, changed)) return std::nullopt;
    if (changed) out.push_back(BindingConstraint::equal(a, b));
  }
  return out;
}

bool can_unify(const Literal& a, const Literal& b, const BindingStore& store) {
  if (a.predicate() != b.predicate() || a.arity() != b.arity()) return false;
  UnifyOverlay overlay(store);
  for (std::size_t i = 0; i < a.arity(); ++i) {
    bool changed = false;
    if (!overlay.merge(a.arg(i), b.arg(i), changed)) return false;
  }
  return true;
}

std::vector<BindingSet> unifiers(const Literal& produced, const Literal& needed, const BindingStore& store) {
  std::vector<BindingSet> out;
  if (auto u = unify(produced, needed, store)) out.push_back(std::move(*u));
  return out;
}

std::vector<BindingSet> separations(const Literal& effect, const Literal& protected_lit, const BindingStore& store) {
  if (!can_unify(effect, protected_lit, store)) return {BindingSet{}};
  // Position i: codesignate every earlier position, then keep position i
  // apart. The sets partition the ways the two literals can differ.
  std::vector<BindingSet> out;
  BindingStore prefix_store = store;
  BindingSet prefix;
  for (std::size_t i = 0; i < effect.arity(); ++i) {
    const Term& a = effect.arg(i);
    const Term& b = protected_lit.arg(i);
    if (!prefix_store.equal(a, b)) {
      BindingStore trial = prefix_store;
      if (trial.separate(a, b) && !trial.equal(a, b)) {
        BindingSet set = prefix;
        if (!(a.is_constant() && b.is_constant())) set.push_back(BindingConstraint::distinct(a, b));
        out.push_back(std::move(set));
      }
      if (!prefix_store.merge(a, b)) break;
      if (!(a.is_constant() && b.is_constant())) prefix.push_back(BindingConstraint::equal(a, b));
    }
  }
  return out;
}

}  // namespace spa
