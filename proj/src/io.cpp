#include "spa/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace spa {

namespace {

// Predicate -> arity, shared by every literal read from one set of files.
class ArityTable {
 public:
  void check(const Literal& l, const SExpr& where) {
    auto [it, fresh] = arity_.emplace(l.predicate(), l.arity());
    if (!fresh && it->second != l.arity())
      where.fail("predicate " + l.predicate().str() + " used with arity " + std::to_string(l.arity()) +
                 " and " + std::to_string(it->second));
  }

  void learn(std::span<const ActionSchema> actions) {
    SExpr nowhere;
    for (const auto& a : actions)
      for (const auto* ls : {&a.preconds, &a.adds, &a.deletes})
        for (const auto& l : *ls) check(l, nowhere);
  }

 private:
  std::map<Symbol, std::size_t> arity_;
};

StepId parse_step_id(const SExpr& e) {
  if (e.is_atom("G")) return kGoalStep;
  StepId id = 0;
  const auto& a = e.atom;
  auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), id);
  if (!e.is_atom() || a.empty() || ec != std::errc{} || ptr != a.data() + a.size() || id >= kNoScope)
    e.fail("expected a step index or G");
  return id;
}

Term term_of(const SExpr& e) {
  if (!e.is_atom() || e.atom.empty() || e.atom[0] == ':') e.fail("expected a term");
  try {
    return parse_term(e.atom);
  } catch (const ValidationError& err) {
    e.fail(err.what());
  }
}

Literal literal_of(const SExpr& e, ArityTable* arities) {
  if (!e.is_list || e.items.empty() || !e.items[0].is_atom() || e.items[0].atom[0] == '?')
    e.fail("expected a literal such as (on ?x B)");
  std::vector<Term> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term_of(e.items[i]));
  if (args.size() > kMaxArity) e.fail("literal exceeds maximum arity " + std::to_string(kMaxArity));
  Literal l(Symbol(e.items[0].atom), args);
  if (arities) arities->check(l, e);
  return l;
}

std::vector<Literal> literals_of(const SExpr& e, ArityTable* arities) {
  if (!e.is_list) e.fail("expected a list of literals");
  std::vector<Literal> out;
  for (const auto& item : e.items) out.push_back(literal_of(item, arities));
  return out;
}

BindingConstraint constraint_of(const SExpr& e, std::size_t expected_size) {
  if (!e.is_list || e.items.size() != expected_size || !e.items[0].is_atom())
    e.fail("expected (= a b) or (<> a b)");
  const std::string& op = e.items[0].atom;
  Polarity p;
  if (op == "=")
    p = Polarity::Codesignate;
  else if (op == "<>" || op == "≠")
    p = Polarity::Separate;
  else
    e.items[0].fail("unknown binding operator " + op);
  Term a = term_of(e.items[1]), b = term_of(e.items[2]);
  if (a.is_constant() && b.is_constant()) e.fail("binding constraint between two constants");
  if (a == b) e.fail("binding constraint relates a term to itself");
  return BindingConstraint::make(p, a, b);
}

Reason reason_of(const SExpr& e) {
  if (!e.is_list || e.items.empty() || !e.items[0].is_atom()) e.fail("expected a reason");
  const std::string& kind = e.items[0].atom;
  auto need = [&](std::size_t n) {
    if (e.items.size() != n) e.fail("malformed (" + kind + " ...) reason");
  };
  if (kind == "root") {
    need(1);
    return Reason::root();
  }
  if (kind == "add-step") {
    need(2);
    return Reason::add_step(parse_step_id(e.items[1]));
  }
  if (kind == "establish" || kind == "protect") {
    need(kind == "establish" ? 4 : 5);
    CausalLink l{parse_step_id(e.items[1]), literal_of(e.items[2], nullptr), parse_step_id(e.items[3])};
    if (kind == "establish") return Reason::establish(l);
    return Reason::protect(Threat{l, parse_step_id(e.items[4])});
  }
  e.items[0].fail("unknown reason kind " + kind);
}

const SExpr* lookup(const std::vector<std::pair<std::string, const SExpr*>>& kw, std::string_view key) {
  for (const auto& [k, v] : kw)
    if (k == key) return v;
  return nullptr;
}

const SExpr& require(const SExpr& form, const std::vector<std::pair<std::string, const SExpr*>>& kw,
                     std::string_view key) {
  const SExpr* v = lookup(kw, key);
  if (!v) form.fail("missing " + std::string(key));
  return *v;
}

void allow_only(const std::vector<std::pair<std::string, const SExpr*>>& kw,
                std::initializer_list<std::string_view> keys, const SExpr& form) {
  for (const auto& [k, v] : kw)
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) form.fail("unexpected keyword " + k);
}

ActionSchema schema_of(const SExpr& form, ArityTable& arities) {
  auto kw = keyword_args(form, 1);
  allow_only(kw, {":name", ":preconds", ":adds", ":deletes", ":constraints"}, form);
  ActionSchema a;
  a.head = literal_of(require(form, kw, ":name"), nullptr);
  a.preconds = literals_of(require(form, kw, ":preconds"), &arities);
  if (const SExpr* e = lookup(kw, ":adds")) a.adds = literals_of(*e, &arities);
  if (const SExpr* e = lookup(kw, ":deletes")) a.deletes = literals_of(*e, &arities);
  if (const SExpr* e = lookup(kw, ":constraints")) {
    if (!e->is_list) e->fail("expected a list of binding constraints");
    for (const auto& c : e->items) a.constraints.push_back(constraint_of(c, 3));
  }
  return a;
}

std::string join(const std::vector<Literal>& ls) {
  std::string s = "(";
  for (std::size_t i = 0; i < ls.size(); ++i) s += (i ? " " : "") + ls[i].str();
  return s + ")";
}

std::string ordering_line(const Tagged<Ordering>& o) {
  return "(" + step_label(o.constraint.before) + " " + step_label(o.constraint.after) + " " + o.reason.str() + ")";
}

std::string binding_line(const Tagged<BindingConstraint>& b) {
  const auto& c = b.constraint;
  return std::string(c.polarity == Polarity::Codesignate ? "(= " : "(<> ") + c.left.str() + " " + c.right.str() +
         " " + b.reason.str() + ")";
}

template <typename T, typename F>
void block(std::ostringstream& out, const std::string& pad, const char* key, std::vector<T> items, F line) {
  std::sort(items.begin(), items.end());
  out << '\n' << pad << "  " << key << " (";
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "\n" + pad + "    " : "") << line(items[i]);
  out << ')';
}

}  // namespace

Term parse_term(std::string_view text) {
  if (text.empty()) throw ValidationError("empty term");
  if (text[0] != '?') {
    if (text.find('#') != std::string_view::npos) throw ValidationError("constant with a scope: " + std::string(text));
    return Term::constant(text);
  }
  auto hash = text.find('#');
  if (hash == std::string_view::npos) return Term::variable(text);
  std::string_view scope = text.substr(hash + 1);
  if (hash == 1) throw ValidationError("variable without a name: " + std::string(text));
  if (scope == "G") return Term::variable(text.substr(0, hash), kGoalStep);
  StepId id = 0;
  auto [ptr, ec] = std::from_chars(scope.data(), scope.data() + scope.size(), id);
  if (scope.empty() || ec != std::errc{} || ptr != scope.data() + scope.size() || id >= kNoScope)
    throw ValidationError("bad variable scope in " + std::string(text));
  return Term::variable(text.substr(0, hash), id);
}

std::vector<ActionSchema> parse_domain(std::string_view text) {
  ArityTable arities;
  std::vector<ActionSchema> out;
  for (const auto& form : parse_sexprs(text)) {
    if (!form.is_list || form.items.empty() || !form.items[0].is_atom("defaction"))
      form.fail("expected (defaction ...)");
    out.push_back(schema_of(form, arities));
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
      if (out[i].name() == out.back().name()) form.fail("duplicate action " + out.back().name().str());
  }
  PlanningProblem check{"", {}, {}, out};
  validate(check);
  return out;
}

PlanningProblem parse_problem(std::string_view text, std::span<const ActionSchema> actions) {
  auto forms = parse_sexprs(text);
  if (forms.size() != 1) {
    if (forms.empty()) throw ParseError("expected (defproblem ...)", 1, 1);
    forms[1].fail("expected a single (defproblem ...) form");
  }
  const SExpr& form = forms[0];
  if (!form.is_list || form.items.empty() || !form.items[0].is_atom("defproblem"))
    form.fail("expected (defproblem ...)");
  auto kw = keyword_args(form, 1);
  allow_only(kw, {":name", ":initial", ":goal"}, form);
  ArityTable arities;
  arities.learn(actions);
  PlanningProblem p;
  const SExpr& name = require(form, kw, ":name");
  if (!name.is_atom()) name.fail("problem name must be a symbol");
  p.name = name.atom;
  p.initial = literals_of(require(form, kw, ":initial"), &arities);
  for (std::size_t i = 0; i < p.initial.size(); ++i)
    if (!p.initial[i].is_ground()) require(form, kw, ":initial").items[i].fail("initial literals must be ground");
  p.goal = literals_of(require(form, kw, ":goal"), &arities);
  p.actions.assign(actions.begin(), actions.end());
  validate(p);
  return p;
}

Plan parse_plan(const SExpr& form) {
  if (!form.is_list || form.items.empty() || !form.items[0].is_atom("plan")) form.fail("expected (plan ...)");
  auto kw = keyword_args(form, 1);
  allow_only(kw, {":steps", ":orderings", ":bindings", ":links"}, form);
  Plan plan;
  const SExpr& steps = require(form, kw, ":steps");
  if (!steps.is_list) steps.fail("expected a list of steps");
  for (const auto& s : steps.items) {
    if (!s.is_list || s.items.size() < 2) s.fail("expected (index (head ...) :pre ... :add ... :del ...)");
    auto step = std::make_shared<Step>();
    step->index = parse_step_id(s.items[0]);
    step->head = literal_of(s.items[1], nullptr);
    auto skw = keyword_args(s, 2);
    allow_only(skw, {":pre", ":add", ":del"}, s);
    if (const SExpr* e = lookup(skw, ":pre")) step->preconds = literals_of(*e, nullptr);
    if (const SExpr* e = lookup(skw, ":add")) step->adds = literals_of(*e, nullptr);
    if (const SExpr* e = lookup(skw, ":del")) step->deletes = literals_of(*e, nullptr);
    if (plan.has_step(step->index)) s.fail("duplicate step " + step_label(step->index));
    plan.insert_step(std::move(step));
  }
  if (!plan.has_step(kInitialStep) || !plan.has_step(kGoalStep)) steps.fail("plan lacks step 0 or step G");
  if (const SExpr* e = lookup(kw, ":orderings")) {
    for (const auto& o : e->items) {
      if (!o.is_list || o.items.size() != 3) o.fail("expected (before after reason)");
      Ordering ord{parse_step_id(o.items[0]), parse_step_id(o.items[1])};
      if (!plan.has_step(ord.before) || !plan.has_step(ord.after)) o.fail("ordering names a missing step");
      if (!plan.add_ordering(ord, reason_of(o.items[2]))) o.fail("ordering creates a cycle");
    }
  }
  if (const SExpr* e = lookup(kw, ":bindings")) {
    for (const auto& b : e->items) {
      if (!b.is_list || b.items.size() != 4) b.fail("expected (= a b reason) or (<> a b reason)");
      SExpr head = b;
      head.items.pop_back();
      if (!plan.add_binding(constraint_of(head, 3), reason_of(b.items[3]))) b.fail("inconsistent binding");
    }
  }
  if (const SExpr* e = lookup(kw, ":links")) {
    for (const auto& l : e->items) {
      if (!l.is_list || l.items.size() != 3) l.fail("expected (producer (literal) consumer)");
      CausalLink link{parse_step_id(l.items[0]), literal_of(l.items[1], nullptr), parse_step_id(l.items[2])};
      if (!plan.has_step(link.producer) || !plan.has_step(link.consumer)) l.fail("link names a missing step");
      if (plan.has_link(link)) l.fail("duplicate link");
      plan.add_link(link);
    }
  }
  try {
    plan.rebuild();
  } catch (const ContractError& err) {
    form.fail(err.what());
  }
  return plan;
}

PlanLibrary parse_library(std::string_view text) {
  auto forms = parse_sexprs(text);
  PlanLibrary lib;
  if (forms.empty()) return lib;
  if (forms.size() != 1) forms[1].fail("expected a single (library ...) form");
  const SExpr& form = forms[0];
  if (!form.is_list || form.items.empty() || !form.items[0].is_atom("library")) form.fail("expected (library ...)");
  for (std::size_t i = 1; i < form.items.size(); ++i) {
    const SExpr& e = form.items[i];
    if (!e.is_list || e.items.empty() || !e.items[0].is_atom("entry")) e.fail("expected (entry ...)");
    auto kw = keyword_args(e, 1);
    allow_only(kw, {":name", ":initial", ":goal", ":plan"}, e);
    LibraryEntry entry;
    const SExpr& name = require(e, kw, ":name");
    if (!name.is_atom()) name.fail("entry name must be a symbol");
    entry.name = name.atom;
    if (lib.find(entry.name)) name.fail("duplicate entry name " + entry.name);
    entry.initial_schema = literals_of(require(e, kw, ":initial"), nullptr);
    entry.goal_schema = literals_of(require(e, kw, ":goal"), nullptr);
    entry.plan = parse_plan(require(e, kw, ":plan"));
    lib.entries.push_back(std::move(entry));
  }
  return lib;
}

std::string serialize_domain(std::span<const ActionSchema> actions) {
  std::ostringstream out;
  for (const auto& a : actions) {
    out << "(defaction :name " << a.head.str() << "\n  :preconds " << join(a.preconds) << "\n  :adds "
        << join(a.adds) << "\n  :deletes " << join(a.deletes) << "\n  :constraints (";
    for (std::size_t i = 0; i < a.constraints.size(); ++i) out << (i ? " " : "") << a.constraints[i].str();
    out << "))\n";
  }
  return out.str();
}

std::string serialize_problem(const PlanningProblem& problem) {
  return "(defproblem :name " + problem.name + "\n  :initial " + join(problem.initial) + "\n  :goal " +
         join(problem.goal) + ")\n";
}

std::string serialize_plan(const Plan& plan, std::size_t indent) {
  const std::string pad(indent, ' ');
  std::ostringstream out;
  out << "(plan\n" << pad << "  :steps (";
  bool first = true;
  for (const auto& s : plan.steps()) {
    out << (first ? "" : "\n" + pad + "    ") << '(' << step_label(s->index) << ' ' << s->head.str()
        << " :pre " << join(s->preconds) << " :add " << join(s->adds) << " :del " << join(s->deletes) << ')';
    first = false;
  }
  out << ')';
  block(out, pad, ":orderings", plan.orderings(), ordering_line);
  block(out, pad, ":bindings", plan.bindings(), binding_line);
  block(out, pad, ":links", plan.links(), [](const CausalLink& l) {
    return "(" + step_label(l.producer) + " " + l.proposition.str() + " " + step_label(l.consumer) + ")";
  });
  out << ')';
  return out.str();
}

std::string serialize_library(const PlanLibrary& library) {
  std::ostringstream out;
  out << "(library";
  for (const auto& e : library.entries) {
    out << "\n  (entry :name " << e.name << "\n    :initial " << join(e.initial_schema) << "\n    :goal "
        << join(e.goal_schema) << "\n    :plan " << serialize_plan(e.plan, 4) << ')';
  }
  out << ")\n";
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("error writing " + path.string());
}

}  // namespace spa
