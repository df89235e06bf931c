#include "spa/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "spa/blocks.hpp"
#include "spa/sexpr.hpp"

namespace spa {

namespace {

std::size_t count_of(const SExpr& e) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(e.atom.data(), e.atom.data() + e.atom.size(), v);
  if (!e.is_atom() || ec != std::errc{} || ptr != e.atom.data() + e.atom.size()) e.fail("expected a count");
  return v;
}

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

double parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ValidationError("bad number in CSV: '" + std::string(s) + "'");
  return v;
}

std::size_t parse_count(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ValidationError("bad count in CSV: '" + std::string(s) + "'");
  return v;
}

// Value as it will read back from the CSV.
double printed(double ms) { return parse_double(fixed3(ms)); }

}  // namespace

BenchConfig parse_bench_config(std::string_view text) {
  auto forms = parse_sexprs(text);
  if (forms.size() != 1 || !forms[0].is_list || forms[0].items.empty() || !forms[0].items[0].is_atom("bench"))
    throw ParseError("expected a single (bench ...) form", 1, 1);
  BenchConfig c;
  for (const auto& [key, value] : keyword_args(forms[0], 1)) {
    const SExpr& v = *value;
    if (key == ":repetitions") {
      c.repetitions = count_of(v);
      if (c.repetitions == 0) v.fail("repetitions must be positive");
    } else if (key == ":hooks") {
      if (!v.is_atom()) v.fail("expected a hook set name");
      hooks_by_name(v.atom);
      c.hooks = v.atom;
    } else if (key == ":fit") {
      if (v.is_atom("generous"))
        c.fit = FitMode::Generous;
      else if (v.is_atom("conservative"))
        c.fit = FitMode::Conservative;
      else
        v.fail("expected generous or conservative");
    } else if (key == ":strategy") {
      if (v.is_atom("bfs"))
        c.strategy = Strategy::BreadthFirst;
      else if (v.is_atom("dfid"))
        c.strategy = Strategy::IterativeDeepening;
      else
        v.fail("expected bfs or dfid");
    } else if (key == ":depth-bound") {
      c.depth_bound = count_of(v);
    } else if (key == ":node-limit") {
      c.node_limit = count_of(v);
    } else if (key == ":pairs") {
      if (!v.is_list) v.fail("expected a list of (library target) pairs");
      for (const auto& p : v.items) {
        if (!p.is_list || p.items.size() != 2 || !p.items[0].is_atom() || !p.items[1].is_atom())
          p.fail("expected (library target)");
        problem_by_name(p.items[0].atom);
        problem_by_name(p.items[1].atom);
        c.pairs.push_back({p.items[0].atom, p.items[1].atom});
      }
    } else {
      v.fail("unknown bench option " + key);
    }
  }
  return c;
}

std::string to_csv(const BenchmarkRow& row) {
  std::string s = row.problem + "," + row.library + "," + row.mode + ",";
  s += row.ms ? fixed3(*row.ms) : "failure";
  s += "," + std::to_string(row.nodes) + "," + std::to_string(row.retractions) + ",";
  if (row.savings) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", *row.savings);
    s += buf;
  }
  return s;
}

BenchmarkRow parse_csv_row(std::string_view line) {
  std::vector<std::string_view> f;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (f.size() != 7) throw ValidationError("CSV row needs 7 fields: '" + std::string(line) + "'");
  if (f[2] != "generative" && f[2] != "adaptive") throw ValidationError("bad mode in CSV: " + std::string(f[2]));
  BenchmarkRow r;
  r.problem = f[0];
  r.library = f[1];
  r.mode = f[2];
  if (f[3] != "failure") r.ms = parse_double(f[3]);
  r.nodes = parse_count(f[4]);
  r.retractions = parse_count(f[5]);
  if (!f[6].empty()) r.savings = parse_double(f[6]);
  return r;
}

double median(std::vector<double> v) {
  if (v.empty()) throw ContractError("median of an empty list");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

double savings(double s, double r) { return (s - r) / s; }

std::vector<BenchmarkRow> run_benchmark(const BenchConfig& config, std::ostream* progress) {
  const ControlHooks hooks = hooks_by_name(config.hooks);
  std::vector<BenchmarkRow> rows;
  std::map<std::string, std::optional<Plan>> solved;  // library problem -> solution

  for (const auto& pair : config.pairs) {
    const PlanningProblem target = problem_by_name(pair.target);
    SearchOptions opts;
    opts.strategy = config.strategy;
    opts.node_limit = config.node_limit;
    opts.depth_bound = config.depth_bound ? config.depth_bound : 2 * target.goal.size() + 4;

    const PlanningProblem source = problem_by_name(pair.library);
    if (!solved.contains(pair.library)) {
      SearchOptions src = opts;
      src.depth_bound = config.depth_bound ? config.depth_bound : 2 * source.goal.size() + 4;
      solved[pair.library] = plan_generatively(source, hooks, src).solution;
    }
    PlanLibrary library;
    if (const auto& sol = solved[pair.library]) library = store(library, *sol, source, StorePolicy::Always);

    const AdaptOptions adapt{config.fit, MappingMode::Greedy, StorePolicy::Never};
    // One untimed run of each mode first, so allocator and cache warm-up
    // does not land in the first timed repetition.
    plan_generatively(target, hooks, opts);
    if (!library.empty()) plan_adaptively(target, library, hooks, opts, adapt);

    std::vector<double> gen_ms, ada_ms, ada_nodes, ada_retr;
    bool gen_failed = false, ada_failed = false;
    for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
      auto g = plan_generatively(target, hooks, opts);
      BenchmarkRow gr{target.name, "none", "generative", std::nullopt, g.stats.nodes, g.stats.retractions, {}};
      if (g.solved()) {
        gr.ms = g.stats.ms;
        gen_ms.push_back(printed(g.stats.ms));
      } else {
        gen_failed = true;
      }
      rows.push_back(gr);

      BenchmarkRow ar{target.name, pair.library, "adaptive", std::nullopt, 0, 0, {}};
      if (library.empty()) {
        ada_failed = true;
      } else {
        auto a = plan_adaptively(target, library, hooks, opts, adapt);
        ar.nodes = a.search.stats.nodes;
        ar.retractions = a.search.stats.retractions;
        if (a.search.solved()) {
          ar.ms = a.search.stats.ms;
          ada_ms.push_back(printed(a.search.stats.ms));
          ada_nodes.push_back(static_cast<double>(a.search.stats.nodes));
          ada_retr.push_back(static_cast<double>(a.search.stats.retractions));
        } else {
          ada_failed = true;
        }
      }
      rows.push_back(ar);
    }

    BenchmarkRow paired{target.name, pair.library, "adaptive", std::nullopt, 0, 0, {}};
    if (!gen_failed && !ada_failed) {
      const double s = median(gen_ms), r = printed(median(ada_ms));
      paired.ms = r;
      paired.nodes = static_cast<std::size_t>(median(ada_nodes));
      paired.retractions = static_cast<std::size_t>(median(ada_retr));
      if (s > 0) paired.savings = savings(s, r);
    }
    rows.push_back(paired);
    if (progress) {
      *progress << pair.library << " -> " << pair.target << ": ";
      if (paired.savings)
        *progress << "savings " << fixed3(*paired.savings * 100) << "%\n";
      else
        *progress << "no savings figure (failure or zero time)\n";
    }
  }
  return rows;
}

std::string write_csv(const std::vector<BenchmarkRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) out += to_csv(r) + '\n';
  return out;
}

}  // namespace spa
