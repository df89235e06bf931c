// spa: plan generation and adaptation from the command line.
//
// Exit codes: 0 solution found / advice given, 2 no plan, 3 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "spa/advise.hpp"
#include "spa/bench.hpp"
#include "spa/blocks.hpp"
#include "spa/engine.hpp"
#include "spa/io.hpp"

namespace {

constexpr int kExitNoPlan = 2;
constexpr int kExitInput = 3;

struct SolveArgs {
  std::string domain, problem, library, mode, strategy = "bfs", fit = "generous", hooks = "default";
  std::string trace, out, store_to;
  std::optional<std::size_t> depth_bound;
  std::size_t node_limit = 0;
};

int run_solve(const SolveArgs& a) {
  const auto actions = spa::parse_domain(spa::read_text_file(a.domain));
  const auto problem = spa::parse_problem(spa::read_text_file(a.problem), actions);

  std::string mode = a.mode.empty() ? (a.library.empty() ? "generative" : "adaptive") : a.mode;
  spa::PlanLibrary library;
  if (!a.library.empty()) library = spa::parse_library(spa::read_text_file(a.library));
  if (mode == "generative" && !a.store_to.empty())
    throw spa::ValidationError("--store-to needs --mode adaptive");

  spa::SearchOptions opts;
  opts.strategy = a.strategy == "dfid" ? spa::Strategy::IterativeDeepening : spa::Strategy::BreadthFirst;
  opts.depth_bound = a.depth_bound.value_or(2 * problem.goal.size() + 4);
  opts.node_limit = a.node_limit;
  std::unique_ptr<std::ofstream> trace;
  if (!a.trace.empty()) {
    trace = std::make_unique<std::ofstream>(a.trace);
    if (!*trace) throw spa::ValidationError("cannot write " + a.trace);
    opts.trace = trace.get();
  }
  const auto hooks = spa::hooks_by_name(a.hooks);

  spa::SearchResult result;
  if (mode == "generative") {
    result = spa::plan_generatively(problem, hooks, opts);
  } else {
    spa::AdaptOptions adapt;
    adapt.fit = a.fit == "conservative" ? spa::FitMode::Conservative : spa::FitMode::Generous;
    adapt.store = a.store_to.empty() ? spa::StorePolicy::Never : spa::StorePolicy::Always;
    auto r = spa::plan_adaptively(problem, library, hooks, opts, adapt);
    if (r.retrieved)
      std::cerr << "retrieved " << *r.retrieved << " (" << r.fit->new_open_conditions << " open conditions, "
                << r.fit->deleted_links << " links deleted by fitting)\n";
    if (!a.store_to.empty() && r.search.solved()) spa::write_text_file(a.store_to, spa::serialize_library(r.library));
    result = std::move(r.search);
  }

  const auto& s = result.stats;
  std::cerr << (result.solved() ? "solved" : result.limit_reached ? "gave up (node limit)" : "no plan")
            << ": nodes=" << s.nodes << " refinements=" << s.refinements << " retractions=" << s.retractions
            << " ms=" << s.ms << '\n';
  if (!result.solved()) return kExitNoPlan;

  std::string text = "; " + problem.name + ":";
  for (const auto& step : spa::linearize(*result.solution)) text += " " + step.str();
  text += "\n" + spa::serialize_plan(*result.solution) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    spa::write_text_file(a.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan-space planning with systematic plan adaptation"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "Solve a problem generatively or by adapting a library plan");
  cmd_solve->add_option("--domain", solve.domain, "Domain file of (defaction ...) forms")->required();
  cmd_solve->add_option("--problem", solve.problem, "Problem file with one (defproblem ...) form")->required();
  cmd_solve->add_option("--library", solve.library, "Plan library file");
  cmd_solve->add_option("--mode", solve.mode, "generative or adaptive (default: adaptive iff --library)")
      ->check(CLI::IsMember({"generative", "adaptive"}));
  cmd_solve->add_option("--strategy", solve.strategy, "bfs or dfid")->check(CLI::IsMember({"bfs", "dfid"}));
  cmd_solve->add_option("--fit", solve.fit, "Fitting mode")->check(CLI::IsMember({"conservative", "generous"}));
  cmd_solve->add_option("--depth-bound", solve.depth_bound,
                        "Max inner steps per plan; 0 = unbounded (default 2*|goal|+4)");
  cmd_solve->add_option("--node-limit", solve.node_limit, "Stop after this many dequeues (0 = none)");
  cmd_solve->add_option("--hooks", solve.hooks, "Control hooks")->check(CLI::IsMember({"default", "bottom-up"}));
  cmd_solve->add_option("--trace", solve.trace,
                        "Write a TSV trace: node, direction, plan hash, flaw or retracted reason, children");
  cmd_solve->add_option("--out", solve.out, "Write the solution here instead of stdout");
  cmd_solve->add_option("--store-to", solve.store_to, "Write the library, with the new solution added, here");

  std::string kind, gen_out, domain_out;
  int blocks = 0;
  auto* cmd_gen = app.add_subcommand("gen-bw", "Generate an xBS or xBS1 blocks-world problem");
  cmd_gen->add_option("--kind", kind, "bs or bs1")->required()->check(CLI::IsMember({"bs", "bs1"}));
  cmd_gen->add_option("--n", blocks, "Number of blocks (3..12)")->required();
  cmd_gen->add_option("--out", gen_out, "Problem file to write")->required();
  cmd_gen->add_option("--domain-out", domain_out, "Also write the blocks-world domain here");

  std::string config, csv;
  auto* cmd_bench = app.add_subcommand("bench", "Run generative-vs-adaptive benchmark pairs");
  cmd_bench->add_option("--config", config, "(bench ...) configuration file")->required();
  cmd_bench->add_option("--out", csv, "CSV output file")->required();

  spa::AdvisabilityQuery q;
  auto* cmd_advise = app.add_subcommand("advise", "Is adaptation expected to beat planning from scratch?");
  cmd_advise->add_option("--b", q.b, "Branching factor")->required();
  cmd_advise->add_option("--n", q.n, "Plan length")->required();
  cmd_advise->add_option("--k", q.k, "Estimated number of adaptations")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*cmd_solve) return run_solve(solve);
    if (*cmd_gen) {
      auto p = kind == "bs" ? spa::generate_bs(blocks) : spa::generate_bs1(blocks);
      spa::write_text_file(gen_out, spa::serialize_problem(p));
      if (!domain_out.empty()) spa::write_text_file(domain_out, spa::serialize_domain(p.actions));
      return 0;
    }
    if (*cmd_bench) {
      auto cfg = spa::parse_bench_config(spa::read_text_file(config));
      auto rows = spa::run_benchmark(cfg, &std::cerr);
      spa::write_text_file(csv, spa::write_csv(rows));
      return 0;
    }
    if (*cmd_advise) {
      bool ok = spa::advisability(q);
      std::cout << (ok ? "adapt" : "generate") << ": (b+1)^k " << (ok ? "<" : ">=") << " b^n; k/n break-even "
                << spa::break_even_ratio(q.b) << '\n';
      return 0;
    }
  } catch (const spa::ValidationError& e) {
    std::cerr << "spa: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
