#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spa/engine.hpp"

namespace spa {

struct BenchPair {
  std::string library;  // problem whose solution seeds the library
  std::string target;
};

// (bench :repetitions 5 :hooks bottom-up :fit generous :strategy bfs
//        :depth-bound 0 :node-limit 0 :pairs ((3BS 4BS1) (3BS 5BS1)))
// depth-bound 0 means 2 * |goal| + 4 for each target.
struct BenchConfig {
  std::size_t repetitions = 5;
  std::string hooks = "bottom-up";
  FitMode fit = FitMode::Generous;
  Strategy strategy = Strategy::BreadthFirst;
  std::size_t depth_bound = 0;
  std::size_t node_limit = 0;
  std::vector<BenchPair> pairs;
};

BenchConfig parse_bench_config(std::string_view text);

// One CSV line. Per-run rows leave `savings` empty; the paired row that
// closes each pair is an adaptive row carrying median times and the savings
// (s - r) / s computed from the printed medians.
struct BenchmarkRow {
  std::string problem;
  std::string library = "none";
  std::string mode;              // generative | adaptive
  std::optional<double> ms;      // empty = failure
  std::size_t nodes = 0;
  std::size_t retractions = 0;
  std::optional<double> savings;
};

inline constexpr std::string_view kCsvHeader = "problem,library,mode,ms,nodes,retractions,savings";

std::string to_csv(const BenchmarkRow& row);
BenchmarkRow parse_csv_row(std::string_view line);

// Median of a non-empty list (mean of the middle two for even sizes).
double median(std::vector<double> values);

// (s - r) / s.
double savings(double s, double r);

// Runs every pair; `progress` (optional) receives one human-readable line
// per pair.
std::vector<BenchmarkRow> run_benchmark(const BenchConfig& config, std::ostream* progress = nullptr);

std::string write_csv(const std::vector<BenchmarkRow>& rows);

}  // namespace spa
