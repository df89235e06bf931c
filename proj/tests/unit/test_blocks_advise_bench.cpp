#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "spa/advise.hpp"
#include "spa/bench.hpp"
#include "spa/blocks.hpp"
#include "spa/io.hpp"

using namespace spa;

TEST_CASE("3BS has every block on the table and a two-literal goal") {
  auto p = generate_bs(3);
  CHECK(p.name == "3BS");
  CHECK(p.initial.size() == 6);
  REQUIRE(p.goal.size() == 2);
  CHECK(p.goal[0].str() == "(on B1 B2)");
  CHECK(p.goal[1].str() == "(on B2 B3)");
}

TEST_CASE("5BS1 starts with one block on another") {
  auto p = generate_bs1(5);
  std::size_t stacked = 0;
  for (const auto& l : p.initial)
    if (l.predicate().str() == "on" && l.arg(1).name.str() != "TABLE") ++stacked;
  CHECK(stacked == 1);
  CHECK(bs1_pairs(5) == 1);
  CHECK(bs1_pairs(8) == 2);
  CHECK(bs1_pairs(12) == 3);
}

TEST_CASE("xBS1 never stacks three blocks") {
  for (int x = 3; x <= 12; ++x) {
    auto p = generate_bs1(x);
    std::set<std::string> bottoms, tops;
    for (const auto& l : p.initial)
      if (l.predicate().str() == "on" && l.arg(1).name.str() != "TABLE") {
        tops.insert(l.arg(0).name.str());
        bottoms.insert(l.arg(1).name.str());
      }
    for (const auto& t : tops) CHECK_FALSE(bottoms.contains(t));
  }
}

TEST_CASE("generator range is enforced") {
  CHECK_THROWS_AS(generate_bs(2), ValidationError);
  CHECK_THROWS_AS(generate_bs1(13), ValidationError);
  CHECK(problem_by_name("7BS1").name == "7BS1");
}

TEST_CASE("small generated problems have the forward-search optimum") {
  CHECK(oracle::shortest_plan(generate_bs(3), 6) == 2u);
  for (int x = 3; x <= 5; ++x) {
    CHECK(oracle::shortest_plan(generate_bs(x), 10) == static_cast<std::size_t>(x - 1));
    CHECK(oracle::shortest_plan(generate_bs1(x), 12).has_value());
  }
}

TEST_CASE("advisability examples") {
  CHECK(advisability({3, 10, 7}));
  CHECK_FALSE(advisability({3, 10, 9}));
  for (double b : {2.0, 3.0, 10.0}) CHECK(advisability({b, 1, 0}));
  CHECK_FALSE(advisability({3, 0, 0}));
  CHECK_THROWS_AS(advisability({0.5, 1, 1}), ValidationError);
  CHECK_THROWS_AS(advisability({3, -1, 1}), ValidationError);
  CHECK(break_even_ratio(3) == doctest::Approx(std::log(3.0) / std::log(4.0)));
}

TEST_CASE("advisability is monotone in k") {
  for (int b = 2; b <= 10; ++b)
    for (int n = 0; n <= 40; ++n) {
      bool prev = true;
      for (int k = 0; k <= 40; ++k) {
        bool now = advisability({double(b), double(n), double(k)});
        CHECK_FALSE((now && !prev));
        prev = now;
      }
    }
}

TEST_CASE("huge exponents do not overflow") {
  CHECK(advisability({3, 100000, 79000}));
  CHECK_FALSE(advisability({3, 100000, 80000}));
}

TEST_CASE("CSV rows round trip and savings recompute") {
  BenchmarkRow r{"5BS1", "3BS", "adaptive", 1.25, 40, 3, 0.5};
  auto back = parse_csv_row(to_csv(r));
  CHECK(back.problem == "5BS1");
  CHECK(back.library == "3BS");
  CHECK(back.ms == 1.25);
  CHECK(back.nodes == 40);
  CHECK(back.retractions == 3);
  CHECK(back.savings == 0.5);
  BenchmarkRow fail{"8BS1", "none", "generative", std::nullopt, 100, 0, std::nullopt};
  CHECK(to_csv(fail).find("failure") != std::string::npos);
  CHECK_FALSE(parse_csv_row(to_csv(fail)).ms.has_value());
  CHECK(savings(2.0, 0.5) == doctest::Approx(0.75));
  CHECK(median({3, 1, 2}) == 2);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}

TEST_CASE("bench config parses pairs and options") {
  auto c = parse_bench_config("(bench :repetitions 2 :hooks default :fit conservative :pairs ((3BS 4BS1) (4BS 5BS1)))");
  CHECK(c.repetitions == 2);
  CHECK(c.hooks == "default");
  CHECK(c.fit == FitMode::Conservative);
  REQUIRE(c.pairs.size() == 2);
  CHECK(c.pairs[1].target == "5BS1");
}

TEST_CASE("a small benchmark emits rows that parse back") {
  auto c = parse_bench_config("(bench :repetitions 1 :pairs ((3BS 3BS)))");
  auto rows = run_benchmark(c);
  REQUIRE(rows.size() == 3);
  CHECK(rows.back().savings.has_value());
  std::istringstream csv(write_csv(rows));
  std::string line;
  std::getline(csv, line);
  CHECK(line == kCsvHeader);
  while (std::getline(csv, line)) CHECK_NOTHROW(parse_csv_row(line));
  CHECK(rows.back().retractions == 0);
}
