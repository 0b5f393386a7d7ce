#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "twadmm/bench.hpp"
#include "twadmm/engine.hpp"
#include "twadmm/sudoku.hpp"

using namespace twadmm;
using namespace twadmm::bench;

namespace {

const std::string kData = TWADMM_DATA_DIR;

BenchmarkRecord rec(std::string inst, std::string mode, std::uint64_t seed,
                    std::uint64_t iters, bool converged = true) {
  return {std::move(inst), std::move(mode), seed, iters, converged, 1e-9, 0.01};
}

std::string same_class(const std::string&) { return "all"; }

}  // namespace

TEST_CASE("aggregate examples") {
  // Speedups 3.0 and 1.5.
  std::vector<BenchmarkRecord> r{rec("a", "single", 1, 300), rec("a", "three-weight", 1, 100),
                                 rec("b", "single", 1, 150), rec("b", "three-weight", 1, 100)};
  auto s = aggregate(r, same_class);
  REQUIRE(s.size() == 1);
  CHECK(s[0].trials == 2);
  CHECK(s[0].median_speedup == doctest::Approx(2.25));
  CHECK(s[0].percent_improved == doctest::Approx(50.0));
  CHECK(s[0].min_speedup == doctest::Approx(1.5));
  CHECK(s[0].max_speedup == doctest::Approx(3.0));

  r = {rec("a", "single", 1, 40), rec("a", "three-weight", 1, 40),
       rec("a", "single", 2, 7), rec("a", "three-weight", 2, 7)};
  s = aggregate(r, same_class);
  REQUIRE(s.size() == 1);
  CHECK(s[0].median_speedup == 1.0);
  CHECK(s[0].percent_improved == 0.0);
}

TEST_CASE("speedups need both runs converged") {
  const std::vector<BenchmarkRecord> r{
      rec("a", "single", 1, 100, false), rec("a", "three-weight", 1, 10),
      rec("a", "single", 2, 100), rec("a", "three-weight", 2, 10, false),
      rec("a", "single", 3, 100), rec("a", "three-weight", 3, 25),
      rec("a", "dc", 3, 100), rec("b", "three-weight", 3, 25)};
  const auto s = paired_speedups(r);
  REQUIRE(s.size() == 1);
  CHECK(s[0].seed == 3);
  CHECK(s[0].value == 4.0);
}

TEST_CASE("hand-computed summary over three puzzles") {
  // easy:  p1 120/30 = 4, p1 90/45 = 2, p2 50/40 = 1.25, p2 seed 2 dropped
  //        -> median 2, one of three above 2x, range 1.25..4
  // hard:  p3 300/100 = 3, 240/80 = 3, seed 3 dropped -> median 3, 100%
  const std::vector<BenchmarkRecord> r{
      rec("p1", "single", 1, 120), rec("p1", "three-weight", 1, 30),
      rec("p1", "single", 2, 90),  rec("p1", "three-weight", 2, 45),
      rec("p2", "single", 1, 50),  rec("p2", "three-weight", 1, 40),
      rec("p2", "single", 2, 200, false), rec("p2", "three-weight", 2, 50),
      rec("p3", "single", 1, 300), rec("p3", "three-weight", 1, 100),
      rec("p3", "single", 2, 240), rec("p3", "three-weight", 2, 80),
      rec("p3", "single", 3, 240), rec("p3", "three-weight", 3, 1000, false)};
  const auto s = aggregate(r, [](const std::string& id) {
    return id == "p3" ? std::string("hard") : std::string("easy");
  });
  REQUIRE(s.size() == 2);
  CHECK(s[0].instance_class == "easy");
  CHECK(s[0].trials == 3);
  CHECK(s[0].median_speedup == 2.0);
  CHECK(s[0].percent_improved == doctest::Approx(100.0 / 3));
  CHECK(s[0].min_speedup == 1.25);
  CHECK(s[0].max_speedup == 4.0);
  CHECK(s[1].instance_class == "hard");
  CHECK(s[1].trials == 2);
  CHECK(s[1].median_speedup == 3.0);
  CHECK(s[1].percent_improved == 100.0);
}

TEST_CASE("summary of real runs matches a recomputation") {
  std::vector<BenchmarkRecord> records;
  for (const char* name : {"p00", "p03", "p08"}) {
    const auto inst = sudoku::read_instance_file(kData + "/sudoku/9x9/" + name + ".sudoku");
    const auto enc = sudoku::encode(inst);
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      for (Mode mode : {Mode::SingleWeight, Mode::ThreeWeight}) {
        SolverConfig cfg;
        cfg.mode = mode;
        cfg.seed = seed;
        const auto rep = solve(enc.graph, cfg, enc.priors);
        records.push_back({name, to_string(mode), seed, rep.iterations,
                           rep.converged, rep.final_residual, 0.0});
      }
    }
  }
  // Recompute from the raw rows: records alternate single, three-weight.
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < records.size(); i += 2) {
    REQUIRE(records[i].converged);
    REQUIRE(records[i + 1].converged);
    ratios.push_back(double(records[i].iterations) / double(records[i + 1].iterations));
  }
  std::sort(ratios.begin(), ratios.end());
  const double med = 0.5 * (ratios[2] + ratios[3]);
  const double pct = 100.0 * double(std::count_if(ratios.begin(), ratios.end(),
                                                   [](double v) { return v > 2.0; })) / 6.0;

  const auto s = aggregate(records, same_class);
  REQUIRE(s.size() == 1);
  CHECK(s[0].trials == 6);
  CHECK(s[0].median_speedup == doctest::Approx(med).epsilon(1e-15));
  CHECK(s[0].percent_improved == doctest::Approx(pct).epsilon(1e-15));
  CHECK(s[0].min_speedup == ratios.front());
  CHECK(s[0].max_speedup == ratios.back());
}

TEST_CASE("CSV round trip") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const char* modes[] = {"single", "three-weight", "dc"};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<BenchmarkRecord> records(rng() % 6);
    for (auto& r : records) {
      r.instance = "sudoku/p" + std::to_string(rng() % 100) + ".sudoku";
      r.mode = modes[rng() % 3];
      r.seed = rng();
      r.iterations = rng() % 10'000'000;
      r.converged = rng() % 2;
      const auto pick = rng() % 8;
      r.residual = pick == 0 ? std::numeric_limits<double>::infinity()
                             : std::ldexp(u(rng), -int(rng() % 60));
      r.wall_time_s = u(rng) * 100.0;
    }
    std::stringstream ss;
    write_csv(ss, records);
    const auto back = read_csv(ss);
    REQUIRE(back == records);
  }
}

TEST_CASE("CSV format") {
  std::ostringstream out;
  write_csv(out, {rec("x", "dc", 3, 12, false)});
  const std::string text = out.str();
  CHECK(text.rfind(std::string(kCsvVersion) + "\n" + kCsvColumns + "\n", 0) == 0);
  CHECK(text.find("x,dc,3,12,0,") != std::string::npos);

  std::istringstream no_header("x,dc,3,12,0,1,1\n");
  CHECK_THROWS(read_csv(no_header));
  std::istringstream short_row(std::string(kCsvColumns) + "\nx,dc,3\n");
  CHECK_THROWS(read_csv(short_row));
  CHECK_THROWS(write_csv(out, {rec("a,b", "dc", 1, 1)}));
}

TEST_CASE("median") {
  CHECK(std::isnan(median({})));
  CHECK(median({5.0}) == 5.0);
  CHECK(median({4.0, 1.0, 3.0}) == 3.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
}
