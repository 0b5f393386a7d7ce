// twadmm: solve Sudoku and circle-packing instances with message-passing
// ADMM and benchmark the single-weight, three-weight and difference-map
// variants against each other.

#include <CLI11.hpp>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "twadmm/bench.hpp"
#include "twadmm/dc.hpp"
#include "twadmm/engine.hpp"
#include "twadmm/packing.hpp"
#include "twadmm/sudoku.hpp"

namespace fs = std::filesystem;
using namespace twadmm;

namespace {

enum Exit : int {
  kOk = 0,
  kIterationCap = 1,
  kContradiction = 2,
  kNotVerified = 3,
  kInputError = 4,
};

struct Options {
  std::string domain;
  std::vector<std::string> paths;
  std::vector<std::string> modes;
  double rho0 = 1.0;
  std::optional<double> alpha;
  bool alpha_equals_rho = false;
  std::optional<double> tol;
  std::uint64_t max_iters = 1'000'000;
  std::uint64_t seed = 1;
  std::uint64_t seeds = 1;
  std::string out = ".";
  unsigned threads = 1;
};

// A parsed instance of either domain.
struct Problem {
  std::string id;
  std::string instance_class;
  std::optional<sudoku::Instance> puzzle;
  std::optional<packing::Instance> circles;
};

struct Outcome {
  RunReport report;
  bool contradiction = false;
  std::string error;
  bool verified = false;
  double wall_time_s = 0.0;
};

SolverConfig make_config(const Options& o, const std::string& mode,
                         std::uint64_t seed, unsigned threads) {
  SolverConfig c;
  c.rho0 = o.rho0;
  const bool packing = o.domain == "packing";
  c.alpha = packing ? 0.01 : o.rho0;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.alpha_equals_rho) c.alpha = o.rho0;
  c.tol = o.tol.value_or(packing ? 1e-11 : 1e-8);
  c.max_iters = o.max_iters;
  c.mode = mode == "three-weight" ? Mode::ThreeWeight : Mode::SingleWeight;
  c.seed = seed;
  c.threads = threads;
  c.validate();
  return c;
}

Problem load(const std::string& domain, const fs::path& path) {
  Problem p;
  p.id = path.filename().string();
  if (domain == "sudoku") {
    p.puzzle = sudoku::read_instance_file(path.string());
    const auto n = std::to_string(p.puzzle->n);
    p.instance_class = n + "x" + n;
    if (!p.puzzle->difficulty.empty()) p.instance_class += "/" + p.puzzle->difficulty;
  } else {
    p.circles = packing::read_instance_file(path.string());
    p.instance_class = "n=" + std::to_string(p.circles->n);
  }
  return p;
}

Outcome run_one(const Problem& p, const std::string& mode,
                const SolverConfig& cfg) {
  Outcome out;
  FactorGraph graph;
  Priors priors;
  if (p.puzzle) {
    auto enc = sudoku::encode(*p.puzzle);
    graph = std::move(enc.graph);
    priors = std::move(enc.priors);
  } else {
    auto enc = packing::encode(*p.circles, cfg.seed);
    graph = std::move(enc.graph);
    priors = std::move(enc.priors);
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (mode == "dc") {
      DifferenceMapSolver dm(graph, cfg, priors);
      out.report = dm.run();
    } else {
      out.report = solve(graph, cfg, priors);
    }
  } catch (const CertaintyContradiction& ex) {
    out.contradiction = true;
    out.error = ex.what();
    out.report.final_residual = std::numeric_limits<double>::infinity();
    out.report.seed = cfg.seed;
  }
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (!out.contradiction) {
    out.verified = p.puzzle ? sudoku::verify(*p.puzzle, out.report.solution)
                            : packing::verify(*p.circles, out.report.solution, 1e-8);
  }
  return out;
}

int exit_code(const Outcome& o) {
  if (o.contradiction) return kContradiction;
  if (!o.report.converged) return kIterationCap;
  if (!o.verified) return kNotVerified;
  return kOk;
}

// Files named on the command line, files inside directories (sorted), and
// the entries of .list files (resolved against the list's directory).
std::vector<fs::path> expand(const std::string& domain,
                             const std::vector<std::string>& paths) {
  const std::string ext = "." + domain;
  std::vector<fs::path> out;
  for (const auto& raw : paths) {
    const fs::path p(raw);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ext) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (p.extension() == ".list") {
      std::ifstream in(p);
      if (!in) throw std::runtime_error("cannot open " + raw);
      std::string line;
      while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string entry;
        if (ls >> entry) out.push_back(p.parent_path() / entry);
      }
    } else {
      out.push_back(p);
    }
  }
  if (out.empty()) throw std::runtime_error("no instances found");
  return out;
}

int cmd_solve(const Options& o) {
  const std::string mode = o.modes.empty() ? "three-weight" : o.modes.front();
  const auto problem = load(o.domain, o.paths.front());
  const auto cfg = make_config(o, mode, o.seed, o.threads);
  const Outcome res = run_one(problem, mode, cfg);

  if (!res.contradiction) {
    fs::create_directories(o.out);
    const fs::path file = fs::path(o.out) / (fs::path(problem.id).stem().string() + ".solution");
    std::ofstream f(file);
    if (problem.puzzle) {
      sudoku::write_grid(f, problem.puzzle->n,
                         sudoku::decode(problem.puzzle->n, res.report.solution));
    } else {
      packing::write_solution(f, *problem.circles, res.report.solution);
    }
    if (!f) throw std::runtime_error("cannot write " + file.string());
  }

  std::cout << problem.id << " mode=" << mode << " seed=" << cfg.seed
            << " iterations=" << res.report.iterations
            << " converged=" << (res.report.converged ? 1 : 0)
            << " residual=" << std::setprecision(3) << res.report.final_residual
            << " verified=" << (res.verified ? 1 : 0) << '\n';
  if (res.contradiction) std::cerr << "contradiction: " << res.error << '\n';
  return exit_code(res);
}

void write_scaling(std::ostream& out, const std::vector<bench::BenchmarkRecord>& rows,
                   const std::map<std::string, std::size_t>& sizes) {
  // Median iterations over converged runs, per instance size and mode.
  std::map<std::size_t, std::map<std::string, std::vector<double>>> by_n;
  std::map<std::size_t, std::map<std::string, std::size_t>> runs;
  std::vector<std::string> modes;
  for (const auto& r : rows) {
    const std::size_t n = sizes.at(r.instance);
    ++runs[n][r.mode];
    if (std::find(modes.begin(), modes.end(), r.mode) == modes.end()) modes.push_back(r.mode);
    if (r.converged) by_n[n][r.mode].push_back(static_cast<double>(r.iterations));
  }
  out << std::left << std::setw(8) << "n";
  for (const auto& m : modes) out << std::right << std::setw(22) << (m + " median");
  out << '\n';
  for (const auto& [n, count] : runs) {
    out << std::left << std::setw(8) << n << std::right;
    for (const auto& m : modes) {
      const auto it = by_n[n].find(m);
      const std::size_t ok = it == by_n[n].end() ? 0 : it->second.size();
      std::ostringstream cell;
      if (ok) cell << std::fixed << std::setprecision(0) << bench::median(it->second);
      else cell << '-';
      cell << " (" << ok << "/" << count.at(m) << ")";
      out << std::setw(22) << cell.str();
    }
    out << '\n';
  }
}

int cmd_bench(const Options& o) {
  std::vector<std::string> modes = o.modes;
  if (modes.empty()) modes = {"single", "three-weight"};

  std::vector<Problem> problems;
  for (const auto& path : expand(o.domain, o.paths)) problems.push_back(load(o.domain, path));

  struct Job {
    std::size_t problem;
    std::string mode;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    for (std::uint64_t s = 0; s < o.seeds; ++s) {
      for (const auto& m : modes) jobs.push_back({i, m, o.seed + s});
    }
  }
  // Validate flags once before starting workers.
  (void)make_config(o, modes.front(), o.seed, 1);

  std::vector<Outcome> results(jobs.size());
  tbb::task_arena arena(static_cast<int>(o.threads));
  arena.execute([&] {
    tbb::parallel_for(std::size_t{0}, jobs.size(), [&](std::size_t k) {
      const Job& j = jobs[k];
      results[k] = run_one(problems[j.problem], j.mode, make_config(o, j.mode, j.seed, 1));
    });
  });

  std::vector<bench::BenchmarkRecord> rows;
  std::map<std::string, std::string> classes;
  std::map<std::string, std::size_t> sizes;
  int code = kOk;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const Problem& p = problems[jobs[k].problem];
    const Outcome& r = results[k];
    rows.push_back({p.id, jobs[k].mode, jobs[k].seed, r.report.iterations,
                    r.report.converged, r.report.final_residual, r.wall_time_s});
    classes[p.id] = p.instance_class;
    sizes[p.id] = p.puzzle ? static_cast<std::size_t>(p.puzzle->n) : p.circles->n;
    const int c = exit_code(r);
    if (c == kNotVerified || (c == kContradiction && code != kNotVerified) ||
        (c == kIterationCap && code == kOk)) {
      code = c;
    }
    if (r.contradiction) {
      std::cerr << p.id << " " << jobs[k].mode << " seed " << jobs[k].seed
                << ": contradiction: " << r.error << '\n';
    }
  }

  fs::create_directories(o.out);
  const fs::path csv = fs::path(o.out) / "bench.csv";
  {
    std::ofstream f(csv);
    bench::write_csv(f, rows);
    if (!f) throw std::runtime_error("cannot write " + csv.string());
  }

  const auto summary = bench::aggregate(
      rows, [&](const std::string& id) { return classes.at(id); });
  std::ostringstream text;
  text << "runs " << rows.size() << ", csv " << csv.string() << '\n';
  bench::write_summary(text, summary);
  if (o.domain == "packing") {
    text << '\n';
    write_scaling(text, rows, sizes);
  }
  std::ofstream(fs::path(o.out) / "summary.txt") << text.str();
  std::cout << text.str();
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-weight message-passing ADMM: solver and benchmark driver"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("domain", o.domain, "Problem family")
        ->required()
        ->check(CLI::IsMember({"sudoku", "packing"}));
    sub->add_option("--rho0", o.rho0, "Standard weight")->check(CLI::PositiveNumber);
    sub->add_option("--alpha", o.alpha, "Dual step (default: rho0 for sudoku, 0.01 for packing)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--alpha-equals-rho", o.alpha_equals_rho, "Set alpha to rho0");
    sub->add_option("--tol", o.tol, "Residual tolerance (default: 1e-8 sudoku, 1e-11 packing)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", o.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed (first seed for bench)");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  add_common(solve_cmd);
  solve_cmd->add_option("file", o.paths, "Instance file")->required()->expected(1);
  solve_cmd->add_option("--mode", o.modes, "single | three-weight | dc")
      ->expected(1)
      ->check(CLI::IsMember({"single", "three-weight", "dc"}));

  auto* bench_cmd = app.add_subcommand("bench", "Run a seed x mode matrix");
  add_common(bench_cmd);
  bench_cmd->add_option("paths", o.paths, "Instance files, directories or .list files")
      ->required();
  bench_cmd->add_option("--mode", o.modes, "Mode to run (repeatable; default single and three-weight)")
      ->check(CLI::IsMember({"single", "three-weight", "dc"}));
  bench_cmd->add_option("--seeds", o.seeds, "Seeds per instance and mode")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    return solve_cmd->parsed() ? cmd_solve(o) : cmd_bench(o);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kInputError;
  }
}
