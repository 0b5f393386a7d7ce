#pragma once

#include <tbb/task_arena.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "twadmm/graph.hpp"

namespace twadmm {

enum class Mode { ThreeWeight, SingleWeight };

const char* to_string(Mode mode);

struct SolverConfig {
  double rho0 = 1.0;
  double alpha = 1.0;
  double tol = 1e-8;
  std::uint64_t max_iters = 1'000'000;
  Mode mode = Mode::ThreeWeight;
  std::uint64_t seed = 0;
  // Worker threads for the per-phase sweeps. Results do not depend on it.
  unsigned threads = 1;

  void validate() const;
};

struct Prior {
  double value = 0.0;
  Weight weight;
};

// Indexed by variable id; empty or shorter vectors mean "no prior".
using Priors = std::vector<std::optional<Prior>>;

struct RunReport {
  std::uint64_t iterations = 0;
  bool converged = false;
  double final_residual = 0.0;
  std::vector<double> solution;  // z per variable
  std::uint64_t seed = 0;
  SolverConfig config;
  std::uint64_t tie_breaks = 0;
};

/// Starting right-to-left values, one per variable: the prior value where
/// given, otherwise a seeded uniform draw from [0, 1].
std::vector<double> initial_values(std::size_t variable_count,
                                   std::uint64_t seed, const Priors& priors);

/// Tie-break streams, one per left node, derived from the run seed.
std::vector<TieBreaker> make_tie_streams(std::size_t left_count,
                                         std::uint64_t seed);

struct RightResult {
  double z = 0.0;
  Weight w_left;  // shared by every edge of the node
};

/// Equality-node step: weighted consensus of the incoming m messages and
/// the weight sent back on each edge.
RightResult right_update(std::span<const double> m,
                         std::span<const Weight> w_right, double rho0);

struct UInputs {
  double u = 0.0;
  double x = 0.0;
  double z = 0.0;
  Weight w_right;
  Weight w_left;  // freshly computed by right_update
  // Some other edge into the same equality node carries a non-zero w_right.
  bool other_nonzero = false;
};

/// Dual update with the three-weight reset rules. In single-weight mode
/// the plain ADMM step u + (alpha / rho0)(x - z) is always taken.
double u_update(const UInputs& in, const SolverConfig& config);

/// Message-passing ADMM on a factor graph. Holds the full per-edge state;
/// each call to iterate() runs one sweep.
class Solver {
 public:
  Solver(const FactorGraph& graph, SolverConfig config,
         const Priors& priors = {});

  // One full sweep. Returns the max absolute change of any m or n message
  // (infinity on the first sweep).
  double iterate();

  RunReport run();

  const FactorGraph& graph() const { return graph_; }
  const SolverConfig& config() const { return config_; }
  const EdgeStore& edges() const { return edges_; }
  std::uint64_t iterations() const { return iterations_; }
  std::uint64_t tie_breaks() const;

  // Current right belief per variable.
  std::vector<double> solution() const;

 private:
  void left_phase();
  void right_phase();

  template <typename Body>
  void parallel_for(std::size_t count, const Body& body);

  // Not owned; must outlive the solver.
  const FactorGraph& graph_;
  SolverConfig config_;
  Weight standard_;
  EdgeStore edges_;
  std::vector<TieBreaker> ties_;
  std::unique_ptr<tbb::task_arena> arena_;
  std::vector<double> prev_m_, prev_n_;
  std::vector<double> z_node_;
  std::vector<Weight> w_node_;
  std::uint64_t iterations_ = 0;
};

RunReport solve(const FactorGraph& graph, const SolverConfig& config,
                const Priors& priors = {});

}  // namespace twadmm
