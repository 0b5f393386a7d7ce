#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "twadmm/engine.hpp"
#include "twadmm/graph.hpp"

namespace twadmm {

using Projection = std::function<std::vector<double>(std::span<const double>)>;

/// Divide and concur projections over the edge vector of a graph.
/// project_divide maps messages onto the product of the left nodes'
/// constraint sets; project_concur onto per-equality-node consensus.
struct ProjectionPair {
  Projection project_divide;
  Projection project_concur;
};

// Each edge takes the mean of m over its equality node.
std::vector<double> concur_project(std::span<const double> m,
                                   const FactorGraph& graph);

// Concatenation of every left node's projection, all inputs at standard
// weight. Ties draw from `ties` (one stream per left node).
std::vector<double> divide_project(std::span<const double> n,
                                   const FactorGraph& graph,
                                   std::span<TieBreaker> ties,
                                   double rho0 = 1.0);

// Projection pair for `graph` whose tie-break streams match the engine's
// streams for the same seed.
ProjectionPair make_projection_pair(const FactorGraph& graph,
                                    std::uint64_t seed, double rho0 = 1.0);

struct DifferenceMapStep {
  std::vector<double> concur;     // P_C(m)
  std::vector<double> reflected;  // 2 P_C(m) - m, the next n messages
  std::vector<double> divided;    // P_D(reflected)
  std::vector<double> next;       // P_D(2 P_C(m) - m) - (P_C(m) - m)
};

DifferenceMapStep difference_map_step(std::span<const double> m,
                                      ProjectionPair& pair);

// m + P_D(n_next) - P_C(m): the same update split into two message steps.
std::vector<double> two_step_update(std::span<const double> m,
                                    std::span<const double> divided,
                                    std::span<const double> concur);

/// Iterates the difference map from the same starting point as the engine
/// (n0 from initial_values, m0 = P_D(n0)). Sweep counting and the residual
/// mirror Solver so iteration counts are directly comparable with a
/// single-weight run at alpha = rho0.
class DifferenceMapSolver {
 public:
  DifferenceMapSolver(const FactorGraph& graph, SolverConfig config,
                      const Priors& priors = {});

  double iterate();
  RunReport run();

  const std::vector<double>& m() const { return m_; }
  const std::vector<double>& n() const { return n_; }
  std::uint64_t iterations() const { return iterations_; }
  std::vector<double> solution() const;

 private:
  const FactorGraph& graph_;
  SolverConfig config_;
  std::shared_ptr<std::vector<TieBreaker>> ties_;
  ProjectionPair pair_;
  std::vector<double> m_, n_, concur_;
  std::uint64_t iterations_ = 0;
};

}  // namespace twadmm
