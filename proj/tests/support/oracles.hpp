#pragma once

// Independent reference computations used only by tests. Nothing here may
// call into the solver paths it is used to check.

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "twadmm/costs.hpp"
#include "twadmm/graph.hpp"

namespace oracle {

// ---- Sudoku ---------------------------------------------------------------

// Naked and hidden singles until nothing changes. Returns the grid reached
// (0 for cells left open); `complete` tells whether every cell was filled.
struct Propagation {
  std::vector<int> grid;
  bool complete = false;
};
Propagation propagate_singles(int n, std::vector<int> grid);

// Number of solutions, stopping at `limit`.
int count_solutions(int n, std::vector<int> grid, int limit = 2);

// First solution found by backtracking, empty if none.
std::vector<int> backtrack_solve(int n, std::vector<int> grid);

// ---- Convex quadratics ----------------------------------------------------

struct QuadraticProblem {
  std::vector<twadmm::LeftSpec> specs;
  std::size_t variables = 0;
  Eigen::VectorXd optimum;  // argmin of the summed costs
};

// Random sum of positive definite quadratics over overlapping variable
// subsets; the optimum comes from the assembled normal equations.
QuadraticProblem random_quadratic_problem(std::mt19937_64& rng,
                                          std::size_t variables,
                                          std::size_t terms);

// ---- Packing --------------------------------------------------------------

// min |a'-a|^2 + |b'-b|^2 subject to |a'-b'| >= 2r, by a dense angle scan
// over the separation direction followed by golden-section refinement.
// Returns the optimal cost.
double pair_projection_cost(const std::vector<double>& a,
                            const std::vector<double>& b, double radius);

// ---- Consensus ------------------------------------------------------------

// Least-squares projection onto vectors constant on each equality node,
// solved as a dense linear least-squares problem.
std::vector<double> consensus_least_squares(std::span<const double> m,
                                            const twadmm::FactorGraph& graph);

}  // namespace oracle
