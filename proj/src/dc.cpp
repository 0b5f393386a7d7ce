#include "twadmm/dc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twadmm {

std::vector<double> concur_project(std::span<const double> m,
                                   const FactorGraph& graph) {
  if (m.size() != graph.edge_count()) {
    throw std::invalid_argument("concur_project: one entry per edge required");
  }
  std::vector<double> out(m.size());
  for (const RightNode& node : graph.right_nodes()) {
    double sum = 0.0;
    for (EdgeId e : node.edges) sum += m[e];
    const double mean = sum / static_cast<double>(node.edges.size());
    for (EdgeId e : node.edges) out[e] = mean;
  }
  return out;
}

std::vector<double> divide_project(std::span<const double> n,
                                   const FactorGraph& graph,
                                   std::span<TieBreaker> ties, double rho0) {
  if (n.size() != graph.edge_count()) {
    throw std::invalid_argument("divide_project: one entry per edge required");
  }
  if (ties.size() != graph.left_nodes().size()) {
    throw std::invalid_argument("divide_project: one tie stream per node");
  }
  std::vector<double> out(n.size());
  std::vector<Weight> w_in, w_out;
  const auto& left = graph.left_nodes();
  for (std::size_t i = 0; i < left.size(); ++i) {
    const LeftNode& node = left[i];
    w_in.assign(node.degree, Weight::standard(rho0));
    w_out.resize(node.degree);
    MinimizeContext ctx{rho0, ties[i]};
    node.minimizer->minimize(n.subspan(node.first_edge, node.degree), w_in,
                             std::span<double>(out).subspan(node.first_edge,
                                                            node.degree),
                             w_out, ctx);
  }
  return out;
}

ProjectionPair make_projection_pair(const FactorGraph& graph,
                                    std::uint64_t seed, double rho0) {
  auto ties = std::make_shared<std::vector<TieBreaker>>(
      make_tie_streams(graph.left_nodes().size(), seed));
  const FactorGraph* g = &graph;
  return ProjectionPair{
      [g, ties, rho0](std::span<const double> n) {
        return divide_project(n, *g, *ties, rho0);
      },
      [g](std::span<const double> m) { return concur_project(m, *g); }};
}

DifferenceMapStep difference_map_step(std::span<const double> m,
                                      ProjectionPair& pair) {
  DifferenceMapStep s;
  s.concur = pair.project_concur(m);
  s.reflected.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    s.reflected[i] = 2.0 * s.concur[i] - m[i];
  }
  s.divided = pair.project_divide(s.reflected);
  s.next.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    s.next[i] = s.divided[i] - (s.concur[i] - m[i]);
  }
  return s;
}

std::vector<double> two_step_update(std::span<const double> m,
                                    std::span<const double> divided,
                                    std::span<const double> concur) {
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out[i] = m[i] + divided[i] - concur[i];
  }
  return out;
}

DifferenceMapSolver::DifferenceMapSolver(const FactorGraph& graph,
                                         SolverConfig config,
                                         const Priors& priors)
    : graph_(graph), config_(config) {
  config_.validate();
  ties_ = std::make_shared<std::vector<TieBreaker>>(
      make_tie_streams(graph.left_nodes().size(), config_.seed));
  auto ties = ties_;
  const FactorGraph* g = &graph_;
  const double rho0 = config_.rho0;
  pair_ = ProjectionPair{
      [g, ties, rho0](std::span<const double> n) {
        return divide_project(n, *g, *ties, rho0);
      },
      [g](std::span<const double> m) { return concur_project(m, *g); }};

  const std::vector<double> init =
      initial_values(graph.variable_count(), config_.seed, priors);
  n_.resize(graph.edge_count());
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    n_[e] = init[graph.edge_variable(e)];
  }
  concur_.assign(graph.edge_count(), 0.0);
  for (const RightNode& node : graph.right_nodes()) {
    for (EdgeId e : node.edges) concur_[e] = init[graph.edge_variable(e)];
  }
}

double DifferenceMapSolver::iterate() {
  double residual = std::numeric_limits<double>::infinity();
  std::vector<double> m_next;
  if (iterations_ == 0) {
    m_next = pair_.project_divide(n_);
  } else {
    m_next = difference_map_step(m_, pair_).next;
  }
  std::vector<double> c = pair_.project_concur(m_next);
  std::vector<double> n_next(m_next.size());
  for (std::size_t i = 0; i < m_next.size(); ++i) {
    n_next[i] = 2.0 * c[i] - m_next[i];
  }
  if (iterations_ > 0) {
    residual = 0.0;
    for (std::size_t i = 0; i < m_next.size(); ++i) {
      residual = std::max(residual, std::abs(m_next[i] - m_[i]));
      residual = std::max(residual, std::abs(n_next[i] - n_[i]));
    }
  }
  m_ = std::move(m_next);
  n_ = std::move(n_next);
  concur_ = std::move(c);
  ++iterations_;
  return residual;
}

RunReport DifferenceMapSolver::run() {
  RunReport report;
  report.seed = config_.seed;
  report.config = config_;
  report.final_residual = std::numeric_limits<double>::infinity();
  while (iterations_ < config_.max_iters) {
    report.final_residual = iterate();
    if (report.final_residual <= config_.tol) {
      report.converged = true;
      break;
    }
  }
  report.iterations = iterations_;
  report.solution = solution();
  for (const TieBreaker& t : *ties_) report.tie_breaks += t.consumed();
  return report;
}

std::vector<double> DifferenceMapSolver::solution() const {
  std::vector<double> z(graph_.variable_count());
  for (std::size_t v = 0; v < graph_.variable_count(); ++v) {
    z[v] = concur_[graph_.right_nodes()[v].edges.front()];
  }
  return z;
}

}  // namespace twadmm
