#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twadmm/tie_breaker.hpp"
#include "twadmm/weight.hpp"

namespace twadmm {

using VariableId = std::uint32_t;
using EdgeId = std::uint32_t;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A cost function's proximal step cannot be computed because the cost
/// plus the weighted penalty is unbounded below (or has no unique minimum).
class UnboundedCost : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MinimizeContext {
  double rho0 = 1.0;
  TieBreaker& ties;
};

/// Local solver for one left node. Given the right-to-left messages `n`
/// and their weights, writes the node's beliefs `x_out` and the weights it
/// attaches to them, one entry per incident edge in incidence order.
class Minimizer {
 public:
  virtual ~Minimizer() = default;

  virtual std::string_view name() const = 0;

  // Whether a node of this kind may have `degree` incident edges.
  virtual bool accepts_degree(std::size_t degree) const { return degree >= 1; }

  virtual void minimize(std::span<const double> n, std::span<const Weight> w_in,
                        std::span<double> x_out, std::span<Weight> w_out,
                        MinimizeContext& ctx) const = 0;
};

struct MinimizerResult {
  std::vector<double> x;
  std::vector<Weight> weight;
};

// Allocating convenience wrapper around Minimizer::minimize.
MinimizerResult run_minimizer(const Minimizer& minimizer,
                              std::span<const double> n,
                              std::span<const Weight> w_in, double rho0,
                              TieBreaker& ties);

struct EdgeState {
  double x = 0.0;
  double z = 0.0;
  double u = 0.0;
  double m = 0.0;
  double n = 0.0;
  Weight w_right;  // attached to m
  Weight w_left;   // attached to n
};

/// Per-edge solver state, one array per field, indexed by edge id.
struct EdgeStore {
  std::vector<double> x, z, u, m, n;
  std::vector<Weight> w_right, w_left;

  explicit EdgeStore(std::size_t count = 0);

  std::size_t size() const { return x.size(); }
  EdgeState at(EdgeId e) const;
  void set(EdgeId e, const EdgeState& s);
};

struct LeftSpec {
  std::shared_ptr<const Minimizer> minimizer;
  std::vector<VariableId> variables;
};

// Edges of a left node are contiguous: [first_edge, first_edge + degree).
struct LeftNode {
  std::shared_ptr<const Minimizer> minimizer;
  EdgeId first_edge = 0;
  std::uint32_t degree = 0;
};

struct RightNode {
  std::vector<EdgeId> edges;
};

/// Bipartite Forney-style graph: cost functions on the left, one equality
/// node per original variable on the right, one edge per incidence.
class FactorGraph {
 public:
  FactorGraph() = default;

  const std::vector<LeftNode>& left_nodes() const { return left_; }
  const std::vector<RightNode>& right_nodes() const { return right_; }

  std::size_t edge_count() const { return edge_variable_.size(); }
  std::size_t variable_count() const { return right_.size(); }

  VariableId edge_variable(EdgeId e) const { return edge_variable_[e]; }
  std::uint32_t edge_left_node(EdgeId e) const { return edge_left_[e]; }

  // Variables seen by a left node, in incidence order.
  std::vector<VariableId> left_variables(std::size_t node) const;

  // Zero-initialized state sized for this graph.
  const EdgeStore& edges() const { return edges_; }

 private:
  friend FactorGraph build_graph(std::vector<LeftSpec> specs,
                                 std::size_t variable_count);

  std::vector<LeftNode> left_;
  std::vector<RightNode> right_;
  std::vector<VariableId> edge_variable_;
  std::vector<std::uint32_t> edge_left_;
  EdgeStore edges_;
};

/// Builds the graph with one right node per variable and one edge per
/// (cost function, variable) incidence. Edge ids follow left-node order.
FactorGraph build_graph(std::vector<LeftSpec> specs,
                        std::size_t variable_count);

}  // namespace twadmm
