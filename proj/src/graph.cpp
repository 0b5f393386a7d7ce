#include "twadmm/graph.hpp"

#include <sstream>
#include <unordered_set>

namespace twadmm {

MinimizerResult run_minimizer(const Minimizer& minimizer,
                              std::span<const double> n,
                              std::span<const Weight> w_in, double rho0,
                              TieBreaker& ties) {
  if (n.size() != w_in.size()) {
    throw std::invalid_argument("run_minimizer: message/weight size mismatch");
  }
  MinimizerResult out{std::vector<double>(n.size()),
                      std::vector<Weight>(n.size())};
  MinimizeContext ctx{rho0, ties};
  minimizer.minimize(n, w_in, out.x, out.weight, ctx);
  return out;
}

EdgeStore::EdgeStore(std::size_t count)
    : x(count), z(count), u(count), m(count), n(count),
      w_right(count), w_left(count) {}

EdgeState EdgeStore::at(EdgeId e) const {
  return {x[e], z[e], u[e], m[e], n[e], w_right[e], w_left[e]};
}

void EdgeStore::set(EdgeId e, const EdgeState& s) {
  x[e] = s.x;
  z[e] = s.z;
  u[e] = s.u;
  m[e] = s.m;
  n[e] = s.n;
  w_right[e] = s.w_right;
  w_left[e] = s.w_left;
}

std::vector<VariableId> FactorGraph::left_variables(std::size_t node) const {
  const LeftNode& ln = left_.at(node);
  std::vector<VariableId> vars;
  vars.reserve(ln.degree);
  for (EdgeId e = ln.first_edge; e < ln.first_edge + ln.degree; ++e) {
    vars.push_back(edge_variable_[e]);
  }
  return vars;
}

FactorGraph build_graph(std::vector<LeftSpec> specs,
                        std::size_t variable_count) {
  FactorGraph g;
  g.right_.resize(variable_count);

  std::size_t total = 0;
  for (const LeftSpec& s : specs) total += s.variables.size();
  g.edge_variable_.reserve(total);
  g.edge_left_.reserve(total);
  g.left_.reserve(specs.size());

  std::unordered_set<VariableId> seen;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    LeftSpec& s = specs[i];
    std::ostringstream where;
    where << "left node " << i;
    if (!s.minimizer) throw GraphError(where.str() + " has no minimizer");
    if (s.variables.empty()) {
      throw GraphError(where.str() + " references no variables");
    }
    if (!s.minimizer->accepts_degree(s.variables.size())) {
      throw GraphError(where.str() + " (" + std::string(s.minimizer->name()) +
                       ") cannot take " + std::to_string(s.variables.size()) +
                       " variables");
    }
    seen.clear();
    LeftNode node{std::move(s.minimizer),
                  static_cast<EdgeId>(g.edge_variable_.size()),
                  static_cast<std::uint32_t>(s.variables.size())};
    for (VariableId v : s.variables) {
      if (v >= variable_count) {
        throw GraphError(where.str() + " references variable " +
                         std::to_string(v) + " out of range");
      }
      if (!seen.insert(v).second) {
        throw GraphError(where.str() + " references variable " +
                         std::to_string(v) + " twice");
      }
      const auto e = static_cast<EdgeId>(g.edge_variable_.size());
      g.edge_variable_.push_back(v);
      g.edge_left_.push_back(static_cast<std::uint32_t>(i));
      g.right_[v].edges.push_back(e);
    }
    g.left_.push_back(std::move(node));
  }

  for (std::size_t v = 0; v < variable_count; ++v) {
    if (g.right_[v].edges.empty()) {
      throw GraphError("variable " + std::to_string(v) +
                       " is not used by any cost function");
    }
  }
  g.edges_ = EdgeStore(g.edge_variable_.size());
  return g;
}

}  // namespace twadmm
