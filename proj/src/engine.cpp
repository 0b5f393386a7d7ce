#include "twadmm/engine.hpp"

#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace twadmm {

const char* to_string(Mode mode) {
  return mode == Mode::ThreeWeight ? "three-weight" : "single";
}

void SolverConfig::validate() const {
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) {
    throw std::invalid_argument("rho0 must be positive and finite");
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be positive and finite");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (threads == 0) throw std::invalid_argument("threads must be >= 1");
}

std::vector<double> initial_values(std::size_t variable_count,
                                   std::uint64_t seed, const Priors& priors) {
  std::mt19937_64 rng(derive_seed(seed, 0xA11CE));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(variable_count);
  for (std::size_t v = 0; v < variable_count; ++v) {
    // Always draw so a variable's value does not depend on which others
    // carry priors.
    const double draw = unit(rng);
    values[v] = (v < priors.size() && priors[v]) ? priors[v]->value : draw;
  }
  return values;
}

std::vector<TieBreaker> make_tie_streams(std::size_t left_count,
                                         std::uint64_t seed) {
  std::vector<TieBreaker> streams;
  streams.reserve(left_count);
  for (std::size_t i = 0; i < left_count; ++i) {
    streams.emplace_back(derive_seed(seed, i));
  }
  return streams;
}

RightResult right_update(std::span<const double> m,
                         std::span<const Weight> w_right, double rho0) {
  const Average avg = dominant_average(m, w_right);
  switch (avg.level) {
    case Weight::Kind::Infinite:
      return {avg.value, Weight::infinite()};
    case Weight::Kind::Standard:
      return {avg.value, Weight::standard(rho0)};
    case Weight::Kind::Zero:
      break;
  }
  return {avg.value, Weight::zero()};
}

double u_update(const UInputs& in, const SolverConfig& config) {
  const double step = in.u + (config.alpha / config.rho0) * (in.x - in.z);
  if (config.mode == Mode::SingleWeight) return step;

  if (in.w_right.is_infinite() || in.w_left.is_infinite()) return 0.0;
  if (in.w_right.is_zero()) return 0.0;
  // Standard edge that alone decided the consensus: nothing to correct.
  if (!in.other_nonzero) return 0.0;
  return step;
}

namespace {

double max_abs_change(std::span<const double> a, std::span<const double> b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    r = std::max(r, std::abs(a[i] - b[i]));
  }
  return r;
}

}  // namespace

Solver::Solver(const FactorGraph& graph, SolverConfig config,
               const Priors& priors)
    : graph_(graph),
      config_(config),
      edges_(graph.edges()),
      ties_(make_tie_streams(graph.left_nodes().size(), config.seed)),
      z_node_(graph.variable_count()),
      w_node_(graph.variable_count()) {
  config_.validate();
  if (priors.size() > graph.variable_count()) {
    throw std::invalid_argument("more priors than variables");
  }
  standard_ = Weight::standard(config_.rho0);
  const bool single = config_.mode == Mode::SingleWeight;

  z_node_ = initial_values(graph.variable_count(), config_.seed, priors);
  for (std::size_t v = 0; v < graph.variable_count(); ++v) {
    Weight w = Weight::zero();
    if (v < priors.size() && priors[v]) w = priors[v]->weight;
    if (w.is_standard()) w = standard_;
    if (single) w = standard_;
    w_node_[v] = w;
    for (EdgeId e : graph.right_nodes()[v].edges) {
      edges_.z[e] = z_node_[v];
      edges_.u[e] = 0.0;
      edges_.n[e] = z_node_[v];
      edges_.w_left[e] = w;
    }
  }
  prev_n_ = edges_.n;
  if (config_.threads > 1) {
    arena_ = std::make_unique<tbb::task_arena>(
        static_cast<int>(config_.threads));
  }
}

template <typename Body>
void Solver::parallel_for(std::size_t count, const Body& body) {
  if (config_.threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  arena_->execute([&] {
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, count),
                      [&](const tbb::blocked_range<std::size_t>& r) {
                        for (std::size_t i = r.begin(); i != r.end(); ++i) {
                          body(i);
                        }
                      });
  });
}

void Solver::left_phase() {
  const bool single = config_.mode == Mode::SingleWeight;
  const auto& left = graph_.left_nodes();
  parallel_for(left.size(), [&](std::size_t i) {
    const LeftNode& node = left[i];
    const std::size_t first = node.first_edge;
    const std::size_t deg = node.degree;
    MinimizeContext ctx{config_.rho0, ties_[i]};
    try {
      node.minimizer->minimize(
          std::span<const double>(edges_.n).subspan(first, deg),
          std::span<const Weight>(edges_.w_left).subspan(first, deg),
          std::span<double>(edges_.x).subspan(first, deg),
          std::span<Weight>(edges_.w_right).subspan(first, deg), ctx);
    } catch (const CertaintyContradiction& ex) {
      std::ostringstream os;
      os << "left node " << i << " (" << node.minimizer->name()
         << "): " << ex.what();
      throw CertaintyContradiction(os.str());
    }
    for (std::size_t e = first; e < first + deg; ++e) {
      if (single) {
        edges_.w_right[e] = standard_;
      } else if (edges_.w_right[e].is_infinite()) {
        edges_.u[e] = 0.0;
      } else if (edges_.w_right[e].is_standard()) {
        edges_.w_right[e] = standard_;
      }
      edges_.m[e] = edges_.x[e] + edges_.u[e];
    }
  });
}

void Solver::right_phase() {
  const auto& right = graph_.right_nodes();
  parallel_for(right.size(), [&](std::size_t v) {
    thread_local std::vector<double> m;
    thread_local std::vector<Weight> w;
    const auto& ids = right[v].edges;
    m.resize(ids.size());
    w.resize(ids.size());
    std::size_t nonzero = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      m[k] = edges_.m[ids[k]];
      w[k] = edges_.w_right[ids[k]];
      if (!w[k].is_zero()) ++nonzero;
    }

    RightResult rr;
    try {
      rr = right_update(m, w, config_.rho0);
    } catch (const CertaintyContradiction& ex) {
      std::ostringstream os;
      os << "equality node " << v << ": " << ex.what();
      throw CertaintyContradiction(os.str(), static_cast<std::int64_t>(v));
    }
    z_node_[v] = rr.z;
    w_node_[v] = rr.w_left;

    for (EdgeId e : ids) {
      const bool self_nonzero = !edges_.w_right[e].is_zero();
      UInputs in{edges_.u[e],         edges_.x[e],
                 rr.z,                edges_.w_right[e],
                 rr.w_left,           nonzero - (self_nonzero ? 1 : 0) > 0};
      edges_.z[e] = rr.z;
      edges_.w_left[e] = rr.w_left;
      edges_.u[e] = u_update(in, config_);
      edges_.n[e] = rr.z - edges_.u[e];
    }
  });
}

double Solver::iterate() {
  left_phase();
  right_phase();

  double residual = std::numeric_limits<double>::infinity();
  if (!prev_m_.empty()) {
    residual = std::max(max_abs_change(edges_.m, prev_m_),
                        max_abs_change(edges_.n, prev_n_));
  }
  prev_m_ = edges_.m;
  prev_n_ = edges_.n;
  ++iterations_;
  return residual;
}

RunReport Solver::run() {
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
  report.tie_breaks = tie_breaks();
  return report;
}

std::uint64_t Solver::tie_breaks() const {
  std::uint64_t total = 0;
  for (const TieBreaker& t : ties_) total += t.consumed();
  return total;
}

std::vector<double> Solver::solution() const { return z_node_; }

RunReport solve(const FactorGraph& graph, const SolverConfig& config,
                const Priors& priors) {
  Solver solver(graph, config, priors);
  return solver.run();
}

}  // namespace twadmm
