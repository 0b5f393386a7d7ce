#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "twadmm/dc.hpp"
#include "twadmm/engine.hpp"
#include "twadmm/packing.hpp"
#include "twadmm/sudoku.hpp"
#include "twadmm/weight.hpp"

namespace props {

using twadmm::Weight;

namespace {

Weight random_weight(std::mt19937_64& rng, double p_inf, double p_zero) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  if (r < p_inf) return Weight::infinite();
  if (r < p_inf + p_zero) return Weight::zero();
  return Weight::standard(1.0);
}

// A valid filled 4x4 or 9x9 grid: the backtracking solution of the empty
// grid with digits relabeled and rows/columns shuffled inside their bands.
std::vector<int> random_solution(std::mt19937_64& rng, int n) {
  const int s = n == 4 ? 2 : 3;
  const auto base = oracle::backtrack_solve(n, std::vector<int>(n * n, 0));
  std::vector<int> digits(n);
  std::iota(digits.begin(), digits.end(), 1);
  std::shuffle(digits.begin(), digits.end(), rng);
  auto band_order = [&] {
    std::vector<int> bands(s), order;
    std::iota(bands.begin(), bands.end(), 0);
    std::shuffle(bands.begin(), bands.end(), rng);
    for (int b : bands) {
      std::vector<int> inner(s);
      std::iota(inner.begin(), inner.end(), 0);
      std::shuffle(inner.begin(), inner.end(), rng);
      for (int i : inner) order.push_back(b * s + i);
    }
    return order;
  };
  const auto rows = band_order();
  const auto cols = band_order();
  std::vector<int> g(n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g[r * n + c] = digits[base[rows[r] * n + cols[c]] - 1];
  }
  return g;
}

twadmm::sudoku::Instance random_puzzle(std::mt19937_64& rng, double keep) {
  twadmm::sudoku::Instance inst;
  inst.n = 4;
  inst.cells = random_solution(rng, 4);
  std::bernoulli_distribution clue(keep);
  for (int& v : inst.cells) {
    if (!clue(rng)) v = 0;
  }
  return inst;
}

twadmm::packing::Instance random_packing(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> count(2, 6);
  std::uniform_real_distribution<double> radius(0.05, 0.25);
  twadmm::packing::Instance inst;
  inst.n = count(rng);
  inst.radius = radius(rng);
  return inst;
}

std::string describe(std::size_t k, const std::string& what) {
  std::ostringstream os;
  os << "case " << k << ": " << what;
  return os.str();
}

}  // namespace

Result dominant_average_laws(std::uint64_t seed, std::size_t cases) {
  Result res{"dominant_average laws", 0, 0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  std::bernoulli_distribution conflict(0.1);

  for (std::size_t k = 0; k < cases; ++k, ++res.cases) {
    const std::size_t len = size(rng);
    std::vector<double> v(len);
    std::vector<Weight> w(len);
    const double certain = value(rng);
    bool any_inf = false, any_std = false;
    for (std::size_t i = 0; i < len; ++i) {
      w[i] = random_weight(rng, 0.25, 0.3);
      v[i] = w[i].is_infinite() ? certain : value(rng);
      any_inf = any_inf || w[i].is_infinite();
      any_std = any_std || w[i].is_standard();
    }
    const bool contradict = any_inf && conflict(rng);
    if (contradict) {
      v.push_back(certain + 1e-6);
      w.push_back(Weight::infinite());
      try {
        (void)twadmm::dominant_average(v, w);
        res.fail(describe(k, "disagreeing certainties did not throw"));
      } catch (const twadmm::CertaintyContradiction&) {
      }
      continue;
    }

    // Expected value from first principles.
    double expect = 0.0;
    Weight::Kind level = Weight::Kind::Zero;
    if (any_inf) {
      expect = certain;
      level = Weight::Kind::Infinite;
    } else {
      double sum = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = 0; i < len; ++i) {
        if (!any_std || w[i].is_standard()) {
          sum += v[i];
          ++cnt;
        }
      }
      expect = sum / static_cast<double>(cnt);
      level = any_std ? Weight::Kind::Standard : Weight::Kind::Zero;
    }

    const auto got = twadmm::dominant_average(v, w);
    if (got.level != level || std::abs(got.value - expect) > 1e-12) {
      res.fail(describe(k, "value or level differs from the direct mean"));
      continue;
    }

    // Order does not matter.
    std::vector<std::size_t> perm(len);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pv(len);
    std::vector<Weight> pw(len);
    for (std::size_t i = 0; i < len; ++i) {
      pv[i] = v[perm[i]];
      pw[i] = w[perm[i]];
    }
    const auto shuffled = twadmm::dominant_average(pv, pw);
    if (shuffled.level != got.level || std::abs(shuffled.value - got.value) > 1e-12) {
      res.fail(describe(k, "permutation changed the average"));
      continue;
    }

    // Extra zero-weight entries are ignored once anything is non-zero.
    if (any_inf || any_std) {
      pv.push_back(value(rng) * 100.0);
      pw.push_back(Weight::zero());
      const auto padded = twadmm::dominant_average(pv, pw);
      if (padded.level != got.level || std::abs(padded.value - got.value) > 1e-12) {
        res.fail(describe(k, "a zero-weight entry changed the average"));
      }
    }
  }
  return res;
}

Result u_reset_postconditions(std::uint64_t seed, std::size_t cases) {
  Result res{"u-reset postconditions", 0, 0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> keep(0.2, 0.7);

  for (std::size_t k = 0; k < cases; ++k, ++res.cases) {
    twadmm::SolverConfig cfg;
    cfg.mode = twadmm::Mode::ThreeWeight;
    cfg.seed = rng();
    std::uniform_real_distribution<double> a(0.05, 1.0);
    cfg.alpha = a(rng);

    twadmm::FactorGraph graph;
    twadmm::Priors priors;
    if (k % 2 == 0) {
      auto enc = twadmm::sudoku::encode(random_puzzle(rng, keep(rng)));
      graph = std::move(enc.graph);
      priors = std::move(enc.priors);
    } else {
      auto enc = twadmm::packing::encode(random_packing(rng), cfg.seed);
      graph = std::move(enc.graph);
      priors = std::move(enc.priors);
    }

    try {
      twadmm::Solver solver(graph, cfg, priors);
      for (int sweep = 0; sweep < 6; ++sweep) {
        solver.iterate();
        const auto& e = solver.edges();
        for (const auto& node : graph.right_nodes()) {
          std::size_t nonzero = 0;
          for (auto id : node.edges) nonzero += !e.w_right[id].is_zero();
          for (auto id : node.edges) {
            const bool must_reset =
                e.w_right[id].is_infinite() || e.w_left[id].is_infinite() ||
                e.w_right[id].is_zero() || nonzero == 1;
            if (must_reset && e.u[id] != 0.0) {
              res.fail(describe(k, "u not reset on edge " + std::to_string(id)));
              sweep = 6;
              break;
            }
          }
          if (sweep == 6) break;
        }
      }
    } catch (const std::exception& ex) {
      res.fail(describe(k, std::string("solver threw: ") + ex.what()));
    }
  }
  return res;
}

Result difference_map_identity(std::uint64_t seed, std::size_t cases) {
  Result res{"difference-map two-step identity", 0, 0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-0.5, 1.5);
  std::uniform_real_distribution<double> keep(0.0, 0.6);

  for (std::size_t k = 0; k < cases; ++k, ++res.cases) {
    twadmm::FactorGraph graph;
    if (k % 2 == 0) {
      graph = twadmm::sudoku::encode(random_puzzle(rng, keep(rng))).graph;
    } else {
      graph = twadmm::packing::encode(random_packing(rng), 0).graph;
    }
    std::vector<double> m(graph.edge_count());
    for (double& x : m) x = value(rng);
    const std::uint64_t run_seed = rng();

    // Two message steps with the consensus computed by least squares.
    const auto concur = oracle::consensus_least_squares(m, graph);
    std::vector<double> n(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) n[i] = 2.0 * concur[i] - m[i];
    auto ties = twadmm::make_tie_streams(graph.left_nodes().size(), run_seed);
    const auto x = twadmm::divide_project(n, graph, ties);
    std::vector<double> expect(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) expect[i] = m[i] + x[i] - concur[i];

    auto pair = twadmm::make_projection_pair(graph, run_seed);
    const auto step = twadmm::difference_map_step(m, pair);
    const auto split = twadmm::two_step_update(m, step.divided, step.concur);
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      worst = std::max({worst, std::abs(step.next[i] - expect[i]),
                        std::abs(split[i] - expect[i])});
    }
    if (worst > 1e-12) {
      std::ostringstream os;
      os << "forms differ by " << worst;
      res.fail(describe(k, os.str()));
    }
  }
  return res;
}

Result one_on_soundness(std::uint64_t seed, std::size_t cases) {
  Result res{"one-on infinite-emission soundness", 0, 0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> degree(2, 7);
  std::uniform_int_distribution<int> coarse(0, 4);
  std::uniform_real_distribution<double> fine(0.0, 1.0);
  std::bernoulli_distribution use_coarse(0.4);
  const twadmm::sudoku::OneOnMinimizer node;

  for (std::size_t k = 0; k < cases; ++k, ++res.cases) {
    const std::size_t deg = degree(rng);
    std::vector<double> n(deg);
    std::vector<Weight> w(deg);
    std::bernoulli_distribution on(1.0 / static_cast<double>(deg));
    for (std::size_t i = 0; i < deg; ++i) {
      w[i] = random_weight(rng, 0.35, 0.15);
      if (w[i].is_infinite()) {
        n[i] = on(rng) ? 1.0 : 0.0;
      } else {
        n[i] = use_coarse(rng) ? 0.25 * coarse(rng) : fine(rng);
      }
    }

    // Enumerate every one-hot assignment consistent with the certainties.
    std::vector<std::size_t> consistent;
    for (std::size_t j = 0; j < deg; ++j) {
      bool ok = true;
      for (std::size_t i = 0; i < deg && ok; ++i) {
        if (w[i].is_infinite()) ok = (n[i] == 1.0) == (i == j);
      }
      if (ok) consistent.push_back(j);
    }

    twadmm::TieBreaker ties(rng());
    twadmm::MinimizerResult out;
    try {
      out = twadmm::run_minimizer(node, n, w, 1.0, ties);
    } catch (const twadmm::CertaintyContradiction&) {
      if (!consistent.empty()) res.fail(describe(k, "contradiction on a satisfiable input"));
      continue;
    }
    if (consistent.empty()) {
      res.fail(describe(k, "no contradiction on an unsatisfiable input"));
      continue;
    }

    std::size_t ones = 0, chosen = deg;
    for (std::size_t i = 0; i < deg; ++i) {
      if (out.x[i] == 1.0) {
        ++ones;
        chosen = i;
      } else if (out.x[i] != 0.0) {
        ones = deg + 1;
      }
    }
    if (ones != 1 ||
        std::find(consistent.begin(), consistent.end(), chosen) == consistent.end()) {
      res.fail(describe(k, "output is not a consistent one-hot assignment"));
      continue;
    }
    bool sound = true;
    for (std::size_t i = 0; i < deg && sound; ++i) {
      if (!out.weight[i].is_infinite()) continue;
      for (std::size_t j : consistent) {
        if ((i == j ? 1.0 : 0.0) != out.x[i]) sound = false;
      }
    }
    if (!sound) {
      res.fail(describe(k, "infinite weight on a value that is not forced"));
      continue;
    }
    for (std::size_t i = 0; i < deg; ++i) {
      if (w[i].is_infinite() && !out.weight[i].is_infinite()) {
        res.fail(describe(k, "incoming certainty dropped"));
        break;
      }
      if (consistent.size() == 1 && !out.weight[i].is_infinite()) {
        res.fail(describe(k, "forced assignment not emitted as certain"));
        break;
      }
    }
  }
  return res;
}

Result pair_projection(std::uint64_t seed, std::size_t cases) {
  Result res{"pair step vs least-squares projection", 0, 0, {}};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_real_distribution<double> radius(0.02, 0.5);

  for (std::size_t k = 0; k < cases; ++k, ++res.cases) {
    const double r = radius(rng);
    const twadmm::packing::PairMinimizer node(r, 2);
    std::vector<double> a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    const std::vector<double> n{a[0], a[1], b[0], b[1]};
    const std::vector<Weight> w(4, Weight::standard(1.0));
    twadmm::TieBreaker ties(k);
    const auto out = twadmm::run_minimizer(node, n, w, 1.0, ties);

    double cost = 0.0;
    for (int i = 0; i < 4; ++i) cost += (out.x[i] - n[i]) * (out.x[i] - n[i]);
    const double best = oracle::pair_projection_cost(a, b, r);
    const double gap = std::hypot(out.x[2] - out.x[0], out.x[3] - out.x[1]);
    const bool overlapped = std::hypot(b[0] - a[0], b[1] - a[1]) < 2.0 * r;

    std::ostringstream os;
    if (std::abs(cost - best) > 1e-9 * std::max(1.0, best)) {
      os << "cost " << cost << " vs optimum " << best;
    } else if (overlapped && std::abs(gap - 2.0 * r) > 1e-12) {
      os << "separation " << gap << " vs 2r " << 2.0 * r;
    } else if (!overlapped && cost != 0.0) {
      os << "separated pair moved";
    }
    if (!os.str().empty()) res.fail(describe(k, os.str()));
  }
  return res;
}

}  // namespace props
