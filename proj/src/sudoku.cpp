#include "twadmm/sudoku.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>

#include "twadmm/costs.hpp"

namespace twadmm::sudoku {

int Instance::box_side() const {
  const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return s;
}

std::size_t Instance::clue_count() const {
  std::size_t k = 0;
  for (int c : cells) k += c != 0;
  return k;
}

void Instance::validate() const {
  if (n < 1) throw EncodingError("grid side must be positive");
  const int s = box_side();
  if (s * s != n) {
    throw EncodingError("grid side " + std::to_string(n) +
                        " is not a perfect square");
  }
  if (cells.size() != static_cast<std::size_t>(n) * n) {
    throw EncodingError("grid must have n*n cells");
  }
  for (int c : cells) {
    if (c < 0 || c > n) {
      throw EncodingError("clue digit " + std::to_string(c) +
                          " outside 1.." + std::to_string(n));
    }
  }
}

const char* to_string(Family family) {
  switch (family) {
    case Family::Cell:
      return "cell";
    case Family::Row:
      return "row";
    case Family::Column:
      return "column";
    case Family::Box:
      return "box";
  }
  return "?";
}

std::vector<OneOnConstraint> one_on_constraints(int n) {
  const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  std::vector<OneOnConstraint> out;
  out.reserve(4 * static_cast<std::size_t>(n) * n);

  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      OneOnConstraint k{Family::Cell, r, c, {}};
      for (int d = 0; d < n; ++d) k.members.push_back(indicator(n, r, c, d));
      out.push_back(std::move(k));
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int d = 0; d < n; ++d) {
      OneOnConstraint k{Family::Row, r, d, {}};
      for (int c = 0; c < n; ++c) k.members.push_back(indicator(n, r, c, d));
      out.push_back(std::move(k));
    }
  }
  for (int c = 0; c < n; ++c) {
    for (int d = 0; d < n; ++d) {
      OneOnConstraint k{Family::Column, c, d, {}};
      for (int r = 0; r < n; ++r) k.members.push_back(indicator(n, r, c, d));
      out.push_back(std::move(k));
    }
  }
  for (int b = 0; b < n; ++b) {
    const int r0 = (b / s) * s, c0 = (b % s) * s;
    for (int d = 0; d < n; ++d) {
      OneOnConstraint k{Family::Box, b, d, {}};
      for (int r = r0; r < r0 + s; ++r) {
        for (int c = c0; c < c0 + s; ++c) {
          k.members.push_back(indicator(n, r, c, d));
        }
      }
      out.push_back(std::move(k));
    }
  }
  return out;
}

void OneOnMinimizer::minimize(std::span<const double> n,
                              std::span<const Weight> w_in,
                              std::span<double> x_out, std::span<Weight> w_out,
                              MinimizeContext& ctx) const {
  const std::size_t k = n.size();
  std::size_t certain_on = k, on_count = 0, open_count = 0, last_open = k;
  for (std::size_t i = 0; i < k; ++i) {
    if (!w_in[i].is_infinite()) {
      ++open_count;
      last_open = i;
    } else if (n[i] > 0.5) {
      certain_on = i;
      ++on_count;
    }
  }
  if (on_count > 1) {
    throw CertaintyContradiction("one-on constraint has several certain-on "
                                 "members");
  }

  std::size_t chosen = k;
  bool forced = false;
  if (on_count == 1) {
    chosen = certain_on;
    forced = true;
  } else {
    // Members certainly off are never candidates.
    const std::size_t candidates = open_count;
    if (candidates == 0) {
      throw CertaintyContradiction("one-on constraint has every member "
                                   "certainly off");
    }
    if (candidates == 1) {
      chosen = last_open;
      forced = true;
    } else {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < k; ++i) {
        if (!w_in[i].is_infinite()) best = std::max(best, n[i]);
      }
      auto is_tied = [&](std::size_t i) {
        return !w_in[i].is_infinite() && n[i] >= best - kTieTolerance;
      };
      std::size_t tied = 0;
      for (std::size_t i = 0; i < k; ++i) tied += is_tied(i);
      std::size_t pick = tied > 1 ? ctx.ties.pick(tied) : 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (is_tied(i) && pick-- == 0) {
          chosen = i;
          break;
        }
      }
    }
  }

  const Weight standard = Weight::standard(ctx.rho0);
  for (std::size_t i = 0; i < k; ++i) {
    x_out[i] = i == chosen ? 1.0 : 0.0;
    w_out[i] = (forced || w_in[i].is_infinite()) ? Weight::infinite() : standard;
  }
}

Encoding encode(const Instance& instance) {
  instance.validate();
  const int n = instance.n;

  const auto constraints = one_on_constraints(n);
  for (const OneOnConstraint& k : constraints) {
    if (k.family == Family::Cell) continue;
    int seen = 0;
    for (VariableId v : k.members) {
      const int cell = static_cast<int>(v) / n, digit = static_cast<int>(v) % n;
      if (instance.cells[cell] == digit + 1) ++seen;
    }
    if (seen > 1) {
      std::ostringstream os;
      os << "clues repeat digit " << k.minor + 1 << " in " << to_string(k.family)
         << " " << k.major + 1;
      throw EncodingError(os.str());
    }
  }

  const std::size_t nvars = static_cast<std::size_t>(n) * n * n;
  auto one_on = std::make_shared<const OneOnMinimizer>();
  std::vector<LeftSpec> specs;
  specs.reserve(constraints.size() + instance.clue_count());
  for (const OneOnConstraint& k : constraints) {
    specs.push_back({one_on, k.members});
  }

  Encoding enc;
  enc.one_on_count = constraints.size();
  enc.priors.assign(nvars, std::nullopt);
  for (int cell = 0; cell < n * n; ++cell) {
    const int clue = instance.cells[cell];
    if (clue == 0) {
      enc.free_variables += n;
      continue;
    }
    std::vector<double> values(n, 0.0);
    values[clue - 1] = 1.0;
    std::vector<VariableId> vars;
    for (int d = 0; d < n; ++d) {
      const VariableId v = indicator(n, cell / n, cell % n, d);
      vars.push_back(v);
      enc.priors[v] = Prior{values[d], Weight::infinite()};
    }
    specs.push_back({std::make_shared<const FixedValue>(std::move(values)),
                     std::move(vars)});
    ++enc.clue_nodes;
  }

  enc.graph = build_graph(std::move(specs), nvars);
  return enc;
}

std::vector<int> decode(int n, std::span<const double> solution) {
  std::vector<int> grid(static_cast<std::size_t>(n) * n, 0);
  for (int cell = 0; cell < n * n; ++cell) {
    int digit = 0, on = 0;
    for (int d = 0; d < n; ++d) {
      if (solution[static_cast<std::size_t>(cell) * n + d] >= 0.5) {
        digit = d + 1;
        ++on;
      }
    }
    grid[cell] = on == 1 ? digit : 0;
  }
  return grid;
}

bool verify(const Instance& instance, std::span<const double> solution) {
  const int n = instance.n;
  if (solution.size() != static_cast<std::size_t>(n) * n * n) return false;
  for (const OneOnConstraint& k : one_on_constraints(n)) {
    int on = 0;
    for (VariableId v : k.members) on += solution[v] >= 0.5;
    if (on != 1) return false;
  }
  for (int cell = 0; cell < n * n; ++cell) {
    const int clue = instance.cells[cell];
    if (clue != 0 &&
        solution[static_cast<std::size_t>(cell) * n + (clue - 1)] < 0.5) {
      return false;
    }
  }
  return true;
}

bool grid_is_solution(const Instance& instance, std::span<const int> grid) {
  const int n = instance.n;
  if (grid.size() != static_cast<std::size_t>(n) * n) return false;
  std::vector<double> indicators(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int cell = 0; cell < n * n; ++cell) {
    if (grid[cell] < 1 || grid[cell] > n) return false;
    indicators[static_cast<std::size_t>(cell) * n + grid[cell] - 1] = 1.0;
  }
  return verify(instance, indicators);
}

Instance read_instance(std::istream& in) {
  Instance inst;
  std::string line;
  std::vector<std::string> tokens;
  bool have_n = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      const std::string comment = line.substr(hash + 1);
      const auto key = comment.find("difficulty:");
      if (key != std::string::npos) {
        std::istringstream cs(comment.substr(key + 11));
        cs >> inst.difficulty;
      }
      line.resize(hash);
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (!have_n) {
        try {
          inst.n = std::stoi(tok);
        } catch (const std::exception&) {
          throw EncodingError("puzzle must start with the grid side");
        }
        have_n = true;
      } else {
        tokens.push_back(tok);
      }
    }
  }
  if (!have_n) throw EncodingError("empty puzzle file");
  if (inst.n < 1) throw EncodingError("grid side must be positive");
  const std::size_t cells = static_cast<std::size_t>(inst.n) * inst.n;
  if (tokens.size() != cells) {
    throw EncodingError("expected " + std::to_string(cells) + " cells, found " +
                        std::to_string(tokens.size()));
  }
  inst.cells.reserve(cells);
  for (const std::string& t : tokens) {
    if (t == ".") {
      inst.cells.push_back(0);
      continue;
    }
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw EncodingError("bad cell token '" + t + "'");
    inst.cells.push_back(v);
  }
  inst.validate();
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EncodingError("cannot open " + path);
  return read_instance(in);
}

void write_grid(std::ostream& out, int n, std::span<const int> grid) {
  out << n << '\n';
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (c) out << ' ';
      out << grid[r * n + c];
    }
    out << '\n';
  }
}

}  // namespace twadmm::sudoku
