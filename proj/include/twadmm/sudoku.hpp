#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "twadmm/engine.hpp"
#include "twadmm/graph.hpp"

namespace twadmm::sudoku {

class EncodingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Square-in-square puzzle. `cells` is row-major, 0 for an open cell and
/// 1..n for a clue.
struct Instance {
  int n = 9;
  std::vector<int> cells;
  std::string difficulty;  // optional, from a "# difficulty: x" comment

  int box_side() const;
  int at(int row, int col) const { return cells[row * n + col]; }
  std::size_t clue_count() const;
  void validate() const;
};

enum class Family { Cell, Row, Column, Box };

const char* to_string(Family family);

struct OneOnConstraint {
  Family family;
  int major = 0;  // row, row, column or box index
  int minor = 0;  // column, digit, digit or digit
  std::vector<VariableId> members;
};

// Indicator v(row, col, digit) with a 0-based digit.
inline VariableId indicator(int n, int row, int col, int digit) {
  return static_cast<VariableId>((row * n + col) * n + digit);
}

// All 4 n^2 one-on constraints of the base constraint set.
std::vector<OneOnConstraint> one_on_constraints(int n);

// Incoming values within this distance of the largest one count as tied.
// Messages are sums of averages, so exact ties come out of different but
// equivalent update orders with last-bit differences.
inline constexpr double kTieTolerance = 1e-12;

/// Exactly one member is on. Picks a certain-on member if there is one,
/// otherwise the largest incoming value among members not certainly off,
/// with exact ties broken by the node's random stream. Emits infinite
/// weights when the choice is forced (a certain-on member, or a single
/// member left that is not certainly off) and keeps incoming certainty on
/// individual edges; every other edge leaves at standard weight.
class OneOnMinimizer final : public Minimizer {
 public:
  std::string_view name() const override { return "one-on"; }
  void minimize(std::span<const double> n, std::span<const Weight> w_in,
                std::span<double> x_out, std::span<Weight> w_out,
                MinimizeContext& ctx) const override;
};

struct Encoding {
  FactorGraph graph;
  Priors priors;
  std::size_t one_on_count = 0;
  std::size_t clue_nodes = 0;
  std::size_t free_variables = 0;
};

/// One indicator per (row, col, digit). Clue cells get certain priors (1 for
/// the clue digit, 0 for the rest) and a fixed-value node over their
/// indicators, so the clues also bind when every weight is standard.
Encoding encode(const Instance& instance);

// Digit grid (1..n) from indicator beliefs rounded at 0.5; 0 where a cell
// has no single on indicator.
std::vector<int> decode(int n, std::span<const double> solution);

// Rounded assignment satisfies every one-on constraint and every clue.
bool verify(const Instance& instance, std::span<const double> solution);

bool grid_is_solution(const Instance& instance, std::span<const int> grid);

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);
void write_grid(std::ostream& out, int n, std::span<const int> grid);

}  // namespace twadmm::sudoku
