#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twadmm/engine.hpp"
#include "twadmm/graph.hpp"

namespace twadmm::packing {

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n congruent spheres of radius `radius` inside the cube [0, box_side]^dims.
struct Instance {
  std::size_t n = 0;
  double box_side = 1.0;
  double radius = 0.0;
  std::size_t dims = 2;
  // Optional starting centers (n entries of `dims` coordinates).
  std::vector<std::vector<double>> initial_centers;

  double lower() const { return radius; }
  double upper() const { return box_side - radius; }
  void validate() const;
};

inline VariableId coordinate(std::size_t dims, std::size_t circle,
                             std::size_t axis) {
  return static_cast<VariableId>(circle * dims + axis);
}

/// Keeps one center inside [lo, hi] per coordinate. A center outside is
/// sent to the nearest feasible point at standard weight; a feasible
/// center is told to stay put with zero weight.
class BoxMinimizer final : public Minimizer {
 public:
  BoxMinimizer(double lo, double hi, std::size_t dims)
      : lo_(lo), hi_(hi), dims_(dims) {}

  std::string_view name() const override { return "box"; }
  bool accepts_degree(std::size_t degree) const override {
    return degree == dims_;
  }
  void minimize(std::span<const double> n, std::span<const Weight> w_in,
                std::span<double> x_out, std::span<Weight> w_out,
                MinimizeContext& ctx) const override;

 private:
  double lo_, hi_;
  std::size_t dims_;
};

/// Keeps two centers at least 2r apart. Overlapping centers are pushed
/// apart along the line joining them to distance exactly 2r, splitting the
/// movement by the incoming weights: equal weights move equally, and a
/// circle with the dominant weight stays where it is. Separated pairs are
/// told to stay put with zero weight.
class PairMinimizer final : public Minimizer {
 public:
  PairMinimizer(double radius, std::size_t dims)
      : radius_(radius), dims_(dims) {}

  std::string_view name() const override { return "pair"; }
  bool accepts_degree(std::size_t degree) const override {
    return degree == 2 * dims_;
  }
  void minimize(std::span<const double> n, std::span<const Weight> w_in,
                std::span<double> x_out, std::span<Weight> w_out,
                MinimizeContext& ctx) const override;

 private:
  double radius_;
  std::size_t dims_;
};

// Centers closer than this count as coincident.
inline constexpr double kCoincident = 1e-12;

struct Encoding {
  FactorGraph graph;
  Priors priors;
  std::size_t box_nodes = 0;
  std::size_t pair_nodes = 0;
};

/// dims variables per circle, one box node per circle and one pair node per
/// unordered pair. Priors are zero-weight starting centers: the instance's
/// initial centers if present, else seeded uniform draws in [r, L - r].
Encoding encode(const Instance& instance, std::uint64_t seed);

using Centers = std::vector<std::vector<double>>;

Centers centers(const Instance& instance, std::span<const double> solution);

bool verify(const Instance& instance, std::span<const double> solution,
            double eps);

// Pairs whose centers are within 2r + slack of each other.
std::vector<std::pair<std::size_t, std::size_t>> contacts(
    const Instance& instance, std::span<const double> solution,
    double slack = 1e-6);

Instance read_instance(std::istream& in);
Instance read_instance_file(const std::string& path);

// n lines of coordinates at full precision, then "contacts k" and k lines
// of "i j" index pairs.
void write_solution(std::ostream& out, const Instance& instance,
                    std::span<const double> solution);

}  // namespace twadmm::packing
