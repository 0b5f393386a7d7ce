#include "twadmm/packing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

namespace twadmm::packing {

void Instance::validate() const {
  if (dims == 0) throw InstanceError("dims must be positive");
  if (!(radius > 0.0)) throw InstanceError("radius must be positive");
  if (!(box_side > 0.0)) throw InstanceError("box side must be positive");
  if (2.0 * radius > box_side) {
    throw InstanceError("a single circle does not fit: 2r > L");
  }
  if (!initial_centers.empty()) {
    if (initial_centers.size() != n) {
      throw InstanceError("initial centers must cover every circle");
    }
    for (const auto& c : initial_centers) {
      if (c.size() != dims) throw InstanceError("center has wrong dimension");
    }
  }
}

void BoxMinimizer::minimize(std::span<const double> n, std::span<const Weight>,
                            std::span<double> x_out, std::span<Weight> w_out,
                            MinimizeContext& ctx) const {
  bool outside = false;
  for (std::size_t k = 0; k < dims_; ++k) {
    x_out[k] = std::clamp(n[k], lo_, hi_);
    outside = outside || x_out[k] != n[k];
  }
  const Weight w = outside ? Weight::standard(ctx.rho0) : Weight::zero();
  std::fill(w_out.begin(), w_out.end(), w);
}

namespace {

// A circle's weight is the dominant weight among its coordinates.
Weight circle_weight(std::span<const Weight> w) {
  Weight top = w[0];
  for (const Weight& x : w.subspan(1)) {
    if (dominates(x, top)) top = x;
  }
  return top;
}

}  // namespace

void PairMinimizer::minimize(std::span<const double> n,
                             std::span<const Weight> w_in,
                             std::span<double> x_out, std::span<Weight> w_out,
                             MinimizeContext& ctx) const {
  const auto a = n.first(dims_);
  const auto b = n.subspan(dims_, dims_);

  std::vector<double> dir(dims_);
  double dist2 = 0.0;
  for (std::size_t k = 0; k < dims_; ++k) {
    dir[k] = b[k] - a[k];
    dist2 += dir[k] * dir[k];
  }
  const double dist = std::sqrt(dist2);
  const double target = 2.0 * radius_;

  if (dist >= target) {
    std::copy(n.begin(), n.end(), x_out.begin());
    std::fill(w_out.begin(), w_out.end(), Weight::zero());
    return;
  }

  if (dist < kCoincident) {
    dir = ctx.ties.unit_direction(dims_);
  } else {
    for (double& c : dir) c /= dist;
  }

  // Fraction of the overlap taken up by circle a; b takes the rest.
  const Weight wa = circle_weight(w_in.first(dims_));
  const Weight wb = circle_weight(w_in.subspan(dims_, dims_));
  double share_a = 0.5;
  if (dominates(wa, wb)) {
    share_a = 0.0;
  } else if (dominates(wb, wa)) {
    share_a = 1.0;
  } else if (wa.is_standard()) {
    share_a = wb.rho() / (wa.rho() + wb.rho());
  }
  const double share_b = 1.0 - share_a;

  const double overlap = target - dist;
  for (std::size_t k = 0; k < dims_; ++k) {
    x_out[k] = a[k] - dir[k] * overlap * share_a;
    x_out[dims_ + k] = b[k] + dir[k] * overlap * share_b;
  }
  std::fill(w_out.begin(), w_out.end(), Weight::standard(ctx.rho0));
}

Encoding encode(const Instance& instance, std::uint64_t seed) {
  instance.validate();
  const std::size_t d = instance.dims;
  const std::size_t nvars = instance.n * d;

  Encoding enc;
  std::vector<LeftSpec> specs;
  specs.reserve(instance.n + instance.n * (instance.n - 1) / 2);

  auto box = std::make_shared<const BoxMinimizer>(instance.lower(),
                                                  instance.upper(), d);
  for (std::size_t i = 0; i < instance.n; ++i) {
    std::vector<VariableId> vars;
    for (std::size_t k = 0; k < d; ++k) vars.push_back(coordinate(d, i, k));
    specs.push_back({box, std::move(vars)});
    ++enc.box_nodes;
  }
  auto pair = std::make_shared<const PairMinimizer>(instance.radius, d);
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (std::size_t j = i + 1; j < instance.n; ++j) {
      std::vector<VariableId> vars;
      for (std::size_t k = 0; k < d; ++k) vars.push_back(coordinate(d, i, k));
      for (std::size_t k = 0; k < d; ++k) vars.push_back(coordinate(d, j, k));
      specs.push_back({pair, std::move(vars)});
      ++enc.pair_nodes;
    }
  }

  enc.priors.resize(nvars);
  std::mt19937_64 rng(derive_seed(seed, 0xB0C5));
  std::uniform_real_distribution<double> pos(instance.lower(),
                                             instance.upper());
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double draw = pos(rng);
      const double v =
          instance.initial_centers.empty() ? draw : instance.initial_centers[i][k];
      enc.priors[coordinate(d, i, k)] = Prior{v, Weight::zero()};
    }
  }

  enc.graph = build_graph(std::move(specs), nvars);
  return enc;
}

Centers centers(const Instance& instance, std::span<const double> solution) {
  Centers out(instance.n, std::vector<double>(instance.dims));
  for (std::size_t i = 0; i < instance.n; ++i) {
    for (std::size_t k = 0; k < instance.dims; ++k) {
      out[i][k] = solution[coordinate(instance.dims, i, k)];
    }
  }
  return out;
}

namespace {

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

bool verify(const Instance& instance, std::span<const double> solution,
            double eps) {
  if (solution.size() != instance.n * instance.dims) return false;
  const Centers c = centers(instance, solution);
  for (const auto& p : c) {
    for (double v : p) {
      if (!std::isfinite(v)) return false;
      if (v < instance.lower() - eps || v > instance.upper() + eps) return false;
    }
  }
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (distance(c[i], c[j]) < 2.0 * instance.radius - eps) return false;
    }
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> contacts(
    const Instance& instance, std::span<const double> solution, double slack) {
  const Centers c = centers(instance, solution);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (distance(c[i], c[j]) <= 2.0 * instance.radius + slack) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

Instance read_instance(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw InstanceError("bad number '" + tok + "'");
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty() || rows[0].size() != 3) {
    throw InstanceError("first line must be 'n L r'");
  }
  Instance inst;
  const double n = rows[0][0];
  if (n < 0 || n != std::floor(n)) throw InstanceError("n must be a count");
  inst.n = static_cast<std::size_t>(n);
  inst.box_side = rows[0][1];
  inst.radius = rows[0][2];
  if (rows.size() > 1) {
    inst.initial_centers.assign(rows.begin() + 1, rows.end());
  }
  inst.validate();
  return inst;
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open " + path);
  return read_instance(in);
}

void write_solution(std::ostream& out, const Instance& instance,
                    std::span<const double> solution) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : centers(instance, solution)) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ' ';
      out << p[k];
    }
    out << '\n';
  }
  const auto touching = contacts(instance, solution);
  out << "contacts " << touching.size() << '\n';
  for (const auto& [i, j] : touching) out << i << ' ' << j << '\n';
  out.precision(old);
}

}  // namespace twadmm::packing
