#pragma once

#include <Eigen/Dense>

#include <vector>

#include "twadmm/graph.hpp"

namespace twadmm {

// f == 0. The proximal step is the identity.
class ZeroCost final : public Minimizer {
 public:
  std::string_view name() const override { return "zero"; }
  void minimize(std::span<const double> n, std::span<const Weight> w_in,
                std::span<double> x_out, std::span<Weight> w_out,
                MinimizeContext& ctx) const override;
};

/// Hard constraint pinning each incident variable to a known value. The
/// values are certain, so they leave with infinite weight.
class FixedValue final : public Minimizer {
 public:
  explicit FixedValue(std::vector<double> values) : values_(std::move(values)) {}

  std::string_view name() const override { return "fixed"; }
  bool accepts_degree(std::size_t degree) const override {
    return degree == values_.size();
  }
  void minimize(std::span<const double> n, std::span<const Weight> w_in,
                std::span<double> x_out, std::span<Weight> w_out,
                MinimizeContext& ctx) const override;

 private:
  std::vector<double> values_;
};

/// Soft convex cost f(x) = 1/2 x'Qx - b'x over the node's variables, Q
/// symmetric positive semidefinite. Emits standard weights.
class QuadraticCost final : public Minimizer {
 public:
  QuadraticCost(Eigen::MatrixXd q, Eigen::VectorXd b);

  std::string_view name() const override { return "quadratic"; }
  bool accepts_degree(std::size_t degree) const override {
    return static_cast<Eigen::Index>(degree) == b_.size();
  }
  void minimize(std::span<const double> n, std::span<const Weight> w_in,
                std::span<double> x_out, std::span<Weight> w_out,
                MinimizeContext& ctx) const override;

  const Eigen::MatrixXd& q() const { return q_; }
  const Eigen::VectorXd& b() const { return b_; }

 private:
  Eigen::MatrixXd q_;
  Eigen::VectorXd b_;
};

}  // namespace twadmm
