#include "twadmm/costs.hpp"

#include <algorithm>

namespace twadmm {

void ZeroCost::minimize(std::span<const double> n, std::span<const Weight>,
                        std::span<double> x_out, std::span<Weight> w_out,
                        MinimizeContext& ctx) const {
  std::copy(n.begin(), n.end(), x_out.begin());
  std::fill(w_out.begin(), w_out.end(), Weight::standard(ctx.rho0));
}

void FixedValue::minimize(std::span<const double>, std::span<const Weight>,
                          std::span<double> x_out, std::span<Weight> w_out,
                          MinimizeContext&) const {
  std::copy(values_.begin(), values_.end(), x_out.begin());
  std::fill(w_out.begin(), w_out.end(), Weight::infinite());
}

QuadraticCost::QuadraticCost(Eigen::MatrixXd q, Eigen::VectorXd b)
    : q_(std::move(q)), b_(std::move(b)) {
  if (q_.rows() != q_.cols() || q_.rows() != b_.size() || b_.size() == 0) {
    throw std::invalid_argument("QuadraticCost: Q must be square and match b");
  }
  if (!q_.isApprox(q_.transpose())) {
    throw std::invalid_argument("QuadraticCost: Q must be symmetric");
  }
}

void QuadraticCost::minimize(std::span<const double> n,
                             std::span<const Weight> w_in,
                             std::span<double> x_out, std::span<Weight> w_out,
                             MinimizeContext& ctx) const {
  const Eigen::Index k = b_.size();

  // Edges with certain messages are pinned; the rest solve
  // (Q_ff + diag(rho)) x_f = b_f + rho n_f - Q_fp n_p.
  std::vector<Eigen::Index> free_idx, pinned_idx;
  for (Eigen::Index i = 0; i < k; ++i) {
    (w_in[i].is_infinite() ? pinned_idx : free_idx).push_back(i);
  }

  for (Eigen::Index p : pinned_idx) x_out[p] = n[p];

  if (!free_idx.empty()) {
    const auto f = static_cast<Eigen::Index>(free_idx.size());
    Eigen::MatrixXd a(f, f);
    Eigen::VectorXd rhs(f);
    for (Eigen::Index i = 0; i < f; ++i) {
      const Eigen::Index gi = free_idx[i];
      for (Eigen::Index j = 0; j < f; ++j) a(i, j) = q_(gi, free_idx[j]);
      a(i, i) += w_in[gi].rho();
      rhs(i) = b_(gi) + w_in[gi].rho() * n[gi];
      for (Eigen::Index p : pinned_idx) rhs(i) -= q_(gi, p) * n[p];
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) {
      throw UnboundedCost(
          "quadratic cost has no unique proximal minimum (singular curvature "
          "under zero-weight messages)");
    }
    const Eigen::VectorXd sol = llt.solve(rhs);
    for (Eigen::Index i = 0; i < f; ++i) x_out[free_idx[i]] = sol(i);
  }

  std::fill(w_out.begin(), w_out.end(), Weight::standard(ctx.rho0));
}

}  // namespace twadmm
