#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

namespace twadmm {

/// Reliability attached to a message. Standard weights carry the scalar
/// rho0; zero means "no opinion" and infinite means "certain".
class Weight {
 public:
  enum class Kind : std::uint8_t { Zero = 0, Standard = 1, Infinite = 2 };

  constexpr Weight() = default;

  static constexpr Weight zero() { return Weight(Kind::Zero, 0.0); }
  static constexpr Weight infinite() { return Weight(Kind::Infinite, 0.0); }
  static Weight standard(double rho);

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_zero() const { return kind_ == Kind::Zero; }
  constexpr bool is_standard() const { return kind_ == Kind::Standard; }
  constexpr bool is_infinite() const { return kind_ == Kind::Infinite; }

  // Scalar rho0 for Standard weights, 0 otherwise.
  constexpr double rho() const { return rho_; }

  friend constexpr bool operator==(const Weight&, const Weight&) = default;

 private:
  constexpr Weight(Kind kind, double rho) : kind_(kind), rho_(rho) {}

  Kind kind_ = Kind::Zero;
  double rho_ = 0.0;
};

// Dominance order used by averaging: Infinite > Standard > Zero.
constexpr bool dominates(const Weight& a, const Weight& b) {
  return static_cast<int>(a.kind()) > static_cast<int>(b.kind());
}

std::string to_string(const Weight& w);

/// Two certain messages disagree. Correct certainty logic never produces
/// this, so it always indicates a broken encoding or minimizer.
class CertaintyContradiction : public std::runtime_error {
 public:
  CertaintyContradiction(const std::string& what, std::int64_t node = -1)
      : std::runtime_error(what), node_(node) {}

  // Equality node where the contradiction was detected, -1 if unknown.
  std::int64_t node() const { return node_; }

 private:
  std::int64_t node_;
};

inline constexpr double kContradictionTolerance = 1e-9;

struct Average {
  double value = 0.0;
  Weight::Kind level = Weight::Kind::Zero;
};

/// Average of `values` restricted to the dominant weight class.
///
/// Infinite-weighted values override everything else and must agree to
/// within kContradictionTolerance. Otherwise Standard values are averaged
/// with their rho weights and Zero-weighted values are ignored. When every
/// weight is Zero the plain mean keeps the result defined.
Average dominant_average(std::span<const double> values,
                         std::span<const Weight> weights);

}  // namespace twadmm
