#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace twadmm {

// Mixes a run seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded random stream owned by a single left node. Every draw counts as a
/// consumed tie-break so callers can tell whether a run needed any.
class TieBreaker {
 public:
  explicit TieBreaker(std::uint64_t seed = 0) : rng_(seed) {}

  // Uniform index in [0, count).
  std::size_t pick(std::size_t count);

  // Uniform random unit vector in `dims` dimensions.
  std::vector<double> unit_direction(std::size_t dims);

  std::uint64_t consumed() const { return consumed_; }

 private:
  std::mt19937_64 rng_;
  std::uint64_t consumed_ = 0;
};

}  // namespace twadmm
