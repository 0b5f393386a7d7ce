#include "twadmm/tie_breaker.hpp"

#include <cmath>

namespace twadmm {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t TieBreaker::pick(std::size_t count) {
  ++consumed_;
  if (count <= 1) return 0;
  std::uniform_int_distribution<std::size_t> dist(0, count - 1);
  return dist(rng_);
}

std::vector<double> TieBreaker::unit_direction(std::size_t dims) {
  ++consumed_;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dims);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : v) {
      c = normal(rng_);
      norm += c * c;
    }
  } while (norm < 1e-24);
  norm = std::sqrt(norm);
  for (double& c : v) c /= norm;
  return v;
}

}  // namespace twadmm
