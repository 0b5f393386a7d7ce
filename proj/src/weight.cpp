#include "twadmm/weight.hpp"

#include <cmath>
#include <sstream>

namespace twadmm {

Weight Weight::standard(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("standard weight must be positive and finite");
  }
  return Weight(Kind::Standard, rho);
}

std::string to_string(const Weight& w) {
  switch (w.kind()) {
    case Weight::Kind::Zero:
      return "zero";
    case Weight::Kind::Infinite:
      return "infinite";
    case Weight::Kind::Standard: {
      std::ostringstream os;
      os << "standard(" << w.rho() << ")";
      return os.str();
    }
  }
  return "?";
}

Average dominant_average(std::span<const double> values,
                         std::span<const Weight> weights) {
  if (values.empty() || values.size() != weights.size()) {
    throw std::invalid_argument(
        "dominant_average: values and weights must be non-empty and of equal "
        "length");
  }

  Weight::Kind top = Weight::Kind::Zero;
  for (const Weight& w : weights) {
    if (static_cast<int>(w.kind()) > static_cast<int>(top)) top = w.kind();
  }

  switch (top) {
    case Weight::Kind::Infinite: {
      double sum = 0.0, lo = 0.0, hi = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!weights[i].is_infinite()) continue;
        if (count == 0) {
          lo = hi = values[i];
        } else {
          lo = std::min(lo, values[i]);
          hi = std::max(hi, values[i]);
        }
        sum += values[i];
        ++count;
      }
      if (hi - lo > kContradictionTolerance) {
        std::ostringstream os;
        os << "certain messages disagree: " << lo << " vs " << hi;
        throw CertaintyContradiction(os.str());
      }
      return {sum / static_cast<double>(count), top};
    }
    case Weight::Kind::Standard: {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (!weights[i].is_standard()) continue;
        num += weights[i].rho() * values[i];
        den += weights[i].rho();
      }
      return {num / den, top};
    }
    case Weight::Kind::Zero:
      break;
  }

  double sum = 0.0;
  for (double v : values) sum += v;
  return {sum / static_cast<double>(values.size()), Weight::Kind::Zero};
}

}  // namespace twadmm
