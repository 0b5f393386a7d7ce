#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace twadmm::bench {

inline constexpr const char* kCsvVersion = "# twadmm-bench-csv v1";
inline constexpr const char* kCsvColumns =
    "instance,mode,seed,iterations,converged,residual,wall_time_s";

struct BenchmarkRecord {
  std::string instance;
  std::string mode;  // single | three-weight | dc
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  bool converged = false;
  double residual = 0.0;
  double wall_time_s = 0.0;

  friend bool operator==(const BenchmarkRecord&,
                         const BenchmarkRecord&) = default;
};

void write_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> read_csv(std::istream& in);

struct Speedup {
  std::string instance;
  std::uint64_t seed = 0;
  double value = 0.0;  // iterations(baseline) / iterations(candidate)
};

/// Pairs candidate and baseline runs on (instance, seed). A pair yields a
/// speedup only when both runs converged.
std::vector<Speedup> paired_speedups(
    const std::vector<BenchmarkRecord>& records,
    const std::string& baseline = "single",
    const std::string& candidate = "three-weight");

struct ClassSummary {
  std::string instance_class;
  std::size_t trials = 0;  // paired, both converged
  double median_speedup = 0.0;
  double percent_improved = 0.0;  // share of trials with speedup > 2
  double min_speedup = 0.0;
  double max_speedup = 0.0;
};

using Classifier = std::function<std::string(const std::string& instance)>;

/// Per-class median speedup, percentage improved by more than 2x and the
/// speedup range. Classes appear in first-seen order.
std::vector<ClassSummary> aggregate(const std::vector<BenchmarkRecord>& records,
                                    const Classifier& classify,
                                    const std::string& baseline = "single",
                                    const std::string& candidate =
                                        "three-weight");

double median(std::vector<double> values);

void write_summary(std::ostream& out, const std::vector<ClassSummary>& rows);

}  // namespace twadmm::bench
