#include "twadmm/bench.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twadmm::bench {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error("bad integer field '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    // stod rejects "inf"/"nan" spellings on some platforms; accept ours.
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw std::runtime_error("bad number field '" + s + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
  out << kCsvVersion << '\n' << kCsvColumns << '\n';
  for (const BenchmarkRecord& r : records) {
    if (r.instance.find(',') != std::string::npos) {
      throw std::invalid_argument("instance id may not contain ','");
    }
    out << r.instance << ',' << r.mode << ',' << r.seed << ',' << r.iterations
        << ',' << (r.converged ? 1 : 0) << ',' << format_double(r.residual)
        << ',' << format_double(r.wall_time_s) << '\n';
  }
}

std::vector<BenchmarkRecord> read_csv(std::istream& in) {
  std::vector<BenchmarkRecord> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != kCsvColumns) {
        throw std::runtime_error("unexpected CSV header: " + line);
      }
      header = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 7) throw std::runtime_error("bad CSV row: " + line);
    BenchmarkRecord r;
    r.instance = f[0];
    r.mode = f[1];
    r.seed = parse_u64(f[2]);
    r.iterations = parse_u64(f[3]);
    if (f[4] != "0" && f[4] != "1") {
      throw std::runtime_error("bad converged field: " + f[4]);
    }
    r.converged = f[4] == "1";
    r.residual = parse_double(f[5]);
    r.wall_time_s = parse_double(f[6]);
    out.push_back(std::move(r));
  }
  if (!header) throw std::runtime_error("missing CSV header");
  return out;
}

std::vector<Speedup> paired_speedups(
    const std::vector<BenchmarkRecord>& records, const std::string& baseline,
    const std::string& candidate) {
  std::map<std::pair<std::string, std::uint64_t>, const BenchmarkRecord*> base;
  for (const BenchmarkRecord& r : records) {
    if (r.mode == baseline) base[{r.instance, r.seed}] = &r;
  }
  std::vector<Speedup> out;
  for (const BenchmarkRecord& r : records) {
    if (r.mode != candidate || !r.converged) continue;
    auto it = base.find({r.instance, r.seed});
    if (it == base.end() || !it->second->converged) continue;
    out.push_back({r.instance, r.seed,
                   static_cast<double>(it->second->iterations) /
                       static_cast<double>(r.iterations)});
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t k = values.size();
  return k % 2 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
}

std::vector<ClassSummary> aggregate(const std::vector<BenchmarkRecord>& records,
                                    const Classifier& classify,
                                    const std::string& baseline,
                                    const std::string& candidate) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> by_class;
  for (const Speedup& s : paired_speedups(records, baseline, candidate)) {
    const std::string cls = classify(s.instance);
    auto [it, inserted] = by_class.try_emplace(cls);
    if (inserted) order.push_back(cls);
    it->second.push_back(s.value);
  }
  std::vector<ClassSummary> out;
  for (const std::string& cls : order) {
    const auto& v = by_class[cls];
    ClassSummary row;
    row.instance_class = cls;
    row.trials = v.size();
    row.median_speedup = median(v);
    const auto improved = std::count_if(v.begin(), v.end(),
                                        [](double s) { return s > 2.0; });
    row.percent_improved =
        100.0 * static_cast<double>(improved) / static_cast<double>(v.size());
    row.min_speedup = *std::min_element(v.begin(), v.end());
    row.max_speedup = *std::max_element(v.begin(), v.end());
    out.push_back(row);
  }
  return out;
}

void write_summary(std::ostream& out, const std::vector<ClassSummary>& rows) {
  out << std::left << std::setw(16) << "class" << std::right << std::setw(8)
      << "trials" << std::setw(14) << "%improved>2x" << std::setw(10)
      << "median" << std::setw(10) << "min" << std::setw(10) << "max" << '\n';
  out << std::fixed;
  for (const ClassSummary& r : rows) {
    out << std::left << std::setw(16) << r.instance_class << std::right
        << std::setw(8) << r.trials << std::setw(13) << std::setprecision(2)
        << r.percent_improved << '%' << std::setw(10) << r.median_speedup
        << std::setw(10) << r.min_speedup << std::setw(10) << r.max_speedup
        << '\n';
  }
  out << std::defaultfloat;
}

}  // namespace twadmm::bench
