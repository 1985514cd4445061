#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mpdvrp {

enum class Phase { nominal, reevaluation, search };

const char* phase_name(Phase p);
Phase phase_from_name(const std::string& name);

// One incumbent improvement: the iteration it happened on, elapsed wall time
// since the run started, and the new best cost.
struct TraceRow {
  std::int64_t iteration = 0;
  std::int64_t elapsed_ns = 0;
  double incumbent_cost = 0.0;
  Phase phase = Phase::nominal;
};

struct ConvergenceTrace {
  std::vector<TraceRow> rows;

  void add(std::int64_t iteration, std::int64_t elapsed_ns, double cost, Phase phase) {
    rows.push_back({iteration, elapsed_ns, cost, phase});
  }
};

// CSV with a one-line header. The elapsed column is written as 0 unless
// real_elapsed is set, keeping default outputs byte-reproducible.
void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace, bool real_elapsed = false);
ConvergenceTrace read_trace_csv(std::istream& in);

void write_trace_csv_file(const std::string& path, const ConvergenceTrace& trace,
                          bool real_elapsed = false);
ConvergenceTrace read_trace_csv_file(const std::string& path);

// Incumbent cost in effect at the given iteration (step function over rows);
// NaN before the first improvement.
double incumbent_at(const ConvergenceTrace& trace, std::int64_t iteration);

// Linear-interpolation quantile of an unsorted sample, p in [0,1]; NaN on an
// empty sample.
double quantile(std::vector<double> values, double p);

}  // namespace mpdvrp
