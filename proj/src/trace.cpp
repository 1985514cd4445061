#include "mpdvrp/trace.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "mpdvrp/error.hpp"
#include "mpdvrp/text_io.hpp"

namespace mpdvrp {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::nominal: return "nominal";
    case Phase::reevaluation: return "reevaluation";
    case Phase::search: return "search";
  }
  return "?";
}

Phase phase_from_name(const std::string& name) {
  if (name == "nominal") return Phase::nominal;
  if (name == "reevaluation") return Phase::reevaluation;
  if (name == "search") return Phase::search;
  throw ParseError("unknown trace phase '" + name + "'");
}

void write_trace_csv(std::ostream& out, const ConvergenceTrace& trace, bool real_elapsed) {
  out << "iteration,elapsed_ns,incumbent_cost,phase\n";
  for (const auto& row : trace.rows)
    out << row.iteration << "," << (real_elapsed ? row.elapsed_ns : 0) << ","
        << format_double(row.incumbent_cost) << "," << phase_name(row.phase) << "\n";
}

ConvergenceTrace read_trace_csv(std::istream& in) {
  ConvergenceTrace trace;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trace file is empty");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? comma : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 4)
      throw ParseError("trace line " + std::to_string(line_no) + ": expected 4 columns");
    TraceRow row;
    row.iteration = parse_int(cells[0], "iteration");
    row.elapsed_ns = parse_int(cells[1], "elapsed_ns");
    row.incumbent_cost = parse_double(cells[2], "incumbent_cost");
    row.phase = phase_from_name(cells[3]);
    trace.rows.push_back(row);
  }
  return trace;
}

void write_trace_csv_file(const std::string& path, const ConvergenceTrace& trace,
                          bool real_elapsed) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace file '" + path + "'");
  write_trace_csv(out, trace, real_elapsed);
  if (!out.flush()) throw IoError("failed writing trace file '" + path + "'");
}

ConvergenceTrace read_trace_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  return read_trace_csv(in);
}

double incumbent_at(const ConvergenceTrace& trace, std::int64_t iteration) {
  double cost = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : trace.rows) {
    if (row.iteration > iteration) break;
    cost = row.incumbent_cost;
  }
  return cost;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return values[lo];
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace mpdvrp
