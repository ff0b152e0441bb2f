#include "lmcma/trace.hpp"

#include <array>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lmcma {

namespace {

constexpr std::array<std::pair<RunStatus, std::string_view>, 5> kStatusNames{{
    {RunStatus::TargetReached, "TargetReached"},
    {RunStatus::BudgetExhausted, "BudgetExhausted"},
    {RunStatus::TimeExhausted, "TimeExhausted"},
    {RunStatus::SigmaUnderflow, "SigmaUnderflow"},
    {RunStatus::NumericalFailure, "NumericalFailure"},
}};

std::string format_real(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

}  // namespace

std::string_view to_string(RunStatus status) {
  for (const auto& [value, text] : kStatusNames) {
    if (value == status) return text;
  }
  return "Unknown";
}

std::optional<RunStatus> parse_run_status(std::string_view text) {
  for (const auto& [value, name] : kStatusNames) {
    if (name == text) return value;
  }
  return std::nullopt;
}

std::optional<std::size_t> RunTrace::evaluations_to_target(double target) const {
  for (const auto& record : records) {
    if (record.best_fitness <= target) return record.evaluations;
  }
  return std::nullopt;
}

void write_trace_csv(std::ostream& os, const RunTrace& trace) {
  os << "iteration,evaluations,best_fitness,sigma,elapsed_seconds\n";
  for (const auto& r : trace.records) {
    os << r.iteration << ',' << r.evaluations << ',' << format_real(r.best_fitness) << ','
       << format_real(r.sigma) << ',' << format_real(r.elapsed_seconds) << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "iteration,evaluations,best_fitness,sigma,elapsed_seconds") {
    throw std::runtime_error("trace csv: unexpected header");
  }
  std::vector<TraceRecord> records;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    TraceRecord r;
    char comma = 0;
    row >> r.iteration >> comma >> r.evaluations >> comma;
    std::string rest;
    std::getline(row, rest);
    std::array<double, 3> reals{};
    std::size_t start = 0;
    for (std::size_t k = 0; k < reals.size(); ++k) {
      const std::size_t end = rest.find(',', start);
      reals[k] = std::stod(rest.substr(start, end - start));
      start = end + 1;
    }
    r.best_fitness = reals[0];
    r.sigma = reals[1];
    r.elapsed_seconds = reals[2];
    records.push_back(r);
  }
  return records;
}

}  // namespace lmcma
