#include "lmcma/harness/aggregate.hpp"

#include "lmcma/harness/stats.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace lmcma::harness {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_optional(std::ostream& os, const std::optional<std::size_t>& v) {
  if (v) os << *v;
}

}  // namespace

std::vector<SummaryRow> read_summary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "algorithm,function,n,seed,status,evals_to_target,final_best") {
    throw std::runtime_error("summary csv: unexpected header");
  }
  std::vector<SummaryRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 7) throw std::runtime_error("summary csv: expected 7 fields in '" + line + "'");
    if (f[3] == "median") continue;
    SummaryRow row;
    row.algorithm = f[0];
    row.function = f[1];
    row.n = std::stoul(f[2]);
    row.seed = std::stoull(f[3]);
    const auto status = parse_run_status(f[4]);
    if (!status) throw std::runtime_error("summary csv: unknown status '" + f[4] + "'");
    row.status = *status;
    if (!f[5].empty()) row.evals_to_target = std::stoul(f[5]);
    row.final_best = std::stod(f[6]);
    rows.push_back(row);
  }
  return rows;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<SummaryRow>& rows) {
  using Key = std::tuple<std::string, std::string, std::size_t>;
  std::map<Key, std::vector<const SummaryRow*>> groups;
  for (const auto& r : rows) groups[{r.algorithm, r.function, r.n}].push_back(&r);

  std::vector<AggregateRow> out;
  for (const auto& [key, members] : groups) {
    AggregateRow row;
    std::tie(row.algorithm, row.function, row.n) = key;
    row.runs = members.size();
    std::vector<std::size_t> evals;
    for (const SummaryRow* m : members) {
      if (m->evals_to_target) {
        evals.push_back(*m->evals_to_target);
      } else {
        ++row.failures;
      }
    }
    row.median_evals = lower_quantile(evals, 0.5);
    row.q1_evals = lower_quantile(evals, 0.25);
    row.q3_evals = lower_quantile(evals, 0.75);
    out.push_back(row);
  }
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<fs::path>& summaries) {
  std::optional<double> target;
  std::vector<SummaryRow> rows;
  for (const auto& path : summaries) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("aggregate: cannot read " + path.string());
    auto file_rows = read_summary_csv(in);
    rows.insert(rows.end(), file_rows.begin(), file_rows.end());

    const fs::path meta = metadata_path(path);
    if (fs::exists(meta)) {
      std::ifstream meta_in(meta);
      const double t = nlohmann::json::parse(meta_in).at("target").get<double>();
      if (target && *target != t) throw std::invalid_argument("aggregate: summaries use different target fitness values");
      target = t;
    }
  }
  return aggregate_rows(rows);
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "algorithm,function,n,runs,failures,median_evals,q1_evals,q3_evals\n";
  for (const auto& r : rows) {
    os << r.algorithm << ',' << r.function << ',' << r.n << ',' << r.runs << ',' << r.failures << ',';
    write_optional(os, r.median_evals);
    os << ',';
    write_optional(os, r.q1_evals);
    os << ',';
    write_optional(os, r.q3_evals);
    os << '\n';
  }
}

}  // namespace lmcma::harness
