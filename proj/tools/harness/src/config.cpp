#include "lmcma/harness/config.hpp"

#include "lmcma/cholesky_cma.hpp"
#include "lmcma/sep_cma.hpp"

#include <charconv>
#include <set>
#include <stdexcept>

namespace lmcma::harness {

namespace {

std::uint64_t parse_u64(std::string_view text) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("not an unsigned integer: '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

SuccessRule parse_rule(std::string_view name) {
  if (name == "psr") return SuccessRule::Population;
  if (name == "msr") return SuccessRule::Median;
  throw std::invalid_argument("unknown success rule '" + std::string(name) + "' (expected psr or msr)");
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::LmCma: return "lmcma";
    case Algorithm::Cholesky: return "cholesky";
    case Algorithm::SepCma: return "sepcma";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "lmcma") return Algorithm::LmCma;
  if (name == "cholesky") return Algorithm::Cholesky;
  if (name == "sepcma") return Algorithm::SepCma;
  return std::nullopt;
}

bool ParameterOverrides::empty() const {
  return !m && !n_steps && !c_1 && !c_sigma && !d_sigma && !z_star && !rule;
}

std::vector<std::uint64_t> ExperimentConfig::default_seeds(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = base + i;
  return seeds;
}

void ExperimentConfig::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("seeds must be distinct");
  }
  if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be positive");
  if (!(init_range >= 0.0)) throw std::invalid_argument("init_range must be non-negative");
  if (record_every == 0) throw std::invalid_argument("record_every must be positive");
  if (max_seconds && !(*max_seconds > 0.0)) throw std::invalid_argument("max_seconds must be positive");
  if (algorithm != Algorithm::LmCma && !overrides.empty()) {
    throw std::invalid_argument("parameter overrides apply to lmcma only");
  }
  if (algorithm == Algorithm::Cholesky && n > kMaxCholeskyDimension) {
    throw std::invalid_argument("cholesky is limited to n <= " + std::to_string(kMaxCholeskyDimension));
  }
  if (function == problems::Function::RotatedEllipsoid && n > problems::kMaxRotationDimension) {
    throw std::invalid_argument("rotated problems are limited to n <= " + std::to_string(problems::kMaxRotationDimension));
  }
  if ((checkpoint_every > 0 || resume) && algorithm != Algorithm::LmCma) {
    throw std::invalid_argument("checkpointing is supported for lmcma only");
  }
  if ((checkpoint_every > 0 || resume || dump_rotation) && output_dir.empty()) {
    throw std::invalid_argument("checkpointing and rotation dumps need an output directory");
  }
  if (algorithm == Algorithm::LmCma) lmcma_params(*this).validate();
}

std::string ExperimentConfig::stem() const {
  return std::string(to_string(algorithm)) + "_" + std::string(problems::to_string(function)) + "_n" + std::to_string(n);
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty seed list");
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const std::uint64_t first = parse_u64(trim(text.substr(0, dots)));
    const std::uint64_t last = parse_u64(trim(text.substr(dots + 2)));
    if (last < first) throw std::invalid_argument("seed range is reversed");
    for (std::uint64_t s = first; s <= last; ++s) seeds.push_back(s);
    return seeds;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    seeds.push_back(parse_u64(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seeds;
}

void apply_json(ExperimentConfig& config, const nlohmann::json& j) {
  static const std::set<std::string> known{
      "algorithm", "function",    "n",          "seeds",        "target",      "max_evaluations",
      "max_seconds", "init_range", "sigma0",    "overrides",    "rotation_seed", "output_dir",
      "record_every", "jobs",     "checkpoint_every", "resume", "dump_rotation"};
  static const std::set<std::string> known_overrides{"m", "n_steps", "c_1", "c_sigma", "d_sigma", "z_star", "rule"};
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }

  if (j.contains("algorithm")) {
    const auto a = parse_algorithm(j.at("algorithm").get<std::string>());
    if (!a) throw std::invalid_argument("config: unknown algorithm");
    config.algorithm = *a;
  }
  if (j.contains("function")) {
    const auto f = problems::parse_function(j.at("function").get<std::string>());
    if (!f) throw std::invalid_argument("config: unknown function");
    config.function = *f;
  }
  if (j.contains("n")) config.n = j.at("n").get<std::size_t>();
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    config.seeds = s.is_string() ? parse_seeds(s.get<std::string>()) : s.get<std::vector<std::uint64_t>>();
  }
  if (j.contains("target")) config.target_fitness = j.at("target").get<double>();
  if (j.contains("max_evaluations")) config.max_evaluations = j.at("max_evaluations").get<std::size_t>();
  if (j.contains("max_seconds")) config.max_seconds = j.at("max_seconds").get<double>();
  if (j.contains("init_range")) config.init_range = j.at("init_range").get<double>();
  if (j.contains("sigma0")) config.sigma0 = j.at("sigma0").get<double>();
  if (j.contains("rotation_seed")) config.rotation_seed = j.at("rotation_seed").get<std::uint64_t>();
  if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("record_every")) config.record_every = j.at("record_every").get<std::size_t>();
  if (j.contains("jobs")) config.jobs = j.at("jobs").get<std::size_t>();
  if (j.contains("checkpoint_every")) config.checkpoint_every = j.at("checkpoint_every").get<std::size_t>();
  if (j.contains("resume")) config.resume = j.at("resume").get<bool>();
  if (j.contains("dump_rotation")) config.dump_rotation = j.at("dump_rotation").get<bool>();
  if (j.contains("overrides")) {
    const auto& o = j.at("overrides");
    for (const auto& [key, _] : o.items()) {
      if (!known_overrides.contains(key)) throw std::invalid_argument("config: unknown override '" + key + "'");
    }
    auto& ov = config.overrides;
    if (o.contains("m")) ov.m = o.at("m").get<std::size_t>();
    if (o.contains("n_steps")) ov.n_steps = o.at("n_steps").get<std::size_t>();
    if (o.contains("c_1")) ov.c_1 = o.at("c_1").get<double>();
    if (o.contains("c_sigma")) ov.c_sigma = o.at("c_sigma").get<double>();
    if (o.contains("d_sigma")) ov.d_sigma = o.at("d_sigma").get<double>();
    if (o.contains("z_star")) ov.z_star = o.at("z_star").get<double>();
    if (o.contains("rule")) ov.rule = parse_rule(o.at("rule").get<std::string>());
  }
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["algorithm"] = std::string(to_string(config.algorithm));
  j["function"] = std::string(problems::to_string(config.function));
  j["n"] = config.n;
  j["seeds"] = config.seeds;
  j["target"] = config.target_fitness;
  j["max_evaluations"] = config.max_evaluations;
  if (config.max_seconds) j["max_seconds"] = *config.max_seconds;
  j["init_range"] = config.init_range;
  j["sigma0"] = config.sigma0;
  j["rotation_seed"] = config.rotation_seed;
  j["record_every"] = config.record_every;
  nlohmann::json o = nlohmann::json::object();
  const auto& ov = config.overrides;
  if (ov.m) o["m"] = *ov.m;
  if (ov.n_steps) o["n_steps"] = *ov.n_steps;
  if (ov.c_1) o["c_1"] = *ov.c_1;
  if (ov.c_sigma) o["c_sigma"] = *ov.c_sigma;
  if (ov.d_sigma) o["d_sigma"] = *ov.d_sigma;
  if (ov.z_star) o["z_star"] = *ov.z_star;
  if (ov.rule) o["rule"] = *ov.rule == SuccessRule::Population ? "psr" : "msr";
  j["overrides"] = o;
  return j;
}

LmCmaParams lmcma_params(const ExperimentConfig& config) {
  LmCmaParams p = LmCmaParams::defaults(config.n);
  const auto& ov = config.overrides;
  if (ov.m) p.set_memory(*ov.m);
  if (ov.n_steps) p.n_steps = *ov.n_steps;
  if (ov.c_1) p.c_1 = *ov.c_1;
  if (ov.c_sigma) p.c_sigma = *ov.c_sigma;
  if (ov.d_sigma) p.d_sigma = *ov.d_sigma;
  if (ov.z_star) p.z_star = *ov.z_star;
  if (ov.rule) p.rule = *ov.rule;
  return p;
}

std::unique_ptr<Optimizer> make_optimizer(const ExperimentConfig& config, std::uint64_t seed) {
  SeededRng rng(seed);
  Vector mean(static_cast<Eigen::Index>(config.n));
  for (Eigen::Index i = 0; i < mean.size(); ++i) mean[i] = rng.uniform(-config.init_range, config.init_range);
  switch (config.algorithm) {
    case Algorithm::LmCma:
      return std::make_unique<LmCmaEs>(lmcma_params(config), std::move(mean), config.sigma0, std::move(rng));
    case Algorithm::Cholesky:
      return std::make_unique<CholeskyCmaEs>(CholeskyParams::defaults(config.n), std::move(mean), config.sigma0,
                                             std::move(rng));
    case Algorithm::SepCma:
      return std::make_unique<SepCmaEs>(SepParams::defaults(config.n), std::move(mean), config.sigma0, std::move(rng));
  }
  throw std::logic_error("make_optimizer: unknown algorithm");
}

}  // namespace lmcma::harness
