#pragma once

#include "lmcma/lm_cma.hpp"
#include "lmcma/optimizer.hpp"
#include "lmcma/problems.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmcma::harness {

enum class Algorithm { LmCma, Cholesky, SepCma };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// LM-CMA-ES parameter overrides. Unset fields keep their defaults.
struct ParameterOverrides {
  std::optional<std::size_t> m;
  std::optional<std::size_t> n_steps;
  std::optional<double> c_1;
  std::optional<double> c_sigma;
  std::optional<double> d_sigma;
  std::optional<double> z_star;
  std::optional<SuccessRule> rule;

  bool empty() const;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::LmCma;
  problems::Function function = problems::Function::Sphere;
  std::size_t n = 0;
  std::vector<std::uint64_t> seeds = default_seeds();
  double target_fitness = 1e-10;
  std::size_t max_evaluations = 10'000'000;
  std::optional<double> max_seconds;
  double init_range = 5.0;  // mean ~ uniform[-init_range, init_range]^n
  double sigma0 = 5.0;
  ParameterOverrides overrides;
  std::uint64_t rotation_seed = 1;
  std::filesystem::path output_dir;
  std::size_t record_every = 1;
  std::size_t jobs = 0;  // 0: one worker per hardware thread
  std::size_t checkpoint_every = 0;
  bool resume = false;
  bool dump_rotation = false;

  static std::vector<std::uint64_t> default_seeds(std::uint64_t base = 1, std::size_t count = 11);

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  /// File stem shared by this experiment's outputs, e.g. "lmcma_sphere_n128".
  std::string stem() const;
};

/// Parses "a..b" (inclusive range), "a,b,c" or a single integer.
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Applies the keys present in `j` on top of `config`. Unknown keys are
/// rejected so that typos do not silently fall back to defaults.
void apply_json(ExperimentConfig& config, const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

LmCmaParams lmcma_params(const ExperimentConfig& config);

/// Optimizer for one seed. The mean is drawn uniformly from the initialization
/// box with SeededRng(seed); the same generator then drives the optimizer.
std::unique_ptr<Optimizer> make_optimizer(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace lmcma::harness
