#pragma once

#include "lmcma/direction_store.hpp"
#include "lmcma/driver.hpp"
#include "lmcma/optimizer.hpp"
#include "lmcma/rng.hpp"
#include "lmcma/stepsize.hpp"
#include "lmcma/weights.hpp"

#include <iosfwd>
#include <vector>

namespace lmcma {

enum class SuccessRule { Population, Median };

struct LmCmaParams {
  std::size_t n = 0;
  std::size_t lambda = 0;
  RecombinationWeights weights;
  std::size_t m = 0;        // store capacity
  std::size_t n_steps = 0;  // target spacing of stored vectors, in iterations
  double c_c = 0.0;
  double c_1 = 0.0;
  double c_sigma = 0.3;
  double d_sigma = 1.0;
  double z_star = 0.25;
  SuccessRule rule = SuccessRule::Population;

  /// lambda = m = N_steps = 4 + floor(3 ln n), c_c = 1/m, c_1 = 1/(10 ln(n+1)).
  static LmCmaParams defaults(std::size_t n);

  /// Recomputes the fields that depend on others after an override:
  /// weights from lambda, and optionally c_c from m.
  void set_lambda(std::size_t lambda);
  void set_memory(std::size_t m, bool keep_c_c = false);

  void validate() const;
};

/// Limited-memory CMA-ES with population success rule step-size control.
class LmCmaEs final : public Optimizer {
 public:
  LmCmaEs(LmCmaParams params, Vector mean, double sigma, SeededRng rng);

  std::string_view name() const override { return "lmcma"; }
  std::size_t dimension() const override { return params_.n; }
  std::size_t population_size() const override { return params_.lambda; }

  const RowMatrix& ask() override;
  void tell(std::span<const double> fitness) override;

  const Vector& mean() const override { return mean_; }
  double sigma() const override { return sigma_; }
  std::size_t iteration() const override { return t_; }
  std::size_t state_bytes() const override;

  const LmCmaParams& params() const { return params_; }
  const DirectionStore& store() const { return store_; }
  const Vector& evolution_path() const { return p_c_; }
  const stepsize::PsrState& success_state() const { return success_; }
  const SeededRng& rng() const { return rng_; }

  /// Versioned text snapshot of the complete state; see README for the
  /// field order. Reals are written as hexadecimal floats, so a restored
  /// optimizer continues bit-identically.
  void save(std::ostream& os) const;
  static LmCmaEs load(std::istream& is);

 private:
  LmCmaEs(LmCmaParams params, Vector mean, double sigma, SeededRng rng, DirectionStore store);

  LmCmaParams params_;
  Vector mean_;
  double sigma_;
  Vector p_c_;
  DirectionStore store_;
  stepsize::PsrState success_;
  std::size_t t_ = 0;
  SeededRng rng_;

  double a_;      // sqrt(1 - c_1)
  double c_inv_;  // 1 / sqrt(1 - c_1)
  RowMatrix population_;
  Vector z_;
  Vector scratch_;
  std::vector<std::size_t> ranking_;
  bool asked_ = false;
};

RunTrace lmcma_optimize(const ObjectiveProblem& problem, const LmCmaParams& params, const Vector& mean0,
                        double sigma0, SeededRng rng, const Termination& termination,
                        const RunOptions& options = {});

}  // namespace lmcma
