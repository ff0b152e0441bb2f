#pragma once

#include "lmcma/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>

namespace lmcma {

/// Deterministic generator seeded from a 64-bit value.
///
/// Uniform draws take the top 53 bits of a std::mt19937_64 output, whose
/// sequence is fixed by the C++ standard. Standard-normal draws use the
/// Marsaglia polar method on those uniforms; the second value of each
/// accepted pair is cached and returned by the next call. Results are
/// bit-reproducible wherever std::log and std::sqrt agree, which holds for
/// glibc on x86-64.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();

  /// Overwrites every entry of `out` with independent N(0,1) draws.
  void fill_normal(std::span<double> out);

  void save(std::ostream& os) const;
  void load(std::istream& is);

  bool operator==(const SeededRng& other) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// n standard-normal draws. Throws std::invalid_argument for n == 0.
Vector sample_standard_normal_vector(SeededRng& rng, std::size_t n);

}  // namespace lmcma
