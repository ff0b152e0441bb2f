#include "lmcma/rng.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace lmcma {

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

void SeededRng::fill_normal(std::span<double> out) {
  for (double& value : out) value = normal();
}

void SeededRng::save(std::ostream& os) const {
  std::ostringstream engine_text;
  engine_text << engine_;
  os << seed_ << ' ' << (has_spare_ ? 1 : 0) << ' ';
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%a", spare_);
  os << buffer << ' ' << engine_text.str();
}

void SeededRng::load(std::istream& is) {
  int spare_flag = 0;
  std::string spare_text;
  is >> seed_ >> spare_flag >> spare_text >> engine_;
  if (!is) throw std::runtime_error("SeededRng: malformed state");
  has_spare_ = spare_flag != 0;
  spare_ = std::strtod(spare_text.c_str(), nullptr);
}

bool SeededRng::operator==(const SeededRng& other) const {
  return seed_ == other.seed_ && engine_ == other.engine_ && has_spare_ == other.has_spare_ &&
         (!has_spare_ || spare_ == other.spare_);
}

Vector sample_standard_normal_vector(SeededRng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample_standard_normal_vector: n must be positive");
  Vector z(static_cast<Eigen::Index>(n));
  rng.fill_normal({z.data(), n});
  return z;
}

}  // namespace lmcma
