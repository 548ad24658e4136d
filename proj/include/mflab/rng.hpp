#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace mflab {

// Deterministic random source. Distributions are hand-rolled on top of
// mt19937_64 so that streams are reproducible across standard library
// implementations (std::uniform_real_distribution is not pinned down).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mflab
