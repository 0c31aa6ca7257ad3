#ifndef POINTLAB_RNG_HPP
#define POINTLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace pointlab {

// splitmix64 (Vigna, public domain). Used to condition user seeds and to
// derive independent substreams from (seed, index) pairs.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// Seed for replica `index` of master seed `seed`. Replica streams do not
// depend on execution order, so replicated experiments give identical
// results whether they run sequentially or in parallel.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t base = SplitMix64(seed).next();
  return SplitMix64(base + index).next();
}

// Deterministic random stream: a standard mt19937_64 engine (output sequence
// fixed by the C++ standard) with hand-rolled variate conversions, so that
// identical seeds give identical draws on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(SplitMix64(seed).next()) {}

  std::uint64_t bits() { return engine_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // uniform on (0, 1); the zero draw (probability 2^-53) is rejected
  double uniform01_pos() {
    double u = uniform01();
    while (u == 0.0) u = uniform01();
    return u;
  }

  // uniform on (0, extent]
  double uniform_half_open(double extent) { return extent * (1.0 - uniform01()); }

  double exponential(double rate) { return -std::log(uniform01_pos()) / rate; }

  // Poisson variate. CDF inversion by sequential search below mean 10 (one
  // uniform per variate; deliberately not the multiplicative scheme, which
  // is the interarrival construction in disguise and would defeat
  // cross-validation against it), Hormann's transformed rejection (PTRS)
  // above, constants from the published fit.
  std::int64_t poisson(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean))
      throw std::invalid_argument("poisson: mean must be positive and finite");
    if (mean < 10.0) {
      const double u = uniform01();
      double pmf = std::exp(-mean);
      double cum = pmf;
      std::int64_t k = 0;
      // beyond this point the CDF has saturated in double precision
      const auto cap = static_cast<std::int64_t>(mean + 50.0 * std::sqrt(mean) + 30.0);
      while (u > cum && k < cap) {
        ++k;
        pmf *= mean / static_cast<double>(k);
        cum += pmf;
      }
      return k;
    }
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = uniform01() - 0.5;
      const double v = uniform01_pos();
      const double us = 0.5 - std::fabs(u);
      const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      const auto k = static_cast<std::int64_t>(kf);
      const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
      const double rhs =
          -mean + kf * log_mean - std::lgamma(kf + 1.0);
      if (lhs <= rhs) return k;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pointlab

#endif
