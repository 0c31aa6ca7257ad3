#include "pointlab/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pointlab/dist.hpp"
#include "pointlab/rng.hpp"

namespace pointlab {

namespace {

// log-space evaluation stays in range up to these bounds; beyond them no
// accuracy promise is made, so reject
constexpr std::int64_t kMaxDimension = 1000000;
constexpr double kMaxExtent = 1e6;

constexpr std::uint64_t kMcChunk = 1 << 16;

}  // namespace

OrthantSpec::OrthantSpec(std::int64_t dimension_, double extent_)
    : dimension(dimension_), extent(extent_) {
  if (dimension < 1) throw std::invalid_argument("OrthantSpec: dimension must be >= 1");
  if (dimension > kMaxDimension)
    throw std::invalid_argument("OrthantSpec: dimension must be <= 1e6");
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw std::invalid_argument("OrthantSpec: extent must be positive and finite");
  if (extent > kMaxExtent) throw std::invalid_argument("OrthantSpec: extent must be <= 1e6");
}

double orthant_log_volume_exact(const OrthantSpec& spec) {
  return static_cast<double>(spec.dimension) * std::log(spec.extent) -
         detail::log_factorial(spec.dimension);
}

double orthant_volume_exact(const OrthantSpec& spec) {
  return std::exp(orthant_log_volume_exact(spec));
}

double orthant_volume_recursive(const OrthantSpec& spec, std::int64_t quad_steps) {
  if (quad_steps < 10)
    throw std::invalid_argument("orthant_volume_recursive: quad_steps must be >= 10");
  if (spec.dimension == 1) return spec.extent;  // base case, no quadrature

  const auto steps = static_cast<std::size_t>(quad_steps);
  const double h = spec.extent / static_cast<double>(quad_steps);
  std::vector<double> f(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) f[j] = static_cast<double>(j) * h;  // V_1
  for (std::int64_t pass = 2; pass <= spec.dimension; ++pass) {
    double prev = f[0];
    f[0] = 0.0;
    for (std::size_t j = 1; j <= steps; ++j) {
      const double cur = f[j];
      f[j] = f[j - 1] + 0.5 * h * (prev + cur);
      prev = cur;
    }
  }
  return f[steps];
}

VolumeEstimate orthant_volume_mc(const OrthantSpec& spec, std::uint64_t samples,
                                 std::uint64_t seed) {
  if (samples < 1000)
    throw std::invalid_argument("orthant_volume_mc: needs at least 1000 samples");

  const auto x = static_cast<std::size_t>(spec.dimension);
  VolumeEstimate est;
  est.samples = samples;
  if (x == 1) {  // every 1-tuple is trivially ordered
    est.value = spec.extent;
    est.std_error = 0.0;
    return est;
  }

  // Chunked substreams: chunks can be evaluated in any order (or in
  // parallel) and merged by addition without changing the result. Ordering
  // of a uniform tuple is scale-free, so sampling the unit cube suffices.
  std::uint64_t hits = 0;
  std::uint64_t done = 0;
  for (std::uint64_t chunk = 0; done < samples; ++chunk) {
    RngStream stream(substream_seed(seed, chunk));
    const std::uint64_t n = std::min<std::uint64_t>(kMcChunk, samples - done);
    for (std::uint64_t i = 0; i < n; ++i) {
      bool ascending = true;
      double prev = stream.uniform01();
      for (std::size_t k = 1; k < x; ++k) {
        const double cur = stream.uniform01();
        // ties count as not ascending, mirroring the strict inequalities
        if (!(prev < cur)) ascending = false;
        prev = cur;
      }
      if (ascending) ++hits;
    }
    done += n;
  }

  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  const double se_p = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  const double log_cube = static_cast<double>(spec.dimension) * std::log(spec.extent);
  est.value = p == 0.0 ? 0.0 : std::exp(log_cube + std::log(p));
  est.std_error = se_p == 0.0 ? 0.0 : std::exp(log_cube + std::log(se_p));
  return est;
}

double conditional_log_event_density(std::int64_t x, double t) {
  if (x < 1) throw std::invalid_argument("conditional_event_density: needs x >= 1");
  return -orthant_log_volume_exact(OrthantSpec(x, t));
}

double conditional_event_density(std::int64_t x, double t) {
  return std::exp(conditional_log_event_density(x, t));
}

}  // namespace pointlab
