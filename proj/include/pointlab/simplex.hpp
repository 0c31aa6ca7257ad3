#ifndef POINTLAB_SIMPLEX_HPP
#define POINTLAB_SIMPLEX_HPP

#include <cstdint>

namespace pointlab {

// The ordered region 0 < t_1 < ... < t_x <= t, a right regular x-simplex
// carved out of the x-cube of side t.
struct OrthantSpec {
  std::int64_t dimension;  // x >= 1
  double extent;           // t > 0
  OrthantSpec(std::int64_t dimension_, double extent_);
};

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

// t^x / x!, evaluated in log space; equals the cube volume divided by x!.
double orthant_volume_exact(const OrthantSpec& spec);
double orthant_log_volume_exact(const OrthantSpec& spec);

// The same volume by iterating the cumulative integral V_{k+1}(u) =
// integral_0^u V_k, starting from V_1(u) = u, with composite trapezoid on a
// uniform grid. Converges O(steps^-2) to the exact value.
double orthant_volume_recursive(const OrthantSpec& spec, std::int64_t quad_steps);

// Hit-or-miss estimate: the fraction of uniform x-tuples drawn in the cube
// that land in strictly ascending order, scaled by the cube volume. Directly
// witnesses the 1/x! ratio between the ordered region and the cube.
VolumeEstimate orthant_volume_mc(const OrthantSpec& spec, std::uint64_t samples,
                                 std::uint64_t seed);

// x!/t^x: the flat density of the ordered event tuple given x events on the
// extent; the exact reciprocal of the orthant volume.
double conditional_event_density(std::int64_t x, double t);
double conditional_log_event_density(std::int64_t x, double t);

}  // namespace pointlab

#endif
