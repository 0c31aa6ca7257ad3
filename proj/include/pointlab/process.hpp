#ifndef POINTLAB_PROCESS_HPP
#define POINTLAB_PROCESS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "pointlab/dist.hpp"
#include "pointlab/histogram.hpp"
#include "pointlab/rng.hpp"
#include "pointlab/stats.hpp"

namespace pointlab {

// Two independent constructions of the same process: cumulative exponential
// gaps, and a total count drawn from the exact law followed by uniform
// placement. They must agree statistically, which the test suites verify.
enum class GenerationMethod { interarrival, conditional_uniform };

struct ProcessConfig {
  double rate;     // events per unit time
  double horizon;  // observation window (0, horizon]
  std::uint64_t seed;
  GenerationMethod method;
  ProcessConfig(double rate_, double horizon_, std::uint64_t seed_, GenerationMethod method_);
};

// Strictly increasing event times in (0, horizon].
struct EventSequence {
  std::vector<double> times;
  double horizon = 0.0;

  void validate() const;
};

// Half-open interval (lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Pairwise disjoint intervals within (0, horizon].
struct Subdivision {
  std::vector<Interval> intervals;

  void validate(double horizon) const;
};

EventSequence generate(const ProcessConfig& config);
EventSequence generate(const ProcessConfig& config, RngStream& stream);

// Event count of one realization without materializing the times.
std::int64_t generate_count(const ProcessConfig& config, RngStream& stream);

// Count histogram over independent replicas; replica i uses the substream
// derived from (config.seed, i), so the result does not depend on execution
// order.
CountHistogram replicate_counts(const ProcessConfig& config, std::uint64_t replicas);

std::vector<std::int64_t> count_in(const EventSequence& events, const Subdivision& subdivision);

// Observed frequencies as a probability table (tail_bound 0).
Pmf empirical_pmf(const CountHistogram& hist);

struct RarityPoint {
  double width = 0.0;
  double ratio = 0.0;  // (#bins with >= 2 events) / (#bins with exactly 1)
  bool defined = false;
  std::uint64_t bins_ge2 = 0;
  std::uint64_t bins_eq1 = 0;
  std::uint64_t bins_total = 0;
};

// Pools fixed-width bins over replicas and reports, per width, the ratio of
// multiply-occupied to singly-occupied bins. For the process itself the
// ratio is (1 - e^-u - u e^-u) / (u e^-u) with u = rate * width, which
// vanishes as the width shrinks.
std::vector<RarityPoint> axiom_rarity_check(const ProcessConfig& config,
                                            std::span<const double> bin_widths,
                                            std::uint64_t replicas);

// The exact ratio above, evaluated cancellation-free as (expm1(u) - u)/u.
double rarity_reference_ratio(double rate, double width);

struct CorrelationEstimate {
  double correlation = 0.0;
  double std_error = 0.0;  // null-hypothesis scale 1/sqrt(replicas)
  std::uint64_t replicas = 0;
  bool defined = false;
};

// Sample Pearson correlation between the counts in two disjoint intervals
// across replicas; zero in expectation for independent increments.
CorrelationEstimate axiom_independence_check(const ProcessConfig& config, const Interval& a,
                                             const Interval& b, std::uint64_t replicas);

struct RateWindow {
  std::int64_t events = 0;
  double extent = 0.0;
};

struct RateEstimate {
  std::vector<double> ratios;  // per-window events/extent
  double pooled = 0.0;         // sum(events) / sum(extent)
};

RateEstimate rate_estimate(std::span<const RateWindow> windows);

struct UniformityResult {
  GofResult gof;
  std::uint64_t pooled_events = 0;
  std::uint64_t matching_replicas = 0;
};

// Pools event times from replicas whose total count equals `given_count` and
// tests them against the uniform law on (0, horizon] over `bins` equal cells.
UniformityResult conditional_uniformity_check(const ProcessConfig& config,
                                              std::int64_t given_count,
                                              std::uint64_t replicas, std::int64_t bins);

}  // namespace pointlab

#endif
