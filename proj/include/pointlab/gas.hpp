#ifndef POINTLAB_GAS_HPP
#define POINTLAB_GAS_HPP

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "pointlab/dist.hpp"
#include "pointlab/histogram.hpp"
#include "pointlab/rng.hpp"
#include "pointlab/stats.hpp"

namespace pointlab {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

// Reservoir: the box (0, lx] x (0, ly] x (0, lz].
struct Box {
  double lx, ly, lz;
  Box(double lx_, double ly_, double lz_);
  double volume() const { return lx * ly * lz; }
};

// Axis-aligned sub-box; membership is half-open (lo, hi] on every axis so a
// particle on a shared face belongs to exactly one of two touching regions.
struct Region {
  Vec3 lo;
  Vec3 hi;
  Region(const Vec3& lo_, const Vec3& hi_);
  double volume() const { return (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z); }
  bool contains(const Vec3& p) const {
    return p.x > lo.x && p.x <= hi.x && p.y > lo.y && p.y <= hi.y && p.z > lo.z && p.z <= hi.z;
  }
  void validate_within(const Box& box) const;
};

bool regions_disjoint(const Region& a, const Region& b);

// fixed_count: exactly N particles per replica (closed reservoir).
// fixed_density: the count is drawn from the exact law with mean
// density * volume, then placed uniformly (open reservoir).
enum class GasMode { fixed_count, fixed_density };

struct GasConfig {
  GasMode mode;
  std::int64_t particles = 0;  // fixed_count
  double density = 0.0;        // fixed_density, particles per unit volume
  Box box;
  std::vector<Region> regions;
  std::uint64_t seed = 0;

  static GasConfig fixed_count_config(std::int64_t particles, const Box& box,
                                      std::vector<Region> regions, std::uint64_t seed);
  static GasConfig fixed_density_config(double density, const Box& box,
                                        std::vector<Region> regions, std::uint64_t seed);

 private:
  GasConfig(GasMode mode_, const Box& box_) : mode(mode_), box(box_) {}
  void validate() const;
};

// i.i.d. uniform positions in the box; coordinate collisions (measure-zero)
// trigger a redraw of the offending particle.
std::vector<Vec3> place_particles(const GasConfig& config);
std::vector<Vec3> place_particles(const GasConfig& config, RngStream& stream);

std::int64_t count_in_region(std::span<const Vec3> positions, const Region& region);

struct BinomialExperimentResult {
  CountHistogram histogram;
  GofResult gof;
  std::int64_t trials = 0;
  double p = 0.0;  // region volume / box volume
};

// Region counts over replicas of a closed reservoir, tested against the
// binomial law with p = v/V.
BinomialExperimentResult conditional_binomial_experiment(const GasConfig& config,
                                                         const Region& region,
                                                         std::uint64_t replicas);

struct JointHistogram {
  std::map<std::vector<std::int64_t>, std::uint64_t> frequencies;
  std::uint64_t total = 0;

  void add(const std::vector<std::int64_t>& key) {
    ++frequencies[key];
    ++total;
  }
};

struct MultinomialExperimentResult {
  JointHistogram joint;  // counts per region; the remainder count is implied
  GofResult gof;
  MultinomialParams law;
};

// Joint counts over k disjoint regions of a closed reservoir, tested against
// the multinomial law with p_i = v_i/V and an implicit remainder category.
MultinomialExperimentResult multinomial_partition_experiment(const GasConfig& config,
                                                             std::span<const Region> regions,
                                                             std::uint64_t replicas);

struct ThermoPoint {
  std::int64_t particles = 0;
  double volume = 0.0;
  double tv = 0.0;  // TV(Binomial(N, v/V), Poisson(density * v))
};

// Exact distances along a sequence of reservoirs growing at fixed density;
// no sampling is involved.
std::vector<ThermoPoint> thermodynamic_limit_sweep(
    double density, double sub_volume,
    std::span<const std::pair<std::int64_t, double>> nv_pairs);

struct ConditioningEquivalenceResult {
  GofResult gof;
  std::int64_t conditioned_on = 0;  // total count the open reservoir was conditioned on
  std::uint64_t matching_replicas = 0;
};

// Region counts of the open reservoir conditioned on its total count n must
// match the closed reservoir with exactly n particles; checked with the
// two-sample chi-square.
ConditioningEquivalenceResult conditioning_equivalence_check(const Box& box, const Region& region,
                                                             double density,
                                                             std::uint64_t replicas,
                                                             std::uint64_t seed);

}  // namespace pointlab

#endif
