#include "pointlab/gas.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <unordered_set>

namespace pointlab {

namespace {

std::uint64_t position_hash(const Vec3& p) {
  std::uint64_t bits[3];
  std::memcpy(&bits[0], &p.x, sizeof(double));
  std::memcpy(&bits[1], &p.y, sizeof(double));
  std::memcpy(&bits[2], &p.z, sizeof(double));
  std::uint64_t h = 0x9E3779B97F4A7C15ULL;
  for (std::uint64_t b : bits) {
    h ^= b;
    h = SplitMix64(h).next();
  }
  return h;
}

Vec3 draw_position(RngStream& stream, const Box& box) {
  return {stream.uniform_half_open(box.lx), stream.uniform_half_open(box.ly),
          stream.uniform_half_open(box.lz)};
}

// Uniform placement with a coordinate-collision guard: a repeated hash
// (which any exact duplicate would produce) redraws the particle. A false
// hash collision only redraws a uniform point, which is distribution-neutral.
void fill_positions(RngStream& stream, const Box& box, std::int64_t n,
                    std::vector<Vec3>& out, std::unordered_set<std::uint64_t>& seen) {
  out.clear();
  out.reserve(static_cast<std::size_t>(n));
  seen.clear();
  for (std::int64_t i = 0; i < n; ++i) {
    Vec3 p = draw_position(stream, box);
    while (!seen.insert(position_hash(p)).second) p = draw_position(stream, box);
    out.push_back(p);
  }
}

std::int64_t draw_total(const GasConfig& config, RngStream& stream) {
  if (config.mode == GasMode::fixed_count) return config.particles;
  return stream.poisson(config.density * config.box.volume());
}

// [lo, hi] carrying all but ~1e-10 of the Binomial(n, p) marginal
std::pair<std::int64_t, std::int64_t> marginal_range(std::int64_t n, double p) {
  const Pmf table = binomial_pmf_table(BinomialParams(n, p));
  std::int64_t lo = 0;
  std::int64_t hi = n;
  double trimmed = 0.0;
  while (lo < hi && trimmed + table.at(lo) < 5e-11) trimmed += table.at(lo++);
  trimmed = 0.0;
  while (hi > lo && trimmed + table.at(hi) < 5e-11) trimmed += table.at(hi--);
  return {lo, hi};
}

}  // namespace

Box::Box(double lx_, double ly_, double lz_) : lx(lx_), ly(ly_), lz(lz_) {
  if (!(lx > 0.0) || !(ly > 0.0) || !(lz > 0.0) || !std::isfinite(lx) || !std::isfinite(ly) ||
      !std::isfinite(lz))
    throw std::invalid_argument("Box: extents must be positive and finite");
}

Region::Region(const Vec3& lo_, const Vec3& hi_) : lo(lo_), hi(hi_) {
  if (!(lo.x >= 0.0) || !(lo.y >= 0.0) || !(lo.z >= 0.0))
    throw std::invalid_argument("Region: lower corner must be >= 0");
  if (!(lo.x < hi.x) || !(lo.y < hi.y) || !(lo.z < hi.z))
    throw std::invalid_argument("Region: upper corner must exceed lower corner");
}

void Region::validate_within(const Box& box) const {
  if (!(hi.x <= box.lx) || !(hi.y <= box.ly) || !(hi.z <= box.lz))
    throw std::invalid_argument("Region: must lie within the box");
}

bool regions_disjoint(const Region& a, const Region& b) {
  // half-open boxes overlap only when every axis overlaps with positive
  // measure; sharing a face is disjoint
  const bool x = a.lo.x < b.hi.x && b.lo.x < a.hi.x;
  const bool y = a.lo.y < b.hi.y && b.lo.y < a.hi.y;
  const bool z = a.lo.z < b.hi.z && b.lo.z < a.hi.z;
  return !(x && y && z);
}

void GasConfig::validate() const {
  if (mode == GasMode::fixed_count && particles < 0)
    throw std::invalid_argument("GasConfig: particle count must be >= 0");
  if (mode == GasMode::fixed_density && (!(density > 0.0) || !std::isfinite(density)))
    throw std::invalid_argument("GasConfig: density must be positive and finite");
  for (const Region& r : regions) r.validate_within(box);
  for (std::size_t i = 0; i < regions.size(); ++i)
    for (std::size_t j = i + 1; j < regions.size(); ++j)
      if (!regions_disjoint(regions[i], regions[j]))
        throw std::invalid_argument("GasConfig: regions must be pairwise disjoint");
}

GasConfig GasConfig::fixed_count_config(std::int64_t particles, const Box& box,
                                        std::vector<Region> regions, std::uint64_t seed) {
  GasConfig config(GasMode::fixed_count, box);
  config.particles = particles;
  config.regions = std::move(regions);
  config.seed = seed;
  config.validate();
  return config;
}

GasConfig GasConfig::fixed_density_config(double density, const Box& box,
                                          std::vector<Region> regions, std::uint64_t seed) {
  GasConfig config(GasMode::fixed_density, box);
  config.density = density;
  config.regions = std::move(regions);
  config.seed = seed;
  config.validate();
  return config;
}

std::vector<Vec3> place_particles(const GasConfig& config, RngStream& stream) {
  std::vector<Vec3> positions;
  std::unordered_set<std::uint64_t> seen;
  fill_positions(stream, config.box, draw_total(config, stream), positions, seen);
  return positions;
}

std::vector<Vec3> place_particles(const GasConfig& config) {
  RngStream stream(config.seed);
  return place_particles(config, stream);
}

std::int64_t count_in_region(std::span<const Vec3> positions, const Region& region) {
  std::int64_t count = 0;
  for (const Vec3& p : positions)
    if (region.contains(p)) ++count;
  return count;
}

BinomialExperimentResult conditional_binomial_experiment(const GasConfig& config,
                                                         const Region& region,
                                                         std::uint64_t replicas) {
  if (config.mode != GasMode::fixed_count)
    throw std::invalid_argument("conditional_binomial_experiment: requires fixed_count mode");
  region.validate_within(config.box);

  BinomialExperimentResult result;
  result.trials = config.particles;
  result.p = region.volume() / config.box.volume();

  std::vector<Vec3> positions;
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(config.seed, i));
    fill_positions(stream, config.box, config.particles, positions, seen);
    result.histogram.add(count_in_region(positions, region));
  }

  const Pmf law = binomial_pmf_table(BinomialParams(result.trials, result.p));
  result.gof = chi_square_gof(result.histogram, law);
  return result;
}

MultinomialExperimentResult multinomial_partition_experiment(const GasConfig& config,
                                                             std::span<const Region> regions,
                                                             std::uint64_t replicas) {
  if (config.mode != GasMode::fixed_count)
    throw std::invalid_argument("multinomial_partition_experiment: requires fixed_count mode");
  if (regions.empty())
    throw std::invalid_argument("multinomial_partition_experiment: needs at least one region");
  std::vector<double> volumes;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    regions[i].validate_within(config.box);
    volumes.push_back(regions[i].volume());
    for (std::size_t j = i + 1; j < regions.size(); ++j)
      if (!regions_disjoint(regions[i], regions[j]))
        throw std::invalid_argument("multinomial_partition_experiment: regions must be disjoint");
  }

  const double v_total = config.box.volume();
  MultinomialExperimentResult result{
      {}, {}, conditional_subcount_law(config.particles, volumes, v_total)};

  std::vector<Vec3> positions;
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::int64_t> key(regions.size());
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(config.seed, i));
    fill_positions(stream, config.box, config.particles, positions, seen);
    for (std::size_t r = 0; r < regions.size(); ++r)
      key[r] = count_in_region(positions, regions[r]);
    result.joint.add(key);
  }

  // Cells are enumerated from the law itself (the product of marginal
  // ranges), never from the data: selecting cells by what was observed
  // biases the statistic upward. Everything outside the enumerated block is
  // one pooled rest cell.
  std::vector<std::pair<std::int64_t, std::int64_t>> ranges;
  ranges.reserve(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r)
    ranges.push_back(marginal_range(config.particles, result.law.probs[r]));

  std::vector<double> observed;
  std::vector<double> expected;
  const double n = static_cast<double>(result.joint.total);
  double enumerated_mass = 0.0;
  double enumerated_observed = 0.0;
  std::vector<std::int64_t> tuple(regions.size());
  std::vector<std::int64_t> with_rest(regions.size() + 1);
  for (std::size_t r = 0; r < regions.size(); ++r) tuple[r] = ranges[r].first;
  for (;;) {
    std::int64_t in_regions = 0;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      with_rest[r] = tuple[r];
      in_regions += tuple[r];
    }
    if (in_regions <= config.particles) {
      with_rest.back() = config.particles - in_regions;
      const double p = multinomial_pmf(with_rest, result.law);
      const auto it = result.joint.frequencies.find(tuple);
      const double freq = it == result.joint.frequencies.end()
                              ? 0.0
                              : static_cast<double>(it->second);
      observed.push_back(freq);
      expected.push_back(p * n);
      enumerated_mass += p;
      enumerated_observed += freq;
    }
    // odometer over the enumeration block
    std::size_t digit = 0;
    for (; digit < tuple.size(); ++digit) {
      if (++tuple[digit] <= ranges[digit].second) break;
      tuple[digit] = ranges[digit].first;
    }
    if (digit == tuple.size()) break;
  }
  observed.push_back(n - enumerated_observed);
  expected.push_back(std::max(0.0, 1.0 - enumerated_mass) * n);

  result.gof = chi_square_pooled_cells(std::move(observed), std::move(expected));
  return result;
}

std::vector<ThermoPoint> thermodynamic_limit_sweep(
    double density, double sub_volume,
    std::span<const std::pair<std::int64_t, double>> nv_pairs) {
  if (!(density > 0.0) || !std::isfinite(density))
    throw std::invalid_argument("thermodynamic_limit_sweep: density must be positive");
  if (!(sub_volume > 0.0) || !std::isfinite(sub_volume))
    throw std::invalid_argument("thermodynamic_limit_sweep: sub-volume must be positive");
  if (nv_pairs.empty()) throw std::invalid_argument("thermodynamic_limit_sweep: no pairs");

  const Pmf target = poisson_pmf_table(PoissonParams(density * sub_volume), 1e-12);
  std::vector<ThermoPoint> out;
  out.reserve(nv_pairs.size());
  for (const auto& [n, v] : nv_pairs) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("thermodynamic_limit_sweep: volumes must be positive");
    if (std::fabs(static_cast<double>(n) / v - density) > 1e-12 * density)
      throw std::invalid_argument("thermodynamic_limit_sweep: pair violates N/V = density");
    if (sub_volume > v)
      throw std::invalid_argument("thermodynamic_limit_sweep: sub-volume must fit in every V");
    const Pmf law = binomial_pmf_table(BinomialParams(n, sub_volume / v));
    out.push_back({n, v, tv_distance(law, target)});
  }
  return out;
}

ConditioningEquivalenceResult conditioning_equivalence_check(const Box& box, const Region& region,
                                                             double density,
                                                             std::uint64_t replicas,
                                                             std::uint64_t seed) {
  if (!(density > 0.0) || !std::isfinite(density))
    throw std::invalid_argument("conditioning_equivalence_check: density must be positive");
  region.validate_within(box);

  const double mean_total = density * box.volume();
  const auto n_star = static_cast<std::int64_t>(std::llround(mean_total));
  if (n_star < 1)
    throw std::invalid_argument("conditioning_equivalence_check: expected total below 1");

  ConditioningEquivalenceResult result;
  result.conditioned_on = n_star;

  // open reservoir, keeping only replicas whose total hits n_star; placement
  // for the discarded replicas is skipped, which is harmless because every
  // replica owns an independent substream
  CountHistogram conditioned;
  std::vector<Vec3> positions;
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(seed, i));
    if (stream.poisson(mean_total) != n_star) continue;
    fill_positions(stream, box, n_star, positions, seen);
    conditioned.add(count_in_region(positions, region));
  }
  result.matching_replicas = conditioned.total;

  // closed reservoir with exactly n_star particles, one replica per retained
  // open-reservoir replica; substream indices continue past the first block
  CountHistogram closed;
  for (std::uint64_t i = 0; i < conditioned.total; ++i) {
    RngStream stream(substream_seed(seed, replicas + i));
    fill_positions(stream, box, n_star, positions, seen);
    closed.add(count_in_region(positions, region));
  }

  result.gof = chi_square_two_sample(conditioned, closed);
  return result;
}

}  // namespace pointlab
