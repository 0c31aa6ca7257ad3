#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "pointlab/dist.hpp"
#include "pointlab/gas.hpp"
#include "pointlab/process.hpp"
#include "pointlab/stats.hpp"

using namespace pointlab;

TEST_CASE("box and region validation") {
  CHECK_THROWS_AS(Box(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Box(1.0, -1.0, 1.0), std::invalid_argument);
  CHECK(Box(2.0, 3.0, 4.0).volume() == 24.0);

  CHECK_THROWS_AS(Region({0, 0, 0}, {0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Region({-0.5, 0, 0}, {1, 1, 1}), std::invalid_argument);
  const Region r({0.5, 0.5, 0.5}, {1.0, 1.0, 1.0});
  CHECK(r.volume() == doctest::Approx(0.125));
  CHECK_NOTHROW(r.validate_within(Box(1, 1, 1)));
  CHECK_THROWS_AS(r.validate_within(Box(0.75, 1, 1)), std::invalid_argument);
}

TEST_CASE("region membership is half-open on every axis") {
  const Region r({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  CHECK(r.contains({1.0, 1.0, 1.0}));        // upper faces belong to the region
  CHECK_FALSE(r.contains({0.0, 0.5, 0.5}));  // lower faces do not
  CHECK_FALSE(r.contains({0.5, 0.5, 1.5}));
  CHECK(r.contains({0.5, 0.5, 0.5}));
}

TEST_CASE("disjointness allows shared faces") {
  const Region a({0, 0, 0}, {1, 1, 1});
  const Region b({1, 0, 0}, {2, 1, 1});  // touches a's x = 1 face
  const Region c({0.5, 0.5, 0.5}, {1.5, 1.5, 1.5});
  CHECK(regions_disjoint(a, b));
  CHECK_FALSE(regions_disjoint(a, c));
  CHECK_THROWS_AS(
      GasConfig::fixed_count_config(10, Box(2, 2, 2), {a, c}, 1), std::invalid_argument);
  CHECK_NOTHROW(GasConfig::fixed_count_config(10, Box(2, 2, 2), {a, b}, 1));
}

TEST_CASE("placement basics") {
  const Box box(2.0, 3.0, 4.0);
  {
    const auto none = place_particles(GasConfig::fixed_count_config(0, box, {}, 5));
    CHECK(none.empty());
  }
  const GasConfig config = GasConfig::fixed_count_config(500, box, {}, 5);
  const auto positions = place_particles(config);
  CHECK(positions.size() == 500);
  for (const Vec3& p : positions) {
    CHECK(p.x > 0.0);
    CHECK(p.x <= box.lx);
    CHECK(p.y > 0.0);
    CHECK(p.y <= box.ly);
    CHECK(p.z > 0.0);
    CHECK(p.z <= box.lz);
  }
  CHECK(place_particles(config) == place_particles(config));
  CHECK_THROWS_AS(GasConfig::fixed_count_config(-1, box, {}, 5), std::invalid_argument);
  CHECK_THROWS_AS(GasConfig::fixed_density_config(0.0, box, {}, 5), std::invalid_argument);
}

TEST_CASE("no replica contains duplicate positions") {
  const Box box(1.0, 1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto positions =
        place_particles(GasConfig::fixed_count_config(1000, box, {}, seed));
    std::set<std::tuple<double, double, double>> unique;
    for (const Vec3& p : positions) unique.insert({p.x, p.y, p.z});
    CHECK(unique.size() == positions.size());
  }
}

TEST_CASE("count_in_region") {
  const Region region({0, 0, 0}, {1, 1, 1});
  CHECK(count_in_region(std::vector<Vec3>{}, region) == 0);
  const Box box(1, 1, 1);
  const auto positions = place_particles(GasConfig::fixed_count_config(123, box, {}, 9));
  CHECK(count_in_region(positions, Region({0, 0, 0}, {1, 1, 1})) == 123);
}

TEST_CASE("partition counts sum to the particle total") {
  const Box box(2, 2, 2);
  std::vector<Region> octants;
  for (int ix = 0; ix < 2; ++ix)
    for (int iy = 0; iy < 2; ++iy)
      for (int iz = 0; iz < 2; ++iz)
        octants.push_back(Region({ix * 1.0, iy * 1.0, iz * 1.0},
                                 {ix * 1.0 + 1.0, iy * 1.0 + 1.0, iz * 1.0 + 1.0}));
  const GasConfig config = GasConfig::fixed_count_config(777, box, octants, 13);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream stream(substream_seed(13, seed));
    const auto positions = place_particles(config, stream);
    std::int64_t total = 0;
    for (const Region& r : octants) total += count_in_region(positions, r);
    CHECK(total == 777);
  }
}

TEST_CASE("single-particle region count is a bernoulli draw") {
  const Box box(1, 1, 2);
  const Region half({0, 0, 0}, {1, 1, 1});  // v/V = 0.5
  const GasConfig config = GasConfig::fixed_count_config(1, box, {}, 21);
  std::uint64_t inside = 0;
  const std::uint64_t replicas = 20000;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(21, i));
    const auto positions = place_particles(config, stream);
    inside += static_cast<std::uint64_t>(count_in_region(positions, half));
  }
  const double freq = static_cast<double>(inside) / static_cast<double>(replicas);
  CHECK(std::fabs(freq - 0.5) < 3.0 * std::sqrt(0.25 / static_cast<double>(replicas)));
}

TEST_CASE("closed-reservoir region counts follow the binomial law") {
  const Box box(2, 2, 2);
  const Region region({0, 0, 0}, {1, 1, 1});  // p = 1/8
  const GasConfig config = GasConfig::fixed_count_config(200, box, {}, 30303);
  const auto res = conditional_binomial_experiment(config, region, 20000);
  CHECK(res.trials == 200);
  CHECK(res.p == doctest::Approx(0.125));
  CHECK(res.gof.p_value >= 0.001);
  CHECK(res.histogram.total == 20000);

  const GasConfig open = GasConfig::fixed_density_config(1.0, box, {}, 1);
  CHECK_THROWS_AS(conditional_binomial_experiment(open, region, 100), std::invalid_argument);

  // the empirical histogram sits near its exact binomial law but a visible
  // distance from the open-reservoir limit law with the same mean
  const Pmf empirical = empirical_pmf(res.histogram);
  const Pmf limit_law = poisson_pmf_table(PoissonParams(25.0), 1e-12);
  const double tv_emp = tv_distance(empirical, limit_law);
  CHECK(tv_emp > 0.0);
  CHECK(tv_emp < 0.08);
  const double tv_exact =
      tv_distance(binomial_pmf_table(BinomialParams(200, 0.125)), limit_law);
  CHECK(tv_emp > 0.5 * tv_exact);
}

TEST_CASE("exact distance from the dilute closed law to the limit law") {
  // frozen from the summation oracle
  const double tv = tv_distance(binomial_pmf_table(BinomialParams(1000, 0.01)),
                                poisson_pmf_table(PoissonParams(10.0), 1e-12));
  CHECK(tv == doctest::Approx(0.0024579161906).epsilon(1e-8));
  CHECK(tv < 0.005);
}

TEST_CASE("mean region count of a large closed reservoir") {
  // N = 1e4 particles in the unit cube, region of volume 0.1
  const Box box(1, 1, 1);
  const Region slab({0, 0, 0}, {1, 1, 0.1});
  const GasConfig config = GasConfig::fixed_count_config(10000, box, {}, 52525);
  const std::uint64_t replicas = 1000;
  long double sum = 0.0L;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(config.seed, i));
    sum += static_cast<long double>(
        count_in_region(place_particles(config, stream), slab));
  }
  const double mean = static_cast<double>(sum / static_cast<long double>(replicas));
  const double npq = 10000.0 * 0.1 * 0.9;
  CHECK(std::fabs(mean - 1000.0) < 3.0 * std::sqrt(npq / static_cast<double>(replicas)));
}

TEST_CASE("open-reservoir region counts follow the fixed-density law") {
  // V = 50 at density 2; the probed sub-region has lambda * v = 40, so the
  // check exercises the count draw and the uniform placement together
  const Box box(5, 5, 2);
  const Region region({0, 0, 0}, {5, 4, 1});  // v = 20
  const GasConfig config = GasConfig::fixed_density_config(2.0, box, {}, 88118);
  CountHistogram hist;
  const std::uint64_t replicas = 20000;
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(config.seed, i));
    hist.add(count_in_region(place_particles(config, stream), region));
  }
  const GofResult gof = chi_square_gof(hist, poisson_pmf_table(PoissonParams(40.0), 1e-12));
  CHECK(gof.p_value >= 0.001);
}

TEST_CASE("multinomial partition experiment") {
  const Box box(4, 1, 1);
  const Region r1({0, 0, 0}, {1, 1, 1});
  const Region r2({1, 0, 0}, {2, 1, 1});
  const std::vector<Region> regions{r1, r2};
  const GasConfig config = GasConfig::fixed_count_config(100, box, regions, 61616);
  const auto res = multinomial_partition_experiment(config, regions, 20000);
  CHECK(res.law.trials == 100);
  REQUIRE(res.law.probs.size() == 3);
  CHECK(res.law.probs[0] == doctest::Approx(0.25));
  CHECK(res.law.probs[1] == doctest::Approx(0.25));
  CHECK(res.law.probs[2] == doctest::Approx(0.5));
  CHECK(res.joint.total == 20000);
  CHECK(res.gof.p_value >= 0.001);

  // marginalization oracle: summing the joint law over the second index
  // recovers the binomial marginal
  for (std::int64_t x1 : {15LL, 25LL, 35LL}) {
    long double marginal = 0.0L;
    const std::vector<long double> probs{0.25L, 0.25L, 0.5L};
    for (std::int64_t x2 = 0; x2 <= 100 - x1; ++x2) {
      const std::vector<std::int64_t> counts{x1, x2, 100 - x1 - x2};
      marginal += oracles::multinomial_pmf(counts, probs);
    }
    const long double direct = oracles::binomial_pmf(x1, 100, 0.25L);
    CHECK(std::fabs(static_cast<double>(marginal - direct)) < 1e-12);
  }

  // empirical marginal of region 1 against its binomial law
  CountHistogram marginal_hist;
  for (const auto& [key, freq] : res.joint.frequencies) marginal_hist.add(key[0], freq);
  const GofResult marginal_gof =
      chi_square_gof(marginal_hist, binomial_pmf_table(BinomialParams(100, 0.25)));
  CHECK(marginal_gof.p_value >= 0.001);
}

TEST_CASE("multinomial with one region matches the binomial experiment") {
  const Box box(2, 1, 1);
  const Region region({0, 0, 0}, {1, 1, 1});
  const std::vector<Region> regions{region};
  const GasConfig config = GasConfig::fixed_count_config(50, box, regions, 515151);
  const auto multi = multinomial_partition_experiment(config, regions, 5000);
  const auto bin = conditional_binomial_experiment(config, region, 5000);
  // same seed and same placement stream: the joint histogram keyed by one
  // region must equal the plain count histogram
  for (const auto& [key, freq] : multi.joint.frequencies) {
    REQUIRE(key.size() == 1);
    CHECK(bin.histogram.at(key[0]) == freq);
  }
  CHECK(multi.joint.total == bin.histogram.total);
}

TEST_CASE("exhaustive partition leaves an empty remainder") {
  const Box box(1, 1, 2);
  const Region bottom({0, 0, 0}, {1, 1, 1});
  const Region top({0, 0, 1}, {1, 1, 2});
  const std::vector<Region> regions{bottom, top};
  const GasConfig config = GasConfig::fixed_count_config(40, box, regions, 999);
  const auto res = multinomial_partition_experiment(config, regions, 2000);
  for (const auto& [key, freq] : res.joint.frequencies) CHECK(key[0] + key[1] == 40);
}

TEST_CASE("variance signature separates closed from open reservoirs") {
  // matched mean 5: closed N=10 in half the box (variance npq = 2.5) versus
  // open density 5 (variance 5)
  const Box box(2, 1, 1);
  const Region half({0, 0, 0}, {1, 1, 1});
  const std::uint64_t replicas = 20000;

  CountHistogram closed;
  const GasConfig fixed_n = GasConfig::fixed_count_config(10, box, {}, 123321);
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(fixed_n.seed, i));
    closed.add(count_in_region(place_particles(fixed_n, stream), half));
  }

  CountHistogram open;
  const GasConfig fixed_rho = GasConfig::fixed_density_config(5.0, box, {}, 456654);
  for (std::uint64_t i = 0; i < replicas; ++i) {
    RngStream stream(substream_seed(fixed_rho.seed, i));
    open.add(count_in_region(place_particles(fixed_rho, stream), half));
  }

  const Moments mc = empirical_moments(closed);
  const Moments mo = empirical_moments(open);
  const double n = static_cast<double>(replicas);
  // both means sit at 5 within sampling bands
  CHECK(std::fabs(mc.mean - 5.0) < 3.0 * std::sqrt(2.5 / n));
  CHECK(std::fabs(mo.mean - 5.0) < 3.0 * std::sqrt(5.0 / n));
  // binomial variance npq = 2.5, fixed-density variance 5; each within a
  // 3-sigma band of Var(S^2) ~ (mu4 - sigma^4)/n
  CHECK(std::fabs(mc.variance - 2.5) < 3.0 * std::sqrt(11.25 / n));
  CHECK(std::fabs(mo.variance - 5.0) < 3.0 * std::sqrt(55.0 / n));
  CHECK(mc.variance < mo.variance);
}

TEST_CASE("conditioning the open reservoir on its total recovers the closed law") {
  const Box box(2, 2, 2);  // V = 8, density 2 -> mean total 16
  const Region region({0, 0, 0}, {1, 1, 2});  // v = 2
  const auto res = conditioning_equivalence_check(box, region, 2.0, 40000, 778899);
  CHECK(res.conditioned_on == 16);
  CHECK(res.matching_replicas > 2000);
  CHECK(res.gof.p_value >= 0.001);
}

TEST_CASE("thermodynamic limit sweep") {
  const std::vector<std::pair<std::int64_t, double>> pairs{{10, 10.0}, {100, 100.0}, {1000, 1000.0}};
  const auto sweep = thermodynamic_limit_sweep(1.0, 1.0, pairs);
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].tv > sweep[1].tv);
  CHECK(sweep[1].tv > sweep[2].tv);
  CHECK(sweep[2].tv < 1e-3);

  // with v = 1 and density 1 this is the same exact computation as the
  // binomial-to-Poisson sweep at mu = 1
  const std::vector<std::int64_t> n_values{10, 100, 1000};
  const auto direct = poisson_limit_sweep(1.0, n_values);
  for (std::size_t i = 0; i < sweep.size(); ++i)
    CHECK(sweep[i].tv == doctest::Approx(direct[i].tv).epsilon(1e-12));

  // v = V: a point mass at N, distance computed but no convergence claim
  const std::vector<std::pair<std::int64_t, double>> full{{10, 10.0}};
  const auto degenerate = thermodynamic_limit_sweep(1.0, 10.0, full);
  CHECK(degenerate[0].tv > 0.0);
  CHECK(degenerate[0].tv <= 1.0);

  const std::vector<std::pair<std::int64_t, double>> mismatched{{10, 11.0}};
  CHECK_THROWS_AS(thermodynamic_limit_sweep(1.0, 1.0, mismatched), std::invalid_argument);
  const std::vector<std::pair<std::int64_t, double>> too_small{{10, 10.0}};
  CHECK_THROWS_AS(thermodynamic_limit_sweep(1.0, 11.0, too_small), std::invalid_argument);
}
