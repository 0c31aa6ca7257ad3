#ifndef POINTLAB_DIST_HPP
#define POINTLAB_DIST_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace pointlab {

// Expected count mu = rate x extent of a homogeneous point process.
struct PoissonParams {
  double mu;
  explicit PoissonParams(double mu_);
};

struct BinomialParams {
  std::int64_t trials;
  double p;
  BinomialParams(std::int64_t trials_, double p_);
};

struct MultinomialParams {
  std::int64_t trials;
  std::vector<double> probs;  // category probabilities, sum to 1
  MultinomialParams(std::int64_t trials_, std::vector<double> probs_);
};

// Truncated probability table over consecutive integer counts starting at
// `offset`. `tail_bound` is the distribution mass outside the stored support;
// it is recorded rather than renormalized away, so distance computations can
// account for it.
struct Pmf {
  std::int64_t offset = 0;
  std::vector<double> probs;
  double tail_bound = 0.0;

  static Pmf point_mass(std::int64_t at);

  std::int64_t support_begin() const { return offset; }
  std::int64_t support_end() const {
    return offset + static_cast<std::int64_t>(probs.size());
  }

  // stored probability at x, zero outside the stored support
  double at(std::int64_t x) const {
    if (x < support_begin() || x >= support_end()) return 0.0;
    return probs[static_cast<std::size_t>(x - offset)];
  }

  double mass() const;     // sum of stored probabilities (compensated)
  void validate() const;   // entries in [0,1], mass + tail_bound = 1 +- 1e-12
};

// P(X = x) for X ~ Poisson(mu). Evaluated through the Stirling-error /
// deviance decomposition, relative error <= 1e-12 up to x = 1e6.
double poisson_pmf(std::int64_t x, const PoissonParams& params);
double poisson_log_pmf(std::int64_t x, const PoissonParams& params);

// Truncated table with tail_bound <= mass_tol. Support grows from floor(mu)
// in both directions, adding the larger neighbor first.
Pmf poisson_pmf_table(const PoissonParams& params, double mass_tol);

double binomial_pmf(std::int64_t x, const BinomialParams& params);
double binomial_log_pmf(std::int64_t x, const BinomialParams& params);

// Full-support table over 0..trials (tail_bound 0).
Pmf binomial_pmf_table(const BinomialParams& params);

double multinomial_pmf(std::span<const std::int64_t> counts,
                       const MultinomialParams& params);
double multinomial_log_pmf(std::span<const std::int64_t> counts,
                           const MultinomialParams& params);

// Law of sub-extent counts given n total points on an extent: multinomial
// with p_i = extent_i / total and an implicit remainder category last.
MultinomialParams conditional_subcount_law(std::int64_t n,
                                           std::span<const double> sub_extents,
                                           double total_extent);

// Total variation distance between two tables: half the L1 distance over the
// union of stored supports plus the (normalization-determined) tail gap.
double tv_distance(const Pmf& a, const Pmf& b);

struct LimitPoint {
  std::int64_t trials;
  double tv;
};

// Exact TV(Binomial(n, mu/n), Poisson(mu)) for each n; requires n >= ceil(mu)
// so that p = mu/n stays a probability.
std::vector<LimitPoint> poisson_limit_sweep(double mu,
                                            std::span<const std::int64_t> n_values);

namespace detail {

// log(n!) via a cached table for small n, lgamma beyond
double log_factorial(std::int64_t n);

// log(n!) - log(sqrt(2 pi n) (n/e)^n), the Stirling series remainder
double stirling_error(std::int64_t n);

// x log(x / np) + np - x, evaluated without cancellation near x = np
double deviance_term(double x, double np);

}  // namespace detail

}  // namespace pointlab

#endif
