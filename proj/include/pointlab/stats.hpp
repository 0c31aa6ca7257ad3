#ifndef POINTLAB_STATS_HPP
#define POINTLAB_STATS_HPP

#include <cstdint>
#include <vector>

#include "pointlab/dist.hpp"
#include "pointlab/histogram.hpp"

namespace pointlab {

struct GofResult {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
  std::int64_t bins_used = 0;
};

// Upper regularized incomplete gamma Q(a, x): series representation for
// x < a + 1, Lentz continued fraction otherwise. Absolute error <= 1e-10.
double regularized_gamma_q(double a, double x);
double regularized_gamma_p(double a, double x);

// Chi-square goodness of fit of an observed count histogram against an exact
// law. Cells with expected count < 5 are merged greedily from the tails
// inward; the expected table's tail_bound is attached to the top cell before
// merging. dof = bins - 1 (no parameters estimated from data). Throws
// std::domain_error when fewer than 2 bins survive merging.
GofResult chi_square_gof(const CountHistogram& observed, const Pmf& expected);

// Two-sample homogeneity chi-square with the same merging rule applied to the
// pooled expected counts of the smaller sample.
GofResult chi_square_two_sample(const CountHistogram& a, const CountHistogram& b);

// Chi-square over pre-assembled unordered cells (observed count, expected
// count). Smallest-expected cells are pooled together until every remaining
// cell has expected >= 5; used for joint (multi-index) supports where there
// is no natural tail order.
GofResult chi_square_pooled_cells(std::vector<double> observed,
                                  std::vector<double> expected);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
};

Moments empirical_moments(const CountHistogram& hist);

}  // namespace pointlab

#endif
