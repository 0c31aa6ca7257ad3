#include "pointlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pointlab {

namespace {

constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr double kMinExpected = 5.0;
constexpr std::uint64_t kMinSample = 50;

// P(a, x) by the series representation, valid for x < a + 1
double lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw std::runtime_error("regularized gamma: series did not converge");
}

// Q(a, x) by the Lentz continued fraction, valid for x >= a + 1
double upper_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps)
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  }
  throw std::runtime_error("regularized gamma: continued fraction did not converge");
}

void check_gamma_domain(double a, double x, const char* fn) {
  if (!(a > 0.0) || !std::isfinite(a) || !(x >= 0.0) || !std::isfinite(x))
    throw std::invalid_argument(std::string(fn) + ": requires finite a > 0 and x >= 0");
}

// Merge adjacent rows of the parallel columns until every entry of
// `threshold` is >= 5: both tails inward first, then smallest-first for any
// interior stragglers (possible for multimodal expected laws).
void merge_small_cells(std::vector<std::vector<double>*> cols,
                       std::vector<double>& threshold) {
  auto merge = [&](std::size_t from, std::size_t into) {
    threshold[into] += threshold[from];
    for (auto* c : cols) (*c)[into] += (*c)[from];
    threshold.erase(threshold.begin() + static_cast<std::ptrdiff_t>(from));
    for (auto* c : cols) c->erase(c->begin() + static_cast<std::ptrdiff_t>(from));
  };
  while (threshold.size() > 1 && threshold.front() < kMinExpected) merge(0, 1);
  while (threshold.size() > 1 && threshold.back() < kMinExpected)
    merge(threshold.size() - 1, threshold.size() - 2);
  for (;;) {
    if (threshold.size() <= 1) break;
    const std::size_t worst = static_cast<std::size_t>(
        std::min_element(threshold.begin(), threshold.end()) - threshold.begin());
    if (threshold[worst] >= kMinExpected) break;
    std::size_t neighbor;
    if (worst == 0)
      neighbor = 1;
    else if (worst == threshold.size() - 1)
      neighbor = worst - 1;
    else
      neighbor = threshold[worst - 1] <= threshold[worst + 1] ? worst - 1 : worst + 1;
    merge(worst, neighbor);
  }
}

GofResult finish(double statistic, std::size_t bins) {
  if (bins < 2)
    throw std::domain_error("chi-square: fewer than 2 bins after merging, test undefined");
  GofResult r;
  r.statistic = statistic;
  r.bins_used = static_cast<std::int64_t>(bins);
  r.dof = r.bins_used - 1;
  r.p_value = regularized_gamma_q(0.5 * static_cast<double>(r.dof), 0.5 * statistic);
  return r;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  check_gamma_domain(a, x, "regularized_gamma_q");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_continued_fraction(a, x);
}

double regularized_gamma_p(double a, double x) {
  check_gamma_domain(a, x, "regularized_gamma_p");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_continued_fraction(a, x);
}

GofResult chi_square_gof(const CountHistogram& observed, const Pmf& expected) {
  if (observed.total < kMinSample)
    throw std::invalid_argument("chi_square_gof: needs at least 50 observations");
  expected.validate();

  const std::int64_t lo = std::min(observed.min_count(), expected.support_begin());
  const std::int64_t hi = std::max(observed.max_count() + 1, expected.support_end());
  if (hi - lo > 10000000)
    throw std::invalid_argument("chi_square_gof: union support exceeds 1e7 cells");
  const double n = static_cast<double>(observed.total);

  std::vector<double> obs;
  std::vector<double> exp;
  obs.reserve(static_cast<std::size_t>(hi - lo));
  exp.reserve(static_cast<std::size_t>(hi - lo));
  for (std::int64_t x = lo; x < hi; ++x) {
    obs.push_back(static_cast<double>(observed.at(x)));
    exp.push_back(expected.at(x) * n);
  }
  // unresolved table mass is attached to the top cell; it is <= mass_tol * n
  // everywhere this is used, far below the merge threshold
  exp.back() += expected.tail_bound * n;

  merge_small_cells({&obs}, exp);

  double stat = 0.0;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    const double d = obs[i] - exp[i];
    stat += d * d / exp[i];
  }
  return finish(stat, exp.size());
}

GofResult chi_square_two_sample(const CountHistogram& a, const CountHistogram& b) {
  if (a.total < kMinSample || b.total < kMinSample)
    throw std::invalid_argument("chi_square_two_sample: each sample needs at least 50 observations");

  const std::int64_t lo = std::min(a.min_count(), b.min_count());
  const std::int64_t hi = std::max(a.max_count(), b.max_count()) + 1;
  if (hi - lo > 10000000)
    throw std::invalid_argument("chi_square_two_sample: union support exceeds 1e7 cells");
  const double na = static_cast<double>(a.total);
  const double nb = static_cast<double>(b.total);
  const double n_small = std::min(na, nb);
  const double n_pool = na + nb;

  std::vector<double> oa;
  std::vector<double> ob;
  std::vector<double> threshold;  // expected count in the smaller sample
  for (std::int64_t x = lo; x < hi; ++x) {
    const double ca = static_cast<double>(a.at(x));
    const double cb = static_cast<double>(b.at(x));
    oa.push_back(ca);
    ob.push_back(cb);
    threshold.push_back((ca + cb) / n_pool * n_small);
  }

  merge_small_cells({&oa, &ob}, threshold);

  double stat = 0.0;
  for (std::size_t i = 0; i < oa.size(); ++i) {
    const double pooled = (oa[i] + ob[i]) / n_pool;
    const double ea = pooled * na;
    const double eb = pooled * nb;
    const double da = oa[i] - ea;
    const double db = ob[i] - eb;
    stat += da * da / ea + db * db / eb;
  }
  return finish(stat, oa.size());
}

GofResult chi_square_pooled_cells(std::vector<double> observed,
                                  std::vector<double> expected) {
  if (observed.size() != expected.size())
    throw std::invalid_argument("chi_square_pooled_cells: size mismatch");
  if (observed.empty())
    throw std::invalid_argument("chi_square_pooled_cells: no cells");
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  if (total < static_cast<double>(kMinSample))
    throw std::invalid_argument("chi_square_pooled_cells: needs at least 50 observations");
  for (double e : expected)
    if (!(e >= 0.0) || !std::isfinite(e))
      throw std::invalid_argument("chi_square_pooled_cells: expected counts must be >= 0");

  // pool smallest-expected cells together until every bin reaches the
  // threshold; ties broken by original cell order, so the result is
  // deterministic and independent of input labeling
  std::vector<std::size_t> order(observed.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return expected[i] < expected[j]; });

  std::vector<double> bin_obs;
  std::vector<double> bin_exp;
  double acc_obs = 0.0;
  double acc_exp = 0.0;
  for (std::size_t idx : order) {
    acc_obs += observed[idx];
    acc_exp += expected[idx];
    if (acc_exp >= kMinExpected) {
      bin_obs.push_back(acc_obs);
      bin_exp.push_back(acc_exp);
      acc_obs = 0.0;
      acc_exp = 0.0;
    }
  }
  if (acc_exp > 0.0 || acc_obs > 0.0) {
    if (bin_exp.empty())
      throw std::domain_error("chi-square: fewer than 2 bins after merging, test undefined");
    bin_obs.back() += acc_obs;
    bin_exp.back() += acc_exp;
  }

  double stat = 0.0;
  for (std::size_t i = 0; i < bin_exp.size(); ++i) {
    const double d = bin_obs[i] - bin_exp[i];
    stat += d * d / bin_exp[i];
  }
  return finish(stat, bin_exp.size());
}

Moments empirical_moments(const CountHistogram& hist) {
  if (hist.total < 2)
    throw std::invalid_argument("empirical_moments: needs at least 2 observations");
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (const auto& [count, freq] : hist.frequencies) {
    const long double c = static_cast<long double>(count);
    const long double f = static_cast<long double>(freq);
    sum += c * f;
    sum_sq += c * c * f;
  }
  const long double n = static_cast<long double>(hist.total);
  const long double mean = sum / n;
  const long double var = (sum_sq - n * mean * mean) / (n - 1.0L);
  Moments m;
  m.mean = static_cast<double>(mean);
  m.variance = std::max(0.0, static_cast<double>(var));
  return m;
}

}  // namespace pointlab
