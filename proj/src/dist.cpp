#include "pointlab/dist.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pointlab {

namespace detail {

namespace {

constexpr int kLogFactorialTableSize = 2048;

const double* log_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kLogFactorialTableSize);
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int n = 1; n < kLogFactorialTableSize; ++n) {
      acc += std::log(static_cast<long double>(n));
      t[n] = static_cast<double>(acc);
    }
    return t;
  }();
  return table.data();
}

const double* stirling_error_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(16);
    const long double half_log_2pi = 0.5L * std::log(2.0L * std::numbers::pi_v<long double>);
    t[0] = 0.0;
    for (int n = 1; n < 16; ++n) {
      long double lognf = static_cast<long double>(log_factorial_table()[n]);
      long double ln = std::log(static_cast<long double>(n));
      t[n] = static_cast<double>(lognf - (n + 0.5L) * ln + n - half_log_2pi);
    }
    return t;
  }();
  return table.data();
}

}  // namespace

double log_factorial(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  if (n < kLogFactorialTableSize) return log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double stirling_error(std::int64_t n) {
  // series coefficients 1/12, 1/360, 1/1260, 1/1680, 1/1188
  constexpr double S0 = 1.0 / 12.0;
  constexpr double S1 = 1.0 / 360.0;
  constexpr double S2 = 1.0 / 1260.0;
  constexpr double S3 = 1.0 / 1680.0;
  constexpr double S4 = 1.0 / 1188.0;
  if (n < 16) return stirling_error_table()[n];
  const double n1 = 1.0 / static_cast<double>(n);
  const double n2 = n1 * n1;
  if (n > 500) return (S0 - S1 * n2) * n1;
  if (n > 80) return (S0 - (S1 - S2 * n2) * n2) * n1;
  if (n > 35) return (S0 - (S1 - (S2 - S3 * n2) * n2) * n2) * n1;
  return (S0 - (S1 - (S2 - (S3 - S4 * n2) * n2) * n2) * n2) * n1;
}

double deviance_term(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    const double v = (x - np) / (x + np);
    const double v2 = v * v;
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    for (int j = 1;; ++j) {
      ej *= v2;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

}  // namespace detail

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// compensated (Kahan) running sum
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double value) {
    const double y = value - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void check_finite_prob(double p, const char* what) {
  if (!(p >= 0.0) || !(p <= 1.0))
    throw std::invalid_argument(std::string(what) + ": probability must lie in [0, 1]");
}

}  // namespace

PoissonParams::PoissonParams(double mu_) : mu(mu_) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("PoissonParams: mu must be positive and finite");
}

BinomialParams::BinomialParams(std::int64_t trials_, double p_) : trials(trials_), p(p_) {
  if (trials < 0) throw std::invalid_argument("BinomialParams: trials must be >= 0");
  check_finite_prob(p, "BinomialParams");
}

MultinomialParams::MultinomialParams(std::int64_t trials_, std::vector<double> probs_)
    : trials(trials_), probs(std::move(probs_)) {
  if (trials < 0) throw std::invalid_argument("MultinomialParams: trials must be >= 0");
  if (probs.empty()) throw std::invalid_argument("MultinomialParams: needs at least one category");
  CompensatedSum total;
  for (double p : probs) {
    check_finite_prob(p, "MultinomialParams");
    total.add(p);
  }
  if (std::fabs(total.sum - 1.0) > 1e-12)
    throw std::invalid_argument("MultinomialParams: probabilities must sum to 1 within 1e-12");
}

Pmf Pmf::point_mass(std::int64_t at) {
  Pmf pmf;
  pmf.offset = at;
  pmf.probs = {1.0};
  pmf.tail_bound = 0.0;
  return pmf;
}

double Pmf::mass() const {
  CompensatedSum s;
  for (double p : probs) s.add(p);
  return s.sum;
}

void Pmf::validate() const {
  if (probs.empty()) throw std::invalid_argument("Pmf: empty support");
  if (!(tail_bound >= 0.0)) throw std::invalid_argument("Pmf: tail_bound must be >= 0");
  for (double p : probs)
    if (!(p >= 0.0) || !(p <= 1.0))
      throw std::invalid_argument("Pmf: entries must lie in [0, 1]");
  if (std::fabs(mass() + tail_bound - 1.0) > 1e-12)
    throw std::invalid_argument("Pmf: mass + tail_bound must equal 1 within 1e-12");
}

double poisson_log_pmf(std::int64_t x, const PoissonParams& params) {
  if (x < 0) throw std::invalid_argument("poisson_pmf: count must be >= 0");
  const double mu = params.mu;
  if (x == 0) return -mu;
  const double xd = static_cast<double>(x);
  return -detail::stirling_error(x) - detail::deviance_term(xd, mu) -
         0.5 * std::log(kTwoPi * xd);
}

double poisson_pmf(std::int64_t x, const PoissonParams& params) {
  if (x < 0) throw std::invalid_argument("poisson_pmf: count must be >= 0");
  const double mu = params.mu;
  if (x == 0) return std::exp(-mu);
  const double xd = static_cast<double>(x);
  return std::exp(-detail::stirling_error(x) - detail::deviance_term(xd, mu)) /
         std::sqrt(kTwoPi * xd);
}

Pmf poisson_pmf_table(const PoissonParams& params, double mass_tol) {
  if (!(mass_tol > 0.0) || !(mass_tol < 1.0))
    throw std::invalid_argument("poisson_pmf_table: mass_tol must lie in (0, 1)");

  const auto center = static_cast<std::int64_t>(std::floor(params.mu));
  std::deque<double> values{poisson_pmf(center, params)};
  std::int64_t lo = center;
  std::int64_t hi = center;
  CompensatedSum mass;
  mass.add(values.front());

  constexpr std::size_t kMaxEntries = 10000000;
  while (mass.sum < 1.0 - mass_tol) {
    if (values.size() >= kMaxEntries)
      throw std::invalid_argument("poisson_pmf_table: support exceeds 1e7 entries");
    const double left = lo > 0 ? poisson_pmf(lo - 1, params) : -1.0;
    const double right = poisson_pmf(hi + 1, params);
    if (left <= 0.0 && right <= 0.0) break;  // mass target unreachable (underflow)
    if (left > right) {
      values.push_front(left);
      mass.add(left);
      --lo;
    } else {
      values.push_back(right);
      mass.add(right);
      ++hi;
    }
  }

  Pmf table;
  table.offset = lo;
  table.probs.assign(values.begin(), values.end());
  table.tail_bound = std::max(0.0, 1.0 - mass.sum);
  return table;
}

double binomial_log_pmf(std::int64_t x, const BinomialParams& params) {
  const std::int64_t n = params.trials;
  const double p = params.p;
  if (x < 0) throw std::invalid_argument("binomial_pmf: count must be >= 0");
  if (x > n) throw std::invalid_argument("binomial_pmf: count must be <= trials");
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (p == 0.0) return x == 0 ? 0.0 : neg_inf;
  if (p == 1.0) return x == n ? 0.0 : neg_inf;
  const double nd = static_cast<double>(n);
  if (x == 0) return nd * std::log1p(-p);
  if (x == n) return nd * std::log(p);
  const double xd = static_cast<double>(x);
  const double lc = detail::stirling_error(n) - detail::stirling_error(x) -
                    detail::stirling_error(n - x) - detail::deviance_term(xd, nd * p) -
                    detail::deviance_term(nd - xd, nd * (1.0 - p));
  return lc + 0.5 * std::log(nd / (kTwoPi * xd * (nd - xd)));
}

double binomial_pmf(std::int64_t x, const BinomialParams& params) {
  const std::int64_t n = params.trials;
  const double p = params.p;
  if (x < 0) throw std::invalid_argument("binomial_pmf: count must be >= 0");
  if (x > n) throw std::invalid_argument("binomial_pmf: count must be <= trials");
  if (p == 0.0) return x == 0 ? 1.0 : 0.0;
  if (p == 1.0) return x == n ? 1.0 : 0.0;
  const double nd = static_cast<double>(n);
  if (x == 0) return std::exp(nd * std::log1p(-p));
  if (x == n) return std::exp(nd * std::log(p));
  const double xd = static_cast<double>(x);
  const double lc = detail::stirling_error(n) - detail::stirling_error(x) -
                    detail::stirling_error(n - x) - detail::deviance_term(xd, nd * p) -
                    detail::deviance_term(nd - xd, nd * (1.0 - p));
  return std::exp(lc) * std::sqrt(nd / (kTwoPi * xd * (nd - xd)));
}

Pmf binomial_pmf_table(const BinomialParams& params) {
  if (params.trials >= 10000000)
    throw std::invalid_argument("binomial_pmf_table: support exceeds 1e7 entries");
  Pmf table;
  table.offset = 0;
  table.probs.resize(static_cast<std::size_t>(params.trials) + 1);
  for (std::int64_t x = 0; x <= params.trials; ++x)
    table.probs[static_cast<std::size_t>(x)] = binomial_pmf(x, params);
  table.tail_bound = 0.0;
  return table;
}

double multinomial_log_pmf(std::span<const std::int64_t> counts,
                           const MultinomialParams& params) {
  if (counts.size() != params.probs.size())
    throw std::invalid_argument("multinomial_pmf: counts and probabilities differ in length");
  std::int64_t sum = 0;
  for (std::int64_t c : counts) {
    if (c < 0) throw std::invalid_argument("multinomial_pmf: counts must be >= 0");
    sum += c;
  }
  if (sum != params.trials)
    throw std::invalid_argument("multinomial_pmf: counts must sum to trials");
  double lp = detail::log_factorial(params.trials);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::int64_t c = counts[i];
    lp -= detail::log_factorial(c);
    if (c > 0) {
      if (params.probs[i] <= 0.0) return -std::numeric_limits<double>::infinity();
      lp += static_cast<double>(c) * std::log(params.probs[i]);
    }
  }
  return lp;
}

double multinomial_pmf(std::span<const std::int64_t> counts,
                       const MultinomialParams& params) {
  const double lp = multinomial_log_pmf(counts, params);
  return std::isinf(lp) ? 0.0 : std::exp(lp);
}

MultinomialParams conditional_subcount_law(std::int64_t n,
                                           std::span<const double> sub_extents,
                                           double total_extent) {
  if (n < 0) throw std::invalid_argument("conditional_subcount_law: n must be >= 0");
  if (!(total_extent > 0.0) || !std::isfinite(total_extent))
    throw std::invalid_argument("conditional_subcount_law: total extent must be positive");
  if (sub_extents.empty())
    throw std::invalid_argument("conditional_subcount_law: needs at least one sub-extent");
  CompensatedSum sum;
  for (double e : sub_extents) {
    if (!(e > 0.0) || !std::isfinite(e))
      throw std::invalid_argument("conditional_subcount_law: sub-extents must be positive");
    sum.add(e);
  }
  if (sum.sum > total_extent * (1.0 + 1e-12))
    throw std::invalid_argument(
        "conditional_subcount_law: sub-extents must not exceed the total extent");

  std::vector<double> probs;
  probs.reserve(sub_extents.size() + 1);
  CompensatedSum psum;
  for (double e : sub_extents) {
    const double p = e / total_extent;
    probs.push_back(p);
    psum.add(p);
  }
  probs.push_back(std::max(0.0, 1.0 - psum.sum));  // remainder category
  return MultinomialParams(n, std::move(probs));
}

double tv_distance(const Pmf& a, const Pmf& b) {
  a.validate();
  b.validate();
  const std::int64_t lo = std::min(a.support_begin(), b.support_begin());
  const std::int64_t hi = std::max(a.support_end(), b.support_end());
  CompensatedSum l1;
  for (std::int64_t x = lo; x < hi; ++x) l1.add(std::fabs(a.at(x) - b.at(x)));
  // Outside both supports only the recorded tails differ; normalization pins
  // the gap to |mass(a) - mass(b)|, so identical tables give exactly zero.
  const double tv = 0.5 * (l1.sum + std::fabs(a.tail_bound - b.tail_bound));
  return std::clamp(tv, 0.0, 1.0);
}

std::vector<LimitPoint> poisson_limit_sweep(double mu,
                                            std::span<const std::int64_t> n_values) {
  const PoissonParams pois(mu);
  const Pmf target = poisson_pmf_table(pois, 1e-12);
  std::vector<LimitPoint> out;
  out.reserve(n_values.size());
  for (std::int64_t n : n_values) {
    if (static_cast<double>(n) < std::ceil(mu))
      throw std::invalid_argument(
          "poisson_limit_sweep: n must be >= ceil(mu) so that p = mu/n <= 1");
    const Pmf bin = binomial_pmf_table(BinomialParams(n, mu / static_cast<double>(n)));
    out.push_back({n, tv_distance(bin, target)});
  }
  return out;
}

}  // namespace pointlab
