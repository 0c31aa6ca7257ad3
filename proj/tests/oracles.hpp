// Test-only brute-force oracles, kept independent of the library's
// evaluation paths: direct long-double products, cumulative sums, and
// closed forms. Nothing here calls into pointlab.
#ifndef POINTLAB_TEST_ORACLES_HPP
#define POINTLAB_TEST_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace oracles {

// mu^x e^-mu / x! as a running product
inline long double poisson_pmf(std::int64_t x, long double mu) {
  long double v = std::exp(-mu);
  for (std::int64_t k = 1; k <= x; ++k) v *= mu / static_cast<long double>(k);
  return v;
}

// C(n,x) p^x q^(n-x) with the binomial coefficient as a rational product
inline long double binomial_pmf(std::int64_t x, std::int64_t n, long double p) {
  long double v = 1.0L;
  for (std::int64_t i = 1; i <= x; ++i)
    v *= static_cast<long double>(n - x + i) / static_cast<long double>(i);
  for (std::int64_t i = 0; i < x; ++i) v *= p;
  for (std::int64_t i = 0; i < n - x; ++i) v *= 1.0L - p;
  return v;
}

inline long double factorial(std::int64_t n) {
  long double v = 1.0L;
  for (std::int64_t i = 2; i <= n; ++i) v *= static_cast<long double>(i);
  return v;
}

inline long double multinomial_pmf(std::span<const std::int64_t> counts,
                                   std::span<const long double> probs) {
  std::int64_t n = 0;
  for (std::int64_t c : counts) n += c;
  long double v = factorial(n);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    v /= factorial(counts[i]);
    for (std::int64_t k = 0; k < counts[i]; ++k) v *= probs[i];
  }
  return v;
}

// total variation distance between Binomial(n, p) and Poisson(mu):
// half the L1 difference over 0..n plus the Poisson mass beyond n
inline long double tv_binomial_poisson(std::int64_t n, long double p, long double mu) {
  long double l1 = 0.0L;
  long double pois_cum = 0.0L;
  for (std::int64_t x = 0; x <= n; ++x) {
    const long double pp = poisson_pmf(x, mu);
    l1 += std::fabs(binomial_pmf(x, n, p) - pp);
    pois_cum += pp;
  }
  return 0.5L * (l1 + (1.0L - pois_cum));
}

// Q(a, x) for integer a: the Poisson(x) mass on 0..a-1
inline long double gamma_q_integer(std::int64_t a, long double x) {
  long double cum = 0.0L;
  for (std::int64_t j = 0; j < a; ++j) cum += poisson_pmf(j, x);
  return cum;
}

// Q(a, x) for half-integer a via Q(1/2, x) = erfc(sqrt(x)) and the upward
// recurrence Q(a+1, x) = Q(a, x) + x^a e^-x / Gamma(a+1)
inline long double gamma_q_half_integer(std::int64_t twice_a, long double x) {
  long double a = 0.5L;
  long double q = std::erfc(std::sqrt(x));
  long double gamma_a1 = 0.5L * std::sqrt(std::acos(-1.0L));  // Gamma(3/2)
  while (2.0L * a + 0.5L < static_cast<long double>(twice_a)) {
    q += std::pow(x, a) * std::exp(-x) / gamma_a1;
    gamma_a1 *= a + 1.0L;
    a += 1.0L;
  }
  return q;
}

}  // namespace oracles

#endif
