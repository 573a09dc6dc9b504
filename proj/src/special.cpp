#include "gibbsdp/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gibbsdp/errors.hpp"

namespace gibbsdp {

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: requires x > 0, got " + std::to_string(x));
  return std::lgamma(x);
}

SignedLog ln_pochhammer(double a, long n) {
  if (n < 0) throw std::domain_error("ln_pochhammer: requires n >= 0");
  if (n == 0) return SignedLog::one();
  if (a > 0.0) return SignedLog::positive(std::lgamma(a + n) - std::lgamma(a));
  // Peel off the nonpositive leading factors, then use lgamma on the rest.
  int sign = 1;
  double log_abs = 0.0;
  long i = 0;
  for (; i < n && a + i <= 0.0; ++i) {
    const double f = a + i;
    if (f == 0.0) return SignedLog::zero();
    sign = -sign;
    log_abs += std::log(-f);
  }
  if (i < n) log_abs += std::lgamma(a + n) - std::lgamma(a + i);
  return {sign, log_abs};
}

double ln_choose(long n, long k) {
  if (k < 0 || k > n) throw std::domain_error("ln_choose: requires 0 <= k <= n");
  return std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1);
}

namespace {

// log Gamma(a; x) via the Legendre continued fraction, for a > 0, x > a+1.
double log_upper_gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) return -x + a * std::log(x) + std::log(h);
  }
  throw numeric_error("upper_incomplete_gamma_ln: continued fraction failed to converge");
}

// log Gamma(a; x) via the lower series, for a > 0, x <= a+1.
double log_upper_gamma_series(double a, double x) {
  // P(a,x) = x^a e^-x / Gamma(a+1) * sum_n x^n / (a+1)...(a+n)
  double term = 1.0, sum = 1.0;
  double ap = a;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (term < sum * 1e-17) {
      const double log_p = a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
      const double p = std::exp(log_p);
      if (p >= 1.0) throw numeric_error("upper_incomplete_gamma_ln: series lost precision");
      return std::lgamma(a) + std::log1p(-p);
    }
  }
  throw numeric_error("upper_incomplete_gamma_ln: series failed to converge");
}

// log Gamma(0; x) = log E1(x).
double log_e1(double x) {
  if (x > 1.0) return log_upper_gamma_cf(0.0, x);
  // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!)
  constexpr double euler_gamma = 0.5772156649015328606;
  double term = 1.0, sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    term *= -x / k;
    const double add = -term / k;
    sum += add;
    if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
  }
  return std::log(-euler_gamma - std::log(x) + sum);
}

}  // namespace

SignedLog upper_incomplete_gamma_ln(double a, double x) {
  if (!(x > 0.0))
    throw std::domain_error("upper_incomplete_gamma_ln: requires x > 0, got " + std::to_string(x));
  if (a > 0.0) {
    const double lg = (x > a + 1.0) ? log_upper_gamma_cf(a, x) : log_upper_gamma_series(a, x);
    return SignedLog::positive(lg);
  }
  // a <= 0: anchor at a fractional start in (0,1) -- or at Gamma(0;x) = E1(x)
  // when a is an integer, since the recurrence pivot vanishes there -- and
  // recurse downward.
  const bool integer_a = std::floor(a) == a;
  SignedLog g;
  double aj;
  long m;
  if (integer_a) {
    g = SignedLog::positive(log_e1(x));
    aj = 0.0;
    m = static_cast<long>(-a);
  } else {
    m = static_cast<long>(std::floor(-a)) + 1;
    aj = a + m;
    g = SignedLog::positive((x > aj + 1.0) ? log_upper_gamma_cf(aj, x)
                                           : log_upper_gamma_series(aj, x));
  }
  for (long j = 0; j < m; ++j) {
    aj -= 1.0;
    // Gamma(aj; x) = (Gamma(aj+1; x) - x^aj e^-x) / aj
    const SignedLog pow_term = SignedLog::positive(aj * std::log(x) - x);
    const SignedLogSum s = signed_log_sum({g, -pow_term});
    g = s.sum / SignedLog::from_value(aj);
  }
  return g;
}

namespace {

// Lentz continued fraction for the incomplete beta (converges fast for
// x < (a+1)/(a+b+2)).
double inc_beta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) return h;
  }
  throw numeric_error("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0))
    throw std::domain_error("reg_inc_beta: requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("reg_inc_beta: requires x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(log_front) * inc_beta_cf(a, b, x) / a;
  return 1.0 - std::exp(log_front) * inc_beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace gibbsdp
