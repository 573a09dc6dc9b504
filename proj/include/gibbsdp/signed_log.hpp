#ifndef GIBBSDP_SIGNED_LOG_HPP
#define GIBBSDP_SIGNED_LOG_HPP

#include <cmath>
#include <cstdlib>
#include <limits>
#include <span>
#include <vector>

namespace gibbsdp {

// A real number stored as (sign, log|value|) so that products and sums of
// terms spanning hundreds of orders of magnitude stay representable.
struct SignedLog {
  int sign = 0;  // -1, 0, +1
  double log_abs = -std::numeric_limits<double>::infinity();

  static SignedLog zero() { return {}; }
  static SignedLog one() { return {1, 0.0}; }
  static SignedLog positive(double log_abs) { return {1, log_abs}; }

  static SignedLog from_value(double v) {
    if (v == 0.0) return zero();
    return {v > 0.0 ? 1 : -1, std::log(std::fabs(v))};
  }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  bool is_zero() const { return sign == 0; }

  SignedLog operator*(const SignedLog& o) const {
    if (sign == 0 || o.sign == 0) return zero();
    return {sign * o.sign, log_abs + o.log_abs};
  }
  SignedLog operator/(const SignedLog& o) const {
    return {sign * o.sign, log_abs - o.log_abs};
  }
  SignedLog operator-() const { return {-sign, log_abs}; }
};

namespace detail {

// log(sum exp(li)) over one sign class; -inf for an empty class.
inline double log_sum_exp(const std::vector<double>& ls) {
  if (ls.empty()) return -std::numeric_limits<double>::infinity();
  double m = ls[0];
  for (double l : ls)
    if (l > m) m = l;
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double l : ls) acc += std::exp(l - m);
  return m + std::log(acc);
}

}  // namespace detail

struct SignedLogSum {
  SignedLog sum;
  // log(max class magnitude) - log|sum|: how much leading magnitude was
  // cancelled.  0 when no cancellation, +inf when the classes annihilate.
  double cancellation = 0.0;

  double digits_lost() const { return cancellation / std::log(10.0); }
};

// Sum of signed log-space terms.  Positive and negative classes are each
// reduced with log-sum-exp and then combined; if the classes agree to within
// 1e-15 relative the result is reported as an exact zero.
inline SignedLogSum signed_log_sum(std::span<const SignedLog> terms) {
  std::vector<double> pos, neg;
  for (const auto& t : terms) {
    if (t.sign > 0)
      pos.push_back(t.log_abs);
    else if (t.sign < 0)
      neg.push_back(t.log_abs);
  }
  const double lp = detail::log_sum_exp(pos);
  const double ln = detail::log_sum_exp(neg);
  SignedLogSum out;
  const double inf = std::numeric_limits<double>::infinity();
  if (lp == -inf && ln == -inf) {
    out.sum = SignedLog::zero();
    return out;
  }
  if (ln == -inf) {
    out.sum = SignedLog{1, lp};
    return out;
  }
  if (lp == -inf) {
    out.sum = SignedLog{-1, ln};
    return out;
  }
  const double hi = std::max(lp, ln), lo = std::min(lp, ln);
  if (hi - lo < 1e-15) {  // cancels below 1e-15 relative
    out.sum = SignedLog::zero();
    out.cancellation = inf;
    return out;
  }
  const double log_mag = hi + std::log1p(-std::exp(lo - hi));
  out.sum = SignedLog{lp > ln ? 1 : -1, log_mag};
  out.cancellation = hi - log_mag;
  return out;
}

inline SignedLogSum signed_log_sum(std::initializer_list<SignedLog> terms) {
  return signed_log_sum(std::span<const SignedLog>(terms.begin(), terms.size()));
}

}  // namespace gibbsdp

#endif
