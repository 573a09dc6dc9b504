#ifndef GIBBSDP_SPECIAL_HPP
#define GIBBSDP_SPECIAL_HPP

#include "gibbsdp/signed_log.hpp"

namespace gibbsdp {

// log Gamma(x) for x > 0; throws std::domain_error otherwise.
double ln_gamma(double x);

// Rising factorial (a)_n = a(a+1)...(a+n-1) as a signed log value.
// Handles nonpositive a (finitely many nonpositive factors, possibly zero).
SignedLog ln_pochhammer(double a, long n);

// Upper incomplete gamma Gamma(a; x) = int_x^inf t^(a-1) e^-t dt, x > 0,
// any real a.  For a > 0: continued fraction (x > a+1) or lower series
// (x <= a+1).  For a <= 0: downward recurrence
//   Gamma(a; x) = (Gamma(a+1; x) - x^a e^-x) / a
// evaluated in signed log space.  The recurrence cancels progressively for
// x >> |a|; callers keep x of the order of |a| or smaller.
SignedLog upper_incomplete_gamma_ln(double a, double x);

// log of binomial coefficient C(n, k), 0 <= k <= n.
double ln_choose(long n, long k);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double reg_inc_beta(double a, double b, double x);

}  // namespace gibbsdp

#endif
