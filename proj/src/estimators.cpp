#include "gibbsdp/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibbsdp/errors.hpp"
#include "gibbsdp/signed_log.hpp"
#include "gibbsdp/special.hpp"
#include "gibbsdp/weights.hpp"

namespace gibbsdp {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

void check_summary(const SampleSummary& s, const char* who) {
  if (s.n < 1 || s.k < 1 || s.k > s.n)
    throw std::domain_error(std::string(who) + ": requires 1 <= k <= n");
}

void check_l(const SampleSummary& s, long l, const char* who) {
  if (l < 0 || l > s.n)
    throw std::domain_error(std::string(who) + ": requires 0 <= l <= n, got l=" +
                            std::to_string(l));
}

// log V(n, k) under a PD or GG prior (generic priors have no closed form).
double v_ln(long n, long k, const PriorSpec& prior) {
  switch (prior.kind()) {
    case PriorKind::pd:
      return v_pd_ln(n, k, prior.sigma(), prior.theta());
    case PriorKind::gg:
      return v_gg_ln(n, k, prior.sigma(), prior.tau(), GgMethod::quadrature);
    case PriorKind::generic:
      break;
  }
  throw std::invalid_argument(
      "estimators: generic priors are not supported here; their weights are only "
      "available by Monte Carlo (v_mc_ln)");
}

}  // namespace

DiscoveryEstimate bnp_discovery(const SampleSummary& s, const PriorSpec& prior, long l) {
  check_summary(s, "bnp_discovery");
  check_l(s, l, "bnp_discovery");
  DiscoveryEstimate e;
  e.l = l;
  e.method = Method::bnp;
  const long ml = l >= 1 ? s.count(l) : 0;
  if (l >= 1 && ml == 0) return e;  // value 0 exactly
  const WeightRatioPair w = weight_ratios(s.n, s.k, prior);
  e.value = l == 0 ? w.g0 : clamp01((l - prior.sigma()) * double(ml) * w.g1);
  return e;
}

DiscoveryEstimate good_turing(const SampleSummary& s, long l) {
  check_summary(s, "good_turing");
  if (l < 0 || l >= s.n) throw std::domain_error("good_turing: requires 0 <= l < n");
  DiscoveryEstimate e;
  e.l = l;
  e.method = Method::good_turing;
  e.value = clamp01((l + 1.0) * double(s.count(l + 1)) / double(s.n));
  return e;
}

DiscoveryEstimate smoothed_good_turing(const SampleSummary& s, double sigma, long l) {
  check_summary(s, "smoothed_good_turing");
  check_l(s, l, "smoothed_good_turing");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::domain_error("smoothed_good_turing: requires sigma in (0,1)");
  DiscoveryEstimate e;
  e.l = l;
  e.method = Method::smoothed_good_turing;
  // sigma (1-sigma)_l k / (l! n)
  const SignedLog poch = ln_pochhammer(1.0 - sigma, l);
  e.value = clamp01(sigma * double(s.k) / double(s.n) *
                    std::exp(poch.log_abs - ln_gamma(l + 1.0)));
  return e;
}

double posterior_moment(const SampleSummary& s, const PriorSpec& prior, long l, long r) {
  check_summary(s, "posterior_moment");
  check_l(s, l, "posterior_moment");
  if (r < 1) throw std::domain_error("posterior_moment: requires r >= 1");
  const double sigma = prior.sigma();
  const long ml = l >= 1 ? s.count(l) : 0;
  if (l >= 1 && ml == 0) return 0.0;
  const double a_l = (l - sigma) * double(ml);  // mass parameter of A_l

  if (prior.kind() == PriorKind::pd) {
    const double theta = prior.theta();
    const SignedLog den = ln_pochhammer(theta + s.n, r);
    const SignedLog num = l == 0 ? ln_pochhammer(theta + sigma * s.k, r)
                                 : ln_pochhammer(a_l, r);
    return (num / den).value();
  }

  const double base = v_ln(s.n, s.k, prior);
  if (l >= 1) {
    const SignedLog poch = ln_pochhammer(a_l, r);
    return poch.sign * std::exp(v_ln(s.n + r, s.k, prior) - base + poch.log_abs);
  }
  // l = 0: alternating sum over V(n+i, k) with binomial and Pochhammer factors
  const double b = s.n - sigma * s.k;
  std::vector<SignedLog> terms;
  terms.reserve(r + 1);
  for (long i = 0; i <= r; ++i) {
    const SignedLog poch = ln_pochhammer(b, i);
    SignedLog t{(i % 2 == 0) ? poch.sign : -poch.sign,
                ln_choose(r, i) + v_ln(s.n + i, s.k, prior) - base + poch.log_abs};
    terms.push_back(t);
  }
  const SignedLogSum sum = signed_log_sum(terms);
  if (sum.digits_lost() > 6.0)
    throw numeric_error("posterior_moment: alternating sum lost more than 6 digits "
                        "(n too large for this route; use sampling instead)");
  if (sum.sum.sign <= 0)
    throw numeric_error("posterior_moment: alternating sum is nonpositive");
  return sum.sum.value();
}

double general_moment(const SampleSummary& s, const PriorSpec& prior, const EventSpec& A,
                      long r) {
  check_summary(s, "general_moment");
  if (r < 1) throw std::domain_error("general_moment: requires r >= 1");
  const double sigma = prior.sigma();
  if (!(A.nu0_mass >= 0.0 && A.nu0_mass <= 1.0))
    throw std::domain_error("general_moment: nu0_mass must lie in [0,1]");
  if (!(A.mu_mass >= 0.0 && A.mu_mass <= s.n - sigma * s.k + 1e-12))
    throw std::domain_error("general_moment: mu_mass must lie in [0, n - sigma k]");

  // R_{p,i}(mu + a(1-sigma) + b), built bottom-up over the shift lattice
  // a + b = r - p via R_{p,i}(u) = R_{p-1,i}(u+1-sigma) + u R_{p-1,i-1}(u+1).
  const double mu = A.mu_mass;
  auto shifted = [&](long a, long b) { return mu + a * (1.0 - sigma) + double(b); };
  // prev[i][a] = R_{p-1, i} at shift (a, r-(p-1)-a)
  std::vector<std::vector<double>> prev(1, std::vector<double>(r + 1, 1.0));  // p = 0
  for (long p = 1; p <= r; ++p) {
    std::vector<std::vector<double>> cur(p + 1, std::vector<double>(r - p + 1, 0.0));
    for (long i = 0; i <= p; ++i) {
      for (long a = 0; a <= r - p; ++a) {
        const long b = r - p - a;
        double v = i < long(prev.size()) ? prev[i][a + 1] : 0.0;
        if (i >= 1) v += shifted(a, b) * prev[i - 1][a];
        cur[i][a] = v;
      }
    }
    prev = std::move(cur);
  }
  // prev[i][0] = R_{r,i}(mu)

  const double base = v_ln(s.n, s.k, prior);
  double total = 0.0;
  for (long i = 0; i <= r; ++i) {
    const double R = prev[i][0];
    if (R == 0.0) continue;
    const long pow_nu = r - i;
    double nu_factor;
    if (pow_nu == 0)
      nu_factor = 1.0;  // 0^0 = 1 by convention
    else if (A.nu0_mass == 0.0)
      continue;
    else
      nu_factor = std::pow(A.nu0_mass, double(pow_nu));
    total += std::exp(v_ln(s.n + r, s.k + r - i, prior) - base) * nu_factor * R;
  }
  return total;
}

DiscoveryEstimate first_order(const SampleSummary& s, double sigma, long l) {
  check_summary(s, "first_order");
  check_l(s, l, "first_order");
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::domain_error("first_order: requires sigma in (0,1)");
  DiscoveryEstimate e;
  e.l = l;
  e.method = Method::first_order;
  e.value = l == 0 ? clamp01(sigma * double(s.k) / double(s.n))
                   : clamp01((l - sigma) * double(s.count(l)) / double(s.n));
  return e;
}

DiscoveryEstimate second_order(const SampleSummary& s, const PriorSpec& prior, long l) {
  check_summary(s, "second_order");
  check_l(s, l, "second_order");
  const double sigma = prior.sigma();
  double correction;  // the second-order term for l = 0; scales (1 - .) for l >= 1
  switch (prior.kind()) {
    case PriorKind::pd:
      correction = prior.theta() / double(s.n);
      break;
    case PriorKind::gg:
      correction = prior.tau() * std::pow(double(s.k), -1.0 / sigma);
      break;
    default:
      throw std::invalid_argument("second_order: only PD and GG priors have expansions");
  }
  DiscoveryEstimate e;
  e.l = l;
  e.method = Method::second_order;
  e.value = l == 0
                ? clamp01(sigma * double(s.k) / double(s.n) + correction)
                : clamp01((l - sigma) * double(s.count(l)) / double(s.n) * (1.0 - correction));
  return e;
}

}  // namespace gibbsdp
