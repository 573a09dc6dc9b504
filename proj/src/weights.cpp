#include "gibbsdp/weights.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gibbsdp/errors.hpp"
#include "gibbsdp/parallel.hpp"
#include "gibbsdp/quadrature.hpp"
#include "gibbsdp/samplers.hpp"
#include "gibbsdp/signed_log.hpp"
#include "gibbsdp/special.hpp"

namespace gibbsdp {

namespace {

void check_nk(long n, long k, const char* who) {
  if (n < 1 || k < 1 || k > n)
    throw std::invalid_argument(std::string(who) + ": requires 1 <= k <= n, got n=" +
                                std::to_string(n) + " k=" + std::to_string(k));
}

void check_sigma(double sigma, const char* who) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::domain_error(std::string(who) + ": requires sigma in (0,1)");
}

}  // namespace

double v_pd_ln(long n, long k, double sigma, double theta) {
  check_nk(n, k, "v_pd_ln");
  check_sigma(sigma, "v_pd_ln");
  if (!(theta > -sigma)) throw std::domain_error("v_pd_ln: requires theta > -sigma");
  // prod_{i=0}^{k-1}(theta+i sigma) / (theta)_n with the common factor theta
  // cancelled, so theta = 0 stays finite.
  double s = 0.0;
  for (long i = 1; i < k; ++i) s += std::log(theta + i * sigma);
  return s - (ln_gamma(theta + n) - ln_gamma(theta + 1.0));
}

namespace {

// The alternating sum cancels catastrophically: measured against exact
// arithmetic it loses ~0.35 n decimal digits (n = 50, moderate tau wipes out
// 15-18 digits), so double precision returns noise long before the n = 50
// usability cutoff.  The sum is therefore evaluated in binary128, whose ~33.6
// digits leave 9+ significant digits over the whole supported region.

// Upper incomplete gamma Gamma(a; x) in binary128 for the descending family
// a = k - i/sigma.  Anchored at a0 = frac(a) in [0,1) and recurred:
//   up:   Gamma(a+1; x) = a Gamma(a; x) + x^a e^-x     (positive terms)
//   down: Gamma(a-1; x) = (Gamma(a; x) - x^(a-1) e^-x) / (a-1)
// The down recurrence amplifies roundoff by ~max_m x^m/m!; callers keep
// x <= 6 so the slop stays under ~3 digits.
#if defined(__GNUC__)

__float128 q_gamma_anchor_series(__float128 a, __float128 x) {
  // x <= 1.5, 0 <= a < 1.  Cancellation-free split, exact in the a -> 0 limit:
  //   Gamma(a; x) = (1 - x^a)/a + (Gamma(a) - 1/a) - sum_{j>=1} (-1)^j x^(a+j)/(j! (a+j))
  const __float128 kEuler = strtoflt128("0.57721566490153286060651209008240243104215933593992", nullptr);
  const __float128 lx = logq(x);
  const __float128 u = a * lx;
  const __float128 term1 = -lx * (fabsq(u) < __float128(1e-30) ? __float128(1) : expm1q(u) / u);
  const __float128 term2 = a == 0 ? -kEuler : expm1q(lgammaq(__float128(1) + a)) / a;
  __float128 s = 0, xp = powq(x, a) * x;  // x^(a+j), j = 1
  for (int j = 1; j < 500; ++j) {
    const __float128 add = (j % 2 == 1 ? __float128(-1) : __float128(1)) * xp / (a + j);
    s += add;
    if (fabsq(add) < __float128(1e-34) * (fabsq(s) + __float128(1e-30))) break;
    xp *= x / (j + 1);  // advance x^(a+j)/j!
  }
  return term1 + term2 - s;
}

__float128 q_gamma_anchor_cf(__float128 a, __float128 x) {
  // x > 1.5, a <= 1: modified Lentz on the standard continued fraction
  //   Gamma(a; x) = e^-x x^a / (x+1-a - 1(1-a)/(x+3-a - 2(2-a)/(...)))
  const __float128 tiny = __float128(1e-300) * __float128(1e-300);
  __float128 b = x + __float128(1) - a;
  __float128 c = __float128(1) / tiny, d = __float128(1) / b, h = d;
  for (int j = 1; j < 500; ++j) {
    const __float128 an = -__float128(j) * (__float128(j) - a);
    b += 2;
    d = b + an * d;
    if (d == 0) d = tiny;
    c = b + an / c;
    if (c == 0) c = tiny;
    d = __float128(1) / d;
    const __float128 delta = c * d;
    h *= delta;
    if (fabsq(delta - __float128(1)) < __float128(1e-33)) break;
  }
  return expq(-x) * powq(x, a) * h;
}

__float128 q_upper_gamma(__float128 a, __float128 x) {
  const __float128 a0 = a - floorq(a);  // anchor in [0, 1)
  __float128 g = x <= __float128(1.5) ? q_gamma_anchor_series(a0, x) : q_gamma_anchor_cf(a0, x);
  const long steps = long(llrintq(a - a0));
  if (steps >= 0) {
    __float128 p = powq(x, a0) * expq(-x);  // x^(a0+j) e^-x
    for (long j = 0; j < steps; ++j) {
      g = (a0 + __float128(j)) * g + p;
      p *= x;
    }
  } else {
    __float128 p = powq(x, a0 - __float128(1)) * expq(-x);  // x^(a-1) e^-x at the current a
    for (long j = 0; j < -steps; ++j) {
      g = (g - p) / (a0 - __float128(j) - __float128(1));
      p /= x;
    }
  }
  return g;
}

double v_gg_alternating(long n, long k, double sigma, double tau) {
  if (n > 50)
    throw std::invalid_argument(
        "v_gg_ln: alternating_sum is restricted to n <= 50; use quadrature");
  const __float128 qs = sigma, qt = tau;
  const __float128 x = powq(qt, qs);
  if (double(x) > 6.0)
    throw numeric_error(
        "v_gg_ln: alternating sum is unstable for tau^sigma > 6; use quadrature");
  __float128 sum = 0, max_mag = 0;
  __float128 binom = 1, tp = 1;  // C(n-1, i), tau^i
  for (long i = 0; i < n; ++i) {
    const __float128 a = __float128(k) - __float128(i) / qs;
    const __float128 term = binom * tp * q_upper_gamma(a, x);
    sum += (i % 2 == 0) ? term : -term;
    if (fabsq(term) > max_mag) max_mag = fabsq(term);
    binom = binom * __float128(n - 1 - i) / __float128(i + 1);
    tp *= qt;
  }
  if (sum <= 0)
    throw numeric_error("v_gg_ln: alternating sum collapsed to a nonpositive value");
  const double digits_lost = double(log10q(max_mag / sum));
  if (digits_lost > 24.0)
    throw numeric_error("v_gg_ln: alternating sum lost too many digits; use quadrature");
  return (k - 1) * std::log(sigma) + double(powq(qt, qs)) - ln_gamma(double(n)) +
         double(logq(sum));
}

#else
#error "binary128 support is required for the alternating-sum route"
#endif

double v_gg_quadrature(long n, long k, double sigma, double tau) {
  const double ts = std::pow(tau, sigma);
  // V = sigma^k e^(tau^sigma) / Gamma(n) * I,
  // I = int_0^inf x^(n-1) (tau+x)^(sigma k - n) exp(-(tau+x)^sigma) dx.
  auto logf = [=](double x) {
    return (n - 1.0) * std::log(x) + (sigma * k - n) * std::log(tau + x) -
           std::pow(tau + x, sigma);
  };
  // Stationarity of logf: G(x) = sigma x (tau+x)^sigma - (n-1) tau - (sigma k - 1) x.
  auto G = [=](double x) {
    return sigma * x * std::pow(tau + x, sigma) - (n - 1.0) * tau - (sigma * k - 1.0) * x;
  };

  double shift, x_peak, x_lo;
  if (n == 1) {
    // integrand is maximal at the boundary x = 0
    x_peak = 0.0;
    x_lo = 0.0;
    shift = (sigma * k - n) * std::log(tau) - ts;
  } else {
    double hi = 1.0;
    int guard = 0;
    while (G(hi) < 0.0) {
      hi *= 2.0;
      if (++guard > 2000) throw numeric_error("v_gg_ln: mode bracket failed");
    }
    double lo = 1e-300;
    for (int i = 0; i < 200; ++i) {
      const double mid = std::sqrt(lo * hi);
      (G(mid) < 0.0 ? lo : hi) = mid;
    }
    x_peak = std::sqrt(lo * hi);
    shift = logf(x_peak);
    // walk left until the integrand has dropped ~e^70 below the peak
    x_lo = 0.5 * x_peak;
    for (int i = 0; i < 400 && x_lo > 1e-290; ++i) {
      if (logf(x_lo) - shift <= -70.0) break;
      x_lo *= 0.5;
    }
    if (x_lo <= 1e-290) x_lo = 0.0;
  }

  double x_hi = x_peak + std::max({x_peak, tau, 1.0});
  {
    double step = x_hi - x_peak;
    int guard = 0;
    while (logf(x_hi) - shift > -70.0) {
      step *= 2.0;
      x_hi += step;
      if (++guard > 400) throw numeric_error("v_gg_ln: right tail bracket failed");
    }
  }

  auto g = [&](double x) { return std::exp(logf(x) - shift); };
  double total = integrate_adaptive(g, x_lo, x_hi, 1e-11).value;
  if (x_lo > 0.0) total += integrate_adaptive(g, 0.0, x_lo, 1e-9, 1e-16 * total).value;
  // the decay is subexponential, so extend with doubling segments until the
  // added mass is negligible
  double seg_a = x_hi, seg_len = x_hi - x_lo;
  bool tail_done = false;
  for (int it = 0; it < 200; ++it) {
    const double seg_b = seg_a + seg_len;
    const double add = integrate_adaptive(g, seg_a, seg_b, 1e-9, 1e-16 * total).value;
    total += add;
    if (add <= 1e-13 * total) {
      tail_done = true;
      break;
    }
    seg_a = seg_b;
    seg_len *= 2.0;
  }
  if (!tail_done) throw numeric_error("v_gg_ln: tail extension did not converge");
  if (!(total > 0.0)) throw numeric_error("v_gg_ln: quadrature produced nonpositive mass");
  return k * std::log(sigma) + ts - ln_gamma(double(n)) + shift + std::log(total);
}

}  // namespace

double v_gg_ln(long n, long k, double sigma, double tau, GgMethod method) {
  check_nk(n, k, "v_gg_ln");
  check_sigma(sigma, "v_gg_ln");
  if (!(tau > 0.0)) throw std::domain_error("v_gg_ln: requires tau > 0");
  return method == GgMethod::alternating_sum ? v_gg_alternating(n, k, sigma, tau)
                                             : v_gg_quadrature(n, k, sigma, tau);
}

McEstimate v_mc_ln(long n, long k, const PriorSpec& prior, std::uint64_t draws,
                   const RngStream& rng) {
  check_nk(n, k, "v_mc_ln");
  if (prior.kind() != PriorKind::generic)
    throw std::invalid_argument("v_mc_ln: requires a generic prior (use the closed forms "
                                "for PD and GG)");
  if (draws < 1000) throw std::invalid_argument("v_mc_ln: requires draws >= 1000");
  const double sigma = prior.sigma();
  const auto& log_h = prior.log_h();
  const double a = sigma * k, b = n - sigma * k;

  constexpr std::uint64_t kChunks = 64;
  struct ChunkStat {
    double max = -std::numeric_limits<double>::infinity();
    double s1 = 0.0, s2 = 0.0;  // sums of exp(v-max), exp(2(v-max))
  };
  std::vector<ChunkStat> stats(kChunks);
  parallel_for(kChunks, [&](std::size_t j) {
    const std::uint64_t nj = draws / kChunks + (j < draws % kChunks ? 1 : 0);
    if (nj == 0) return;
    RngStream stream(rng.seed(), rng.stream_id() * kChunks + j);
    std::vector<double> vals;
    vals.reserve(nj);
    ChunkStat st;
    for (std::uint64_t d = 0; d < nj; ++d) {
      const double s = sample_poly_tilted_stable(sigma, double(k), stream);
      const double beta = stream.beta(a, b);
      const double v = log_h(s / beta);
      vals.push_back(v);
      if (v > st.max) st.max = v;
    }
    if (std::isfinite(st.max)) {
      for (double v : vals) {
        const double e = std::exp(v - st.max);
        st.s1 += e;
        st.s2 += e * e;
      }
    }
    stats[j] = st;
  });

  double gmax = -std::numeric_limits<double>::infinity();
  for (const auto& st : stats) gmax = std::max(gmax, st.max);
  if (!std::isfinite(gmax)) throw numeric_error("v_mc_ln: every h-evaluation underflowed");
  double s1 = 0.0, s2 = 0.0;
  for (const auto& st : stats) {
    if (!std::isfinite(st.max)) continue;
    const double c = std::exp(st.max - gmax);
    s1 += st.s1 * c;
    s2 += st.s2 * c * c;
  }
  const double N = double(draws);
  const double l1 = gmax + std::log(s1 / N);
  const double l2 = 2.0 * gmax + std::log(s2 / N);
  McEstimate out;
  out.log_value = (k - 1) * std::log(sigma) + ln_gamma(double(k)) - ln_gamma(double(n)) + l1;
  out.rel_stderr = draws > 1 ? std::sqrt(std::expm1(l2 - 2.0 * l1) / (N - 1.0)) : 0.0;
  if (!std::isfinite(out.log_value)) throw numeric_error("v_mc_ln: estimate is not finite");
  return out;
}

WeightRatioPair weight_ratios(long n, long k, const PriorSpec& prior) {
  check_nk(n, k, "weight_ratios");
  const double sigma = prior.sigma();
  WeightRatioPair out;
  switch (prior.kind()) {
    case PriorKind::pd: {
      const double theta = prior.theta();
      out.g0 = (theta + sigma * k) / (theta + n);
      break;
    }
    case PriorKind::gg: {
      const double tau = prior.tau();
      const double base = v_gg_ln(n, k, sigma, tau, GgMethod::quadrature);
      out.g0 = std::exp(v_gg_ln(n + 1, k + 1, sigma, tau, GgMethod::quadrature) - base);
      const double g1_raw = std::exp(v_gg_ln(n + 1, k, sigma, tau, GgMethod::quadrature) - base);
      const double resid = std::fabs(out.g0 + (n - sigma * k) * g1_raw - 1.0);
      if (resid > 1e-8)
        throw numeric_error("weight_ratios: triangular-recursion residual " +
                            std::to_string(resid) + " exceeds 1e-8");
      break;
    }
    case PriorKind::generic:
      throw std::invalid_argument(
          "weight_ratios: no deterministic route for generic priors; estimate the "
          "log-weights with v_mc_ln instead");
  }
  if (!(out.g0 > 0.0 && out.g0 < 1.0))
    throw numeric_error("weight_ratios: g0 outside (0,1)");
  // force the triangular identity g0 + (n - sigma k) g1 = 1
  out.g1 = (1.0 - out.g0) / (n - sigma * k);
  return out;
}

}  // namespace gibbsdp
