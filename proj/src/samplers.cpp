#include "gibbsdp/samplers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "gibbsdp/errors.hpp"

namespace gibbsdp {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw std::domain_error("samplers: requires sigma in (0,1), got " + std::to_string(sigma));
}

// log of the Zolotarev function
//   A(u) = [sin(sigma u)^sigma sin((1-sigma) u)^(1-sigma) / sin(u)]^(1/(1-sigma))
double log_zolotarev(double u, double sigma) {
  return (sigma * std::log(std::sin(sigma * u)) +
          (1.0 - sigma) * std::log(std::sin((1.0 - sigma) * u)) - std::log(std::sin(u))) /
         (1.0 - sigma);
}

}  // namespace

double sample_positive_stable(double sigma, RngStream& rng) {
  check_sigma(sigma);
  const double u = kPi * rng.uniform();
  const double e = rng.exponential();
  return std::exp((1.0 - sigma) / sigma * (log_zolotarev(u, sigma) - std::log(e)));
}

double sample_exp_tilted_stable(double sigma, double b, RngStream& rng, RejectionStats* stats) {
  check_sigma(sigma);
  if (!(b > 0.0))
    throw std::domain_error(
        "sample_exp_tilted_stable: requires b > 0 (use sample_positive_stable for b = 0)");
  // Split into m blocks so each block's tilt mass b^sigma / m is at most 1:
  // a scaled stable S/m^(1/sigma) thinned with probability exp(-b x) is an
  // exact draw from each block, accepted with probability exp(-b^sigma / m).
  const double bs = std::pow(b, sigma);
  const long m = std::max<long>(1, static_cast<long>(std::ceil(bs)));
  const double scale = std::pow(double(m), -1.0 / sigma);
  double total = 0.0;
  for (long j = 0; j < m; ++j) {
    for (std::uint64_t trials = 0;; ++trials) {
      if (trials > 1000000)
        throw numeric_error("sample_exp_tilted_stable: rejection loop stalled");
      const double x = scale * sample_positive_stable(sigma, rng);
      if (stats) ++stats->proposals;
      if (std::log(rng.uniform()) <= -b * x) {
        if (stats) ++stats->accepts;
        total += x;
        break;
      }
    }
  }
  return total;
}

double sample_poly_tilted_stable(double sigma, double c, RngStream& rng) {
  check_sigma(sigma);
  if (!(c > -1.0)) throw std::domain_error("sample_poly_tilted_stable: requires c > -1");
  if (c == 0.0) return sample_positive_stable(sigma, rng);
  if (c > 0.0) {
    // x^(-c sigma) = integral over exponential tilts with a Gamma(c)^(1/sigma)
    // mixing law, so tilt by G^(1/sigma), G ~ Gamma(c, 1).
    const double g = rng.gamma(c);
    if (g == 0.0) return sample_positive_stable(sigma, rng);
    return sample_exp_tilted_stable(sigma, std::pow(g, 1.0 / sigma), rng);
  }
  // c in (-1, 0): joint Zolotarev representation.  U on (0, pi) has density
  // proportional to A(u)^(-c(1-sigma)); given U, Y ~ Gamma(1 + c(1-sigma))/A(U)
  // and S = Y^(-(1-sigma)/sigma).  U is drawn by rejection from the power-law
  // proposal (pi - u)^(-a) using the bound
  //   [A(u)(pi-u)^(1/(1-sigma))]^(1-sigma) <= sigma^sigma (1-sigma)^(1-sigma) pi^2/2.
  const double a = -c;
  const double log_mb = sigma * std::log(sigma) + (1.0 - sigma) * std::log(1.0 - sigma) +
                        std::log(kPi * kPi / 2.0);
  double u = 0.0, log_b1s = 0.0;
  for (std::uint64_t trials = 0;; ++trials) {
    if (trials > 1000000)
      throw numeric_error("sample_poly_tilted_stable: rejection loop stalled");
    const double v = rng.uniform();
    u = kPi * (1.0 - std::pow(v, 1.0 / (1.0 - a)));
    if (u <= 0.0 || u >= kPi) continue;
    log_b1s = sigma * std::log(std::sin(sigma * u)) +
              (1.0 - sigma) * std::log(std::sin((1.0 - sigma) * u)) + std::log(kPi - u) -
              std::log(std::sin(u));
    if (std::log(rng.uniform()) <= a * (log_b1s - log_mb)) break;
  }
  const double log_a_u = (log_b1s - std::log(kPi - u)) / (1.0 - sigma);
  const double y = rng.gamma(1.0 + c * (1.0 - sigma)) * std::exp(-log_a_u);
  return std::pow(y, -(1.0 - sigma) / sigma);
}

// ---------------------------------------------------------------------------
// Adaptive rejection sampling
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kMaxHullPoints = 64;
constexpr double kSlopeTiny = 1e-12;

// log(1 - exp(-t)) for t > 0.
double log1mexp(double t) {
  return t > 0.6931471805599453 ? std::log1p(-std::exp(-t)) : std::log(-std::expm1(-t));
}

}  // namespace

AdaptiveRejectionSampler::AdaptiveRejectionSampler(LogConcaveTarget target)
    : target_(std::move(target)) {
  if (!target_.log_density || !target_.derivative)
    throw std::invalid_argument("AdaptiveRejectionSampler: target callbacks required");
  if (!(target_.lower < target_.upper))
    throw std::invalid_argument("AdaptiveRejectionSampler: empty domain");

  double x0 = target_.init;
  if (!std::isfinite(x0)) {
    if (std::isfinite(target_.lower) && std::isfinite(target_.upper))
      x0 = 0.5 * (target_.lower + target_.upper);
    else if (std::isfinite(target_.lower))
      x0 = target_.lower + 1.0;
    else if (std::isfinite(target_.upper))
      x0 = target_.upper - 1.0;
    else
      x0 = 0.0;
  }

  // Two starting abscissae around x0, then push outward until the hull is
  // integrable on each unbounded side (positive slope on the far left,
  // negative on the far right).
  double span = std::max(std::fabs(x0), 1.0) * 0.1;
  double left = x0, right = x0 + span;
  if (std::isfinite(target_.lower) && left <= target_.lower)
    left = target_.lower + std::max(1e-10, 1e-10 * std::fabs(target_.lower));
  if (std::isfinite(target_.upper) && right >= target_.upper)
    right = 0.5 * (left + target_.upper);

  auto eval_insert = [&](double x) {
    insert(x, target_.log_density(x), target_.derivative(x));
  };
  eval_insert(left);
  if (right != left) eval_insert(right);
  for (int tries = 0; points_.empty(); ++tries) {
    // both starting points underflowed; walk toward the interior
    if (tries > 60) throw envelope_error("AdaptiveRejectionSampler: no usable start point");
    span *= 0.5;
    eval_insert(left + span);
  }

  if (!std::isfinite(target_.lower)) {
    double x = points_.front().x, step = span;
    int tries = 0;
    while (points_.front().dh <= 0.0) {
      if (++tries > 200)
        throw envelope_error("AdaptiveRejectionSampler: no rising slope on the left");
      x -= step;
      step *= 2.0;
      eval_insert(x);
    }
  }
  if (!std::isfinite(target_.upper)) {
    double x = points_.back().x, step = span;
    int tries = 0;
    while (points_.back().dh >= 0.0) {
      if (++tries > 200)
        throw envelope_error("AdaptiveRejectionSampler: no falling slope on the right");
      x += step;
      step *= 2.0;
      eval_insert(x);
    }
  }
  rebuild();
}

void AdaptiveRejectionSampler::insert(double x, double h, double dh) {
  if (!std::isfinite(x)) return;
  if (std::isnan(h) || std::isnan(dh)) return;
  if (h == -std::numeric_limits<double>::infinity()) return;  // boundary underflow; skip
  Point p{x, h, dh};
  auto it = std::lower_bound(points_.begin(), points_.end(), x,
                             [](const Point& a, double v) { return a.x < v; });
  if (it != points_.end() && it->x == x) return;
  points_.insert(it, p);

#ifndef NDEBUG
  // Concavity spot check: slopes must be nonincreasing in x.
  for (size_t i = 0; i + 1 < points_.size(); ++i)
    assert(points_[i].dh >= points_[i + 1].dh - 1e-6 * (1.0 + std::fabs(points_[i].dh)));
#endif
}

void AdaptiveRejectionSampler::rebuild() {
  const size_t np = points_.size();
  knots_.assign(np + 1, 0.0);
  knots_[0] = target_.lower;
  knots_[np] = target_.upper;
  for (size_t i = 0; i + 1 < np; ++i) {
    const Point &p = points_[i], &q = points_[i + 1];
    double z;
    if (std::fabs(p.dh - q.dh) < kSlopeTiny * (1.0 + std::fabs(p.dh))) {
      z = 0.5 * (p.x + q.x);
    } else {
      z = (q.h - p.h - q.x * q.dh + p.x * p.dh) / (p.dh - q.dh);
      z = std::min(std::max(z, p.x), q.x);  // numeric safety: keep between abscissae
    }
    knots_[i + 1] = z;
  }
  log_mass_.assign(np, 0.0);
  for (size_t i = 0; i < np; ++i) {
    const Point& p = points_[i];
    const double za = knots_[i], zb = knots_[i + 1];
    const double d = p.dh;
    double lm;
    if (za == -std::numeric_limits<double>::infinity()) {
      // requires d > 0
      lm = p.h + d * (zb - p.x) - std::log(d);
    } else if (zb == std::numeric_limits<double>::infinity()) {
      // requires d < 0
      lm = p.h + d * (za - p.x) - std::log(-d);
    } else {
      const double w = zb - za;
      if (std::fabs(d) * w < 1e-12) {
        lm = p.h + d * (0.5 * (za + zb) - p.x) + std::log(w);
      } else if (d > 0.0) {
        lm = p.h + d * (zb - p.x) + log1mexp(d * w) - std::log(d);
      } else {
        lm = p.h + d * (za - p.x) + log1mexp(-d * w) - std::log(-d);
      }
    }
    log_mass_[i] = lm;
  }
}

double AdaptiveRejectionSampler::draw(RngStream& rng) {
  for (std::uint64_t trials = 0;; ++trials) {
    if (trials > 100000) throw numeric_error("AdaptiveRejectionSampler: rejection stalled");
    // pick a hull segment
    double max_lm = log_mass_[0];
    for (double lm : log_mass_) max_lm = std::max(max_lm, lm);
    double total = 0.0;
    for (double lm : log_mass_) total += std::exp(lm - max_lm);
    double u = rng.uniform() * total;
    size_t seg = 0;
    for (; seg + 1 < log_mass_.size(); ++seg) {
      const double w = std::exp(log_mass_[seg] - max_lm);
      if (u <= w) break;
      u -= w;
    }
    const Point& p = points_[seg];
    const double za = knots_[seg], zb = knots_[seg + 1];
    const double d = p.dh;
    const double v = rng.uniform();
    double x;
    if (za == -std::numeric_limits<double>::infinity()) {
      x = zb + std::log(v) / d;  // d > 0
    } else if (zb == std::numeric_limits<double>::infinity()) {
      x = za + std::log1p(-v) / d;  // d < 0; -log(1-v)/|d| is Exp(|d|)
    } else if (std::fabs(d) * (zb - za) < 1e-12) {
      x = za + v * (zb - za);
    } else if (d > 0.0) {
      x = zb + std::log(v + (1.0 - v) * std::exp(-d * (zb - za))) / d;
    } else {
      x = za + std::log1p(-v * (1.0 - std::exp(d * (zb - za)))) / d;
    }
    if (!(x > target_.lower && x < target_.upper)) continue;
    const double hull = p.h + d * (x - p.x);
    const double h = target_.log_density(x);
    if (std::log(rng.uniform()) <= h - hull) return x;
    if (points_.size() < kMaxHullPoints) {
      insert(x, h, target_.derivative(x));
      rebuild();
    }
  }
}

double sample_log_concave(const LogConcaveTarget& target, RngStream& rng) {
  AdaptiveRejectionSampler ars(target);
  return ars.draw(rng);
}

// ---------------------------------------------------------------------------
// Posterior latent-scale samplers
// ---------------------------------------------------------------------------

double sample_Zp(double sigma, double theta, long k, RngStream& rng) {
  check_sigma(sigma);
  if (!(theta > -sigma)) throw std::domain_error("sample_Zp: requires theta > -sigma");
  if (k < 1) throw std::domain_error("sample_Zp: requires k >= 1");
  return std::pow(rng.gamma(theta / sigma + k), 1.0 / sigma);
}

LogConcaveTarget ZgSampler::make_target(double sigma, double tau, long n, long k) {
  check_sigma(sigma);
  if (!(tau > 0.0)) throw std::domain_error("ZgSampler: requires tau > 0");
  if (n < 1 || k < 1 || k > n) throw std::domain_error("ZgSampler: requires 1 <= k <= n");
  // Y = Z^sigma on (tau^sigma, inf):
  //   log f(y) = alpha log y + (n-1) log(y^(1/sigma) - tau) - y,
  //   alpha = k - 1 - (n-1)/sigma.
  const double lo = std::pow(tau, sigma);
  const double alpha = k - 1.0 - (n - 1.0) / sigma;
  const double inv_sigma = 1.0 / sigma;
  auto logf = [=](double y) {
    const double z = std::pow(y, inv_sigma);
    return alpha * std::log(y) + (n - 1.0) * std::log(z - tau) - y;
  };
  auto dlogf = [=](double y) {
    const double z = std::pow(y, inv_sigma);
    return alpha / y + (n - 1.0) * inv_sigma * z / (y * (z - tau)) - 1.0;
  };
  // Interior mode: slope is +inf at the left edge for n >= 2 and the target
  // is log-concave, so bisect the derivative's sign change.
  double a = lo * (1.0 + 1e-12) + 1e-300, b = std::max(2.0 * lo, lo + 1.0);
  int guard = 0;
  while (dlogf(b) > 0.0) {
    b *= 2.0;
    if (++guard > 400) throw numeric_error("ZgSampler: mode bracket failed");
  }
  double init;
  if (dlogf(a) <= 0.0) {
    init = a;  // boundary mode (n == 1 cases)
  } else {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (a + b);
      (dlogf(mid) > 0.0 ? a : b) = mid;
    }
    init = 0.5 * (a + b);
  }
  return LogConcaveTarget{logf, dlogf, lo, std::numeric_limits<double>::infinity(), init};
}

ZgSampler::ZgSampler(double sigma, double tau, long n, long k)
    : sigma_(sigma), ars_(make_target(sigma, tau, n, k)) {}

double ZgSampler::draw(RngStream& rng) {
  return std::pow(ars_.draw(rng), 1.0 / sigma_);
}

double sample_Zg(double sigma, double tau, long n, long k, RngStream& rng) {
  ZgSampler s(sigma, tau, n, k);
  return s.draw(rng);
}

double sample_W(double a, double b, double sigma, RngStream& rng) {
  if (!(a > 0.0)) throw std::domain_error("sample_W: requires a > 0");
  if (!(b > 0.0)) throw std::domain_error("sample_W: requires b > 0");
  check_sigma(sigma);
  const double r = sample_exp_tilted_stable(sigma, b, rng);
  const double g = rng.gamma(a);
  return b * r / (b * r + g);
}

}  // namespace gibbsdp
