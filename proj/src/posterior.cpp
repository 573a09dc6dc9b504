#include "gibbsdp/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gibbsdp/errors.hpp"
#include "gibbsdp/samplers.hpp"
#include "gibbsdp/special.hpp"

namespace gibbsdp {

namespace {

constexpr std::size_t kGridPoints = 2001;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// type-7 quantile (linear interpolation) of sorted data
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * double(n - 1);
  const std::size_t i = std::min(n - 2, static_cast<std::size_t>(std::floor(h)));
  const double frac = h - double(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

double beta_quantile(double a, double b, double p) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (reg_inc_beta(a, b, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// leading principal minors of a symmetric matrix, by Gaussian elimination
std::vector<double> leading_minors(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  std::vector<double> minors(n, 0.0);
  // determinant of each leading block computed independently for stability
  for (std::size_t dim = 1; dim <= n; ++dim) {
    std::vector<std::vector<double>> a(dim, std::vector<double>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) a[i][j] = m[i][j];
    double det = 1.0;
    for (std::size_t c = 0; c < dim; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < dim; ++r)
        if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
      if (piv != c) {
        std::swap(a[piv], a[c]);
        det = -det;
      }
      if (a[c][c] == 0.0) {
        det = 0.0;
        break;
      }
      det *= a[c][c];
      for (std::size_t r = c + 1; r < dim; ++r) {
        const double f = a[r][c] / a[c][c];
        for (std::size_t j = c; j < dim; ++j) a[r][j] -= f * a[c][j];
      }
    }
    minors[dim - 1] = det;
  }
  return minors;
}

}  // namespace

PosteriorLaw posterior_law(const SampleSummary& s, const PriorSpec& prior, long l) {
  if (s.n < 1 || s.k < 1 || s.k > s.n)
    throw std::domain_error("posterior_law: requires 1 <= k <= n");
  if (l < 0 || l > s.n) throw std::domain_error("posterior_law: requires 0 <= l <= n");
  const long ml = l >= 1 ? s.count(l) : 0;
  if (l >= 1 && ml == 0)
    throw std::invalid_argument("posterior_law: no species has frequency l = " +
                                std::to_string(l));
  const double sigma = prior.sigma();
  switch (prior.kind()) {
    case PriorKind::pd: {
      const double theta = prior.theta();
      if (l == 0) return ExactBeta{theta + sigma * s.k, s.n - sigma * s.k};
      const double a = (l - sigma) * double(ml);
      return ExactBeta{a, theta + s.n - a};
    }
    case PriorKind::gg:
      return GgComposite{sigma, prior.tau(), s.n, s.k, l, ml};
    case PriorKind::generic:
      break;
  }
  throw std::invalid_argument(
      "posterior_law: generic priors have no exact law here; estimate moments via "
      "v_mc_ln and build a MomentSequence explicitly");
}

std::vector<double> sample_posterior(const PosteriorLaw& law, std::size_t count,
                                     RngStream& rng) {
  if (count < 1) throw std::invalid_argument("sample_posterior: requires count >= 1");
  std::vector<double> out;
  out.reserve(count);
  if (const auto* eb = std::get_if<ExactBeta>(&law)) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(rng.beta(eb->a, eb->b));
    return out;
  }
  if (const auto* gc = std::get_if<GgComposite>(&law)) {
    const double a = gc->n - gc->sigma * gc->k;
    ZgSampler zg(gc->sigma, gc->tau, gc->n, gc->k);
    const double al = gc->l >= 1 ? (gc->l - gc->sigma) * double(gc->m_l) : 0.0;
    const double bl = a - al;
    for (std::size_t i = 0; i < count; ++i) {
      const double z = zg.draw(rng);
      const double w = sample_W(a, z, gc->sigma, rng);
      if (gc->l == 0) {
        out.push_back(clamp01(w));
      } else {
        // Beta(al, bl) factor; bl -> 0 collapses it to 1
        const double x = bl > 1e-12 ? rng.beta(al, bl) : 1.0;
        out.push_back(clamp01(x * (1.0 - w)));
      }
    }
    return out;
  }
  const auto& ms = std::get<MomentSequence>(law);
  MomentDensity dens(ms.moments);
  for (std::size_t i = 0; i < count; ++i) out.push_back(dens.quantile(rng.uniform()));
  return out;
}

std::pair<double, double> credible_interval(const PosteriorLaw& law, double level,
                                            std::size_t count, RngStream& rng) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("credible_interval: requires level in (0,1)");
  const double alpha = 0.5 * (1.0 - level);
  if (const auto* eb = std::get_if<ExactBeta>(&law))
    return {beta_quantile(eb->a, eb->b, alpha), beta_quantile(eb->a, eb->b, 1.0 - alpha)};
  std::vector<double> draws = sample_posterior(law, count, rng);
  std::sort(draws.begin(), draws.end());
  return {quantile_sorted(draws, alpha), quantile_sorted(draws, 1.0 - alpha)};
}

// ---------------------------------------------------------------------------
// Moment-based density approximation
// ---------------------------------------------------------------------------

namespace {

// coefficient of x^m in the shifted Legendre polynomial P~_j
double shifted_legendre_coeff(long j, long m) {
  const double sign = ((j + m) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(ln_choose(j, m) + ln_choose(j + m, m));
}

}  // namespace

MomentDensity::MomentDensity(const std::vector<double>& moments) {
  const long R = long(moments.size());
  if (R < 2) throw std::invalid_argument("MomentDensity: needs at least 2 moments");
  std::vector<double> mu(R + 1);
  mu[0] = 1.0;
  for (long r = 1; r <= R; ++r) {
    mu[r] = moments[r - 1];
    if (!(mu[r] >= -1e-12 && mu[r] <= 1.0 + 1e-12) || !std::isfinite(mu[r]))
      throw numeric_error("MomentDensity: moment " + std::to_string(r) +
                          " outside [0,1]");
    if (mu[r] > mu[r - 1] + 1e-10)
      throw numeric_error("MomentDensity: moments must be nonincreasing on [0,1]");
  }

  // Hankel feasibility spot checks on (mu_{i+j}) and (mu_{i+j} - mu_{i+j+1})
  const long p1 = R / 2 + 1, p2 = (R + 1) / 2;
  std::vector<std::vector<double>> h1(p1, std::vector<double>(p1));
  for (long i = 0; i < p1; ++i)
    for (long j = 0; j < p1; ++j) h1[i][j] = mu[i + j];
  std::vector<std::vector<double>> h2(p2, std::vector<double>(p2));
  for (long i = 0; i < p2; ++i)
    for (long j = 0; j < p2; ++j) h2[i][j] = mu[i + j] - mu[i + j + 1];
  for (double d : leading_minors(h1))
    if (d < -1e-8) throw numeric_error("MomentDensity: infeasible moments (Hankel)");
  for (double d : leading_minors(h2))
    if (d < -1e-8) throw numeric_error("MomentDensity: infeasible moments (Hankel)");

  // density expansion f = sum_j c_j P~_j with c_j = (2j+1) E[P~_j(X)]
  power_.assign(R + 1, 0.0);
  for (long j = 0; j <= R; ++j) {
    double ep = 0.0;
    for (long m = 0; m <= j; ++m) ep += shifted_legendre_coeff(j, m) * mu[m];
    const double cj = (2.0 * j + 1.0) * ep;
    for (long m = 0; m <= j; ++m) power_[m] += cj * shifted_legendre_coeff(j, m);
  }

  // clip at zero and renormalize on a fixed grid
  grid_cdf_.assign(kGridPoints, 0.0);
  double prev = std::max(raw_pdf(0.0), 0.0);
  const double dx = 1.0 / double(kGridPoints - 1);
  for (std::size_t i = 1; i < kGridPoints; ++i) {
    const double cur = std::max(raw_pdf(double(i) * dx), 0.0);
    grid_cdf_[i] = grid_cdf_[i - 1] + 0.5 * (prev + cur) * dx;
    prev = cur;
  }
  norm_ = grid_cdf_.back();
  if (!(norm_ > 0.0)) throw numeric_error("MomentDensity: clipped density has no mass");
  for (double& c : grid_cdf_) c /= norm_;
}

double MomentDensity::raw_pdf(double x) const {
  double acc = 0.0;
  for (std::size_t m = power_.size(); m-- > 0;) acc = acc * x + power_[m];
  return acc;
}

double MomentDensity::pdf(double x) const {
  if (x < 0.0 || x > 1.0) return 0.0;
  return std::max(raw_pdf(x), 0.0) / norm_;
}

double MomentDensity::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double pos = x * double(kGridPoints - 1);
  const std::size_t i = std::min(kGridPoints - 2, static_cast<std::size_t>(pos));
  const double frac = pos - double(i);
  return grid_cdf_[i] + frac * (grid_cdf_[i + 1] - grid_cdf_[i]);
}

double MomentDensity::quantile(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  auto it = std::lower_bound(grid_cdf_.begin(), grid_cdf_.end(), p);
  if (it == grid_cdf_.begin()) return 0.0;
  const std::size_t i = std::size_t(it - grid_cdf_.begin());
  const double c0 = grid_cdf_[i - 1], c1 = grid_cdf_[i];
  const double dx = 1.0 / double(kGridPoints - 1);
  const double frac = c1 > c0 ? (p - c0) / (c1 - c0) : 0.5;
  return clamp01((double(i - 1) + frac) * dx);
}

MomentDensity moments_to_density(const std::vector<double>& moments) {
  return MomentDensity(moments);
}

}  // namespace gibbsdp
