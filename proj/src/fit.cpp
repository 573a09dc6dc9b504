#include "gibbsdp/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gibbsdp/parallel.hpp"
#include "gibbsdp/special.hpp"
#include "gibbsdp/weights.hpp"

namespace gibbsdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double frequency_term(const SampleSummary& s, double sigma) {
  // sum_l m_l [lgamma(l - sigma) - lgamma(1 - sigma)]
  const double base = ln_gamma(1.0 - sigma);
  double acc = 0.0;
  for (const auto& [l, ml] : s.m)
    if (ml > 0) acc += double(ml) * (ln_gamma(double(l) - sigma) - base);
  return acc;
}

void check_fit_input(const SampleSummary& s) {
  if (s.n < 1 || s.k < 1 || s.k > s.n)
    throw std::domain_error("fit: requires 1 <= k <= n");
  for (const auto& [l, ml] : s.m)
    if (l < 1 || ml < 0) throw std::domain_error("fit: invalid frequency counts");
}

struct NmResult {
  double x = 0.0, y = 0.0;
  double value = -kInf;
  bool converged = false;
  long evaluations = 0;
};

// 2-d Nelder-Mead maximization (reflection 1, expansion 2, contraction 0.5,
// shrink 0.5); stops when the simplex diameter falls below 1e-6 or after
// max_evals objective calls.
NmResult nelder_mead_max(const std::function<double(double, double)>& f, double x0,
                         double y0, long max_evals) {
  struct Vertex {
    double x, y, neg;  // minimizes neg = -f
  };
  NmResult res;
  auto eval = [&](double x, double y) {
    ++res.evaluations;
    const double v = f(x, y);
    return std::isfinite(v) ? -v : kInf;
  };
  std::array<Vertex, 3> v{Vertex{x0, y0, 0.0}, Vertex{x0 + 0.5, y0, 0.0},
                          Vertex{x0, y0 + 0.5, 0.0}};
  for (auto& p : v) p.neg = eval(p.x, p.y);

  auto order = [&] {
    std::sort(v.begin(), v.end(),
              [](const Vertex& a, const Vertex& b) { return a.neg < b.neg; });
  };
  auto diameter = [&] {
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        d = std::max(d, std::hypot(v[i].x - v[j].x, v[i].y - v[j].y));
    return d;
  };

  order();
  while (res.evaluations < max_evals) {
    if (diameter() < 1e-6) {
      res.converged = true;
      break;
    }
    const double cx = 0.5 * (v[0].x + v[1].x), cy = 0.5 * (v[0].y + v[1].y);
    const double rx = cx + (cx - v[2].x), ry = cy + (cy - v[2].y);
    const double fr = eval(rx, ry);
    if (fr < v[0].neg) {
      const double ex = cx + 2.0 * (cx - v[2].x), ey = cy + 2.0 * (cy - v[2].y);
      const double fe = eval(ex, ey);
      v[2] = fe < fr ? Vertex{ex, ey, fe} : Vertex{rx, ry, fr};
    } else if (fr < v[1].neg) {
      v[2] = Vertex{rx, ry, fr};
    } else {
      const bool outside = fr < v[2].neg;
      const double kx = outside ? cx + 0.5 * (rx - cx) : cx + 0.5 * (v[2].x - cx);
      const double ky = outside ? cy + 0.5 * (ry - cy) : cy + 0.5 * (v[2].y - cy);
      const double fk = eval(kx, ky);
      if (fk < (outside ? fr : v[2].neg)) {
        v[2] = Vertex{kx, ky, fk};
      } else {
        for (int i = 1; i < 3; ++i) {
          v[i].x = v[0].x + 0.5 * (v[i].x - v[0].x);
          v[i].y = v[0].y + 0.5 * (v[i].y - v[0].y);
          v[i].neg = eval(v[i].x, v[i].y);
        }
      }
    }
    order();
  }
  res.x = v[0].x;
  res.y = v[0].y;
  res.value = -v[0].neg;
  return res;
}

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigma_from(double u) { return 0.01 + 0.98 / (1.0 + std::exp(-u)); }

}  // namespace

double log_likelihood_pd(const SampleSummary& s, double sigma, double theta) {
  check_fit_input(s);
  return v_pd_ln(s.n, s.k, sigma, theta) + frequency_term(s, sigma);
}

double log_likelihood_gg(const SampleSummary& s, double sigma, double tau) {
  check_fit_input(s);
  return v_gg_ln(s.n, s.k, sigma, tau, GgMethod::quadrature) + frequency_term(s, sigma);
}

FitResult fit(const SampleSummary& s, PriorKind kind) {
  check_fit_input(s);
  if (s.n < 2 || s.k < 2)
    throw std::domain_error("fit: needs n >= 2 and k >= 2 (degenerate data)");
  if (kind == PriorKind::generic)
    throw std::invalid_argument("fit: only PD and GG priors can be fitted");
  const bool pd = kind == PriorKind::pd;

  // objective over transformed coordinates (u, v):
  //   sigma = 0.01 + 0.98 logistic(u); theta = e^v - sigma (PD), tau = e^v (GG)
  auto objective = [&](double u, double v) -> double {
    if (!(std::fabs(v) < 200.0) || !(std::fabs(u) < 60.0)) return -kInf;
    const double sigma = sigma_from(u);
    try {
      return pd ? log_likelihood_pd(s, sigma, std::exp(v) - sigma)
                : log_likelihood_gg(s, sigma, std::exp(v));
    } catch (const std::exception&) {
      return -kInf;  // infeasible corner; let the simplex move away
    }
  };

  constexpr std::array<double, 4> sigma_grid{0.2, 0.4, 0.6, 0.8};
  constexpr std::array<double, 4> loc_grid{0.1, 1.0, 10.0, 100.0};
  struct StartOutcome {
    double sigma = 0.0, param = 0.0, ll = -kInf;
    bool converged = false;
    long evaluations = 0;
  };
  std::vector<StartOutcome> outcomes(sigma_grid.size() * loc_grid.size());
  parallel_for(outcomes.size(), [&](std::size_t idx) {
    const double s0 = sigma_grid[idx / loc_grid.size()];
    const double loc0 = loc_grid[idx % loc_grid.size()];
    const NmResult nm =
        nelder_mead_max(objective, logit((s0 - 0.01) / 0.98), std::log(loc0), 2000);
    StartOutcome& out = outcomes[idx];
    out.sigma = sigma_from(nm.x);
    out.param = pd ? std::exp(nm.y) - out.sigma : std::exp(nm.y);
    out.ll = nm.value;
    out.converged = nm.converged;
    out.evaluations = nm.evaluations;
  });

  // deterministic reduction: best log likelihood, ties by lexicographic params
  std::vector<std::size_t> rank(outcomes.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    const auto& A = outcomes[a];
    const auto& B = outcomes[b];
    if (A.ll != B.ll) return A.ll > B.ll;
    if (A.sigma != B.sigma) return A.sigma < B.sigma;
    return A.param < B.param;
  });
  const StartOutcome& best = outcomes[rank[0]];
  if (!std::isfinite(best.ll))
    throw std::runtime_error("fit: every start failed to produce a finite likelihood");

  FitResult res{pd ? PriorSpec::pd(best.sigma, best.param)
                   : PriorSpec::gg(best.sigma, best.param),
                best.ll, best.converged, 0, 0.0};
  for (const auto& o : outcomes) res.evaluations += o.evaluations;
  const std::size_t top = std::min<std::size_t>(3, rank.size());
  for (std::size_t i = 0; i < top; ++i)
    for (std::size_t j = i + 1; j < top; ++j) {
      const auto& A = outcomes[rank[i]];
      const auto& B = outcomes[rank[j]];
      res.multi_start_spread = std::max(
          res.multi_start_spread, std::hypot(A.sigma - B.sigma, A.param - B.param));
    }
  return res;
}

}  // namespace gibbsdp
