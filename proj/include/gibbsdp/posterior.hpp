#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "gibbsdp/prior.hpp"
#include "gibbsdp/rng.hpp"
#include "gibbsdp/sample.hpp"

namespace gibbsdp {

// Posterior law of the discovery mass Q(A_l) | data, in one of three shapes.

struct ExactBeta {
  double a = 1.0, b = 1.0;
};

// GG posterior, kept as its parameters; sampling composes the latent scale
// Z_g, the tilted-stable ratio W, and (for l >= 1) an extra Beta factor.
struct GgComposite {
  double sigma = 0.5, tau = 1.0;
  long n = 1, k = 1;
  long l = 0, m_l = 0;
};

// Law known only through raw moments; moments[r-1] = E[X^r].
struct MomentSequence {
  std::vector<double> moments;
};

using PosteriorLaw = std::variant<ExactBeta, GgComposite, MomentSequence>;

// Law of Q(A_l) | data.  PD gives exact Betas, GG the composite sampler.
// Generic priors are rejected: their weights exist only as Monte Carlo
// estimates (v_mc_ln), too noisy for a moment-feasibility-checked
// MomentSequence; build one explicitly if external moments are available.
PosteriorLaw posterior_law(const SampleSummary& s, const PriorSpec& prior, long l);

std::vector<double> sample_posterior(const PosteriorLaw& law, std::size_t count,
                                     RngStream& rng);

// Equal-tailed interval at the given level.  ExactBeta inverts the
// regularized incomplete beta to 1e-10; the other laws take empirical
// quantiles (linear interpolation) of `count` draws.
std::pair<double, double> credible_interval(const PosteriorLaw& law, double level,
                                            std::size_t count, RngStream& rng);

// Density on [0,1] reconstructed from finitely many raw moments via a
// shifted-Legendre expansion, then clipped at zero and renormalized on a
// fixed grid.
class MomentDensity {
 public:
  // moments[r-1] = E[X^r]; needs at least two.  Throws numeric_error when the
  // sequence fails Hankel feasibility spot checks.
  explicit MomentDensity(const std::vector<double>& moments);

  double pdf(double x) const;       // clipped + renormalized
  double cdf(double x) const;
  double quantile(double p) const;  // p in [0,1]

  // expansion in the power basis before clipping; moment tests use this
  const std::vector<double>& power_coefficients() const { return power_; }

 private:
  std::vector<double> power_;  // raw density sum_m power_[m] x^m
  std::vector<double> grid_cdf_;
  double norm_ = 1.0;
  double raw_pdf(double x) const;
};

MomentDensity moments_to_density(const std::vector<double>& moments);

}  // namespace gibbsdp
