#pragma once

#include <cstdint>

#include "gibbsdp/prior.hpp"
#include "gibbsdp/rng.hpp"

namespace gibbsdp {

// log V(n, k) for the two-parameter Poisson-Dirichlet prior, computed in the
// cancelled form
//   log V = sum_{i=1}^{k-1} log(theta + i sigma) - [lgamma(theta+n) - lgamma(theta+1)]
// which stays finite as theta -> 0.
double v_pd_ln(long n, long k, double sigma, double theta);

enum class GgMethod {
  alternating_sum,  // finite signed sum over incomplete gammas; n <= 50 only
  quadrature,       // adaptive integration of the tilted density; any n
};

// log V(n, k) for the normalized generalized gamma prior.
double v_gg_ln(long n, long k, double sigma, double tau,
               GgMethod method = GgMethod::quadrature);

struct McEstimate {
  double log_value = 0.0;
  double rel_stderr = 0.0;  // sample relative standard error of the mean
};

// Monte Carlo estimate of log V(n, k) for an arbitrary Gibbs-type prior given
// by its tilting function h (see PriorSpec::generic):
//   V(n, k) = sigma^(k-1) Gamma(k) / Gamma(n) * E[ h(S / B) ],
// S polynomially tilted stable, B ~ Beta(sigma k, n - sigma k).
// Work is split into 64 chunks seeded as (rng.seed(), rng.stream_id()*64 + j),
// reduced in chunk order, so the result is independent of thread scheduling.
// rel_stderr is the relative standard error of the raw-scale mean, which is
// also the absolute standard error of log_value.
McEstimate v_mc_ln(long n, long k, const PriorSpec& prior, std::uint64_t draws,
                   const RngStream& rng);

struct WeightRatioPair {
  double g0 = 0.0;  // V(n+1, k+1) / V(n, k)
  double g1 = 0.0;  // V(n+1, k)   / V(n, k)
};

// Both one-step predictive weight ratios, with an internal consistency check
// of the identity g0 + (n - sigma k) g1 = 1 (residual must stay below 1e-8;
// g1 is then recomputed from g0 so the identity holds exactly).
WeightRatioPair weight_ratios(long n, long k, const PriorSpec& prior);

}  // namespace gibbsdp
