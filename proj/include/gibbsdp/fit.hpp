#pragma once

#include "gibbsdp/prior.hpp"
#include "gibbsdp/sample.hpp"

namespace gibbsdp {

struct FitResult {
  PriorSpec prior;             // fitted parameters
  double log_likelihood = 0.0;
  bool converged = false;      // best start met the simplex-diameter criterion
  long evaluations = 0;        // objective evaluations, summed over all starts
  double multi_start_spread = 0.0;  // max param distance among the top-3 starts
};

// Marginal log likelihood of the frequency counts:
// log V(n,k) + sum_l m_l [lgamma(l - sigma) - lgamma(1 - sigma)].
double log_likelihood_pd(const SampleSummary& s, double sigma, double theta);
double log_likelihood_gg(const SampleSummary& s, double sigma, double tau);

// Empirical-Bayes maximization by Nelder-Mead in transformed coordinates
// (logit-scaled sigma; log(theta + sigma) resp. log tau), multi-started from
// a 4x4 grid.  kind must be pd or gg.
FitResult fit(const SampleSummary& s, PriorKind kind);

}  // namespace gibbsdp
