#pragma once

#include <optional>

#include "gibbsdp/prior.hpp"
#include "gibbsdp/sample.hpp"

namespace gibbsdp {

enum class Method {
  bnp,            // exact Bayesian nonparametric predictive
  good_turing,
  smoothed_good_turing,
  first_order,
  second_order,
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;
};

struct DiscoveryEstimate {
  long l = 0;
  double value = 0.0;
  Method method = Method::bnp;
  std::optional<Interval> interval;
};

// Borel event in the posterior-moment machinery, reduced to the two masses
// that matter: nu0_mass = nu0(A), mu_mass = sum over observed species in A of
// (count - sigma).
struct EventSpec {
  double nu0_mass = 0.0;
  double mu_mass = 0.0;
};

// Probability that observation n+1 is a species seen l times so far (l = 0:
// a brand-new species).  PD and GG priors only.
DiscoveryEstimate bnp_discovery(const SampleSummary& s, const PriorSpec& prior, long l);

// (l+1) m_{l+1} / n.
DiscoveryEstimate good_turing(const SampleSummary& s, long l);

// Good-Turing with frequency counts replaced by the smoothed values
// m'_l = sigma (1-sigma)_{l-1} k / l!, giving sigma (1-sigma)_l k / (l! n).
DiscoveryEstimate smoothed_good_turing(const SampleSummary& s, double sigma, long l);

// r-th posterior moment of the discovery mass at frequency l.  l = 0 goes
// through a signed alternating sum and throws numeric_error when cancellation
// eats more than 6 digits; l >= 1 is a single weight ratio.  The PD prior
// short-circuits to Beta moments.
double posterior_moment(const SampleSummary& s, const PriorSpec& prior, long l, long r);

// Same quantities computed for an arbitrary event; reduces to
// posterior_moment for A = (1, 0) and A = (0, (l-sigma) m_l).
double general_moment(const SampleSummary& s, const PriorSpec& prior, const EventSpec& A,
                      long r);

// Large-n approximations: sigma k / n resp. (l - sigma) m_l / n, and the
// second-order refinements sigma k / n + theta / n (PD) resp.
// sigma k / n + tau k^(-1/sigma) (GG), with the matching l >= 1 corrections.
DiscoveryEstimate first_order(const SampleSummary& s, double sigma, long l);
DiscoveryEstimate second_order(const SampleSummary& s, const PriorSpec& prior, long l);

}  // namespace gibbsdp
