#ifndef GIBBSDP_SAMPLERS_HPP
#define GIBBSDP_SAMPLERS_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "gibbsdp/rng.hpp"

namespace gibbsdp {

// One-sided sigma-stable variate with Laplace transform exp(-t^sigma),
// via the Kanter / Chambers-Mallows-Stuck representation.
double sample_positive_stable(double sigma, RngStream& rng);

struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepts = 0;
  double acceptance_rate() const {
    return proposals == 0 ? 1.0 : double(accepts) / double(proposals);
  }
};

// Exponentially tilted stable: density proportional to exp(-b x) f_sigma(x).
// Sampled as a sum of ceil(b^sigma) independently thinned scaled-stable
// blocks, which keeps the per-block acceptance rate above 1/e for every b.
double sample_exp_tilted_stable(double sigma, double b, RngStream& rng,
                                RejectionStats* stats = nullptr);

// Polynomially tilted stable: density Gamma(c sigma + 1) x^(-c sigma)
// f_sigma(x) / Gamma(c + 1), c > -1.
double sample_poly_tilted_stable(double sigma, double c, RngStream& rng);

// Log-concave target on (lower, upper); log_density may be unnormalized.
struct LogConcaveTarget {
  std::function<double(double)> log_density;
  std::function<double(double)> derivative;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  double init = std::numeric_limits<double>::quiet_NaN();  // interior starting abscissa
};

// Adaptive rejection sampler (tangent upper hulls, refined on rejection,
// at most 64 support points).
class AdaptiveRejectionSampler {
 public:
  explicit AdaptiveRejectionSampler(LogConcaveTarget target);
  double draw(RngStream& rng);

 private:
  struct Point {
    double x, h, dh;
  };
  void insert(double x, double h, double dh);
  void rebuild();
  LogConcaveTarget target_;
  std::vector<Point> points_;
  std::vector<double> knots_;      // segment boundaries, size points_+1
  std::vector<double> log_mass_;   // per-segment hull mass, log scale
};

double sample_log_concave(const LogConcaveTarget& target, RngStream& rng);

// Latent scale variable of the PD(sigma, theta) posterior:
// density proportional to x^(theta + sigma k - 1) exp(-x^sigma).
double sample_Zp(double sigma, double theta, long k, RngStream& rng);

// Latent scale variable of the GG(sigma, tau) posterior: density
// proportional to x^(sigma k - n) (x - tau)^(n-1) exp(-x^sigma) on (tau, inf).
// Sampling runs on the log-concave transform Y = Z^sigma.
class ZgSampler {
 public:
  ZgSampler(double sigma, double tau, long n, long k);
  double draw(RngStream& rng);

 private:
  static LogConcaveTarget make_target(double sigma, double tau, long n, long k);
  double sigma_;
  AdaptiveRejectionSampler ars_;
};

double sample_Zg(double sigma, double tau, long n, long k, RngStream& rng);

// W_{a,b} = b R_{sigma,b} / (b R_{sigma,b} + G_a) with R the exponentially
// tilted stable and G_a an independent Gamma(a, 1).
double sample_W(double a, double b, double sigma, RngStream& rng);

}  // namespace gibbsdp

#endif
