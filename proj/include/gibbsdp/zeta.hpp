#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "gibbsdp/rng.hpp"

namespace gibbsdp {

// A plain sequence of species labels, one per observation.
struct RawSample {
  std::vector<std::string> labels;
};

// Zeta (discrete power-law) species population: P[Z = z] = z^-s / zeta(s).
// Draws use CDF inversion: a dense prefix table handles the bulk of the mass,
// and beyond it the tail CDF is continued analytically with the midpoint
// integral approximation of sum_{i>z} i^-s, which is accurate to ~1e-12
// relative at the crossover and improves further out.  For s close to 1 the
// tail is heavy enough that draws beyond 2^53 occur; such labels are recorded
// as shortest-round-trip decimal doubles, since neighboring integers are no
// longer representable.
class ZetaPopulation {
 public:
  explicit ZetaPopulation(double s);

  double s() const { return s_; }
  double normalizer() const { return c_; }        // zeta(s)
  double mass(double z) const;                    // z^-s / zeta(s)

  // species index for a uniform u in (0,1); exact inversion within the
  // prefix, analytic continuation beyond it
  double draw_value(double u) const;
  static std::string label_for(double z);

 private:
  double tail_cdf_complement(double z) const;     // sum_{i>z} i^-s, midpoint form
  double s_ = 2.0;
  double c_ = 0.0;
  double tail_const_ = 0.0;                       // complement at the prefix end
  std::vector<double> prefix_cdf_;
};

RawSample sample_zeta(const ZetaPopulation& pop, std::size_t n, RngStream& rng);

// Exact discovery probabilities of the generating population given the
// realized sample: for l >= 1 the total mass of species observed exactly l
// times; for l = 0 one minus the mass of everything observed.
double true_discovery(const RawSample& raw, const ZetaPopulation& pop, long l);

// All of the above in one pass: keys are the distinct observed frequencies
// plus 0.  Values sum to 1 up to the normalizer tolerance.
std::map<long, double> true_discovery_all(const RawSample& raw, const ZetaPopulation& pop);

}  // namespace gibbsdp
