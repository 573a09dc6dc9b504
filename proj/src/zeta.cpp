#include "gibbsdp/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace gibbsdp {

namespace {

constexpr std::size_t kPrefixSize = std::size_t(1) << 20;
constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

}  // namespace

ZetaPopulation::ZetaPopulation(double s) : s_(s) {
  if (!(s > 1.0)) throw std::domain_error("ZetaPopulation: requires s > 1");
  // zeta(s) = sum_{i<=N} i^-s + sum_{i>N} i^-s, the tail in midpoint form
  // (N+1/2)^(1-s)/(s-1); summed small-to-large to limit roundoff.
  double prefix_sum = 0.0;
  for (std::size_t i = kPrefixSize; i >= 1; --i) prefix_sum += std::pow(double(i), -s);
  tail_const_ = std::pow(kPrefixSize + 0.5, 1.0 - s) / (s - 1.0);
  c_ = prefix_sum + tail_const_;

  prefix_cdf_.resize(kPrefixSize);
  double acc = 0.0;
  for (std::size_t i = 0; i < kPrefixSize; ++i) {
    acc += std::pow(double(i + 1), -s);
    prefix_cdf_[i] = acc / c_;
  }
}

double ZetaPopulation::mass(double z) const { return std::pow(z, -s_) / c_; }

double ZetaPopulation::tail_cdf_complement(double z) const {
  return std::pow(z + 0.5, 1.0 - s_) / (s_ - 1.0);
}

double ZetaPopulation::draw_value(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("ZetaPopulation: u outside (0,1)");
  if (u <= prefix_cdf_.back()) {
    const auto it = std::lower_bound(prefix_cdf_.begin(), prefix_cdf_.end(), u);
    return double(it - prefix_cdf_.begin()) + 1.0;
  }
  // Solve sum_{i>z} i^-s = t for the remaining mass t, then take the smallest
  // integer z whose complement drops to t or below.
  const double t = tail_const_ - c_ * (u - prefix_cdf_.back());
  if (!(t > 0.0)) return kMaxExactInteger;  // u at the extreme edge of (0,1)
  double z = std::pow(t * (s_ - 1.0), 1.0 / (1.0 - s_)) - 0.5;
  double zi = std::ceil(z);
  if (zi < double(kPrefixSize) + 1.0) zi = double(kPrefixSize) + 1.0;
  if (zi < kMaxExactInteger) {
    // +-1 correction; beyond 2^53 adjacent integers are not representable,
    // so the analytic value stands as is.
    for (int i = 0; i < 4 && zi - 1.0 > double(kPrefixSize) &&
                    tail_cdf_complement(zi - 1.0) <= t;
         ++i)
      zi -= 1.0;
    for (int i = 0; i < 4 && zi < kMaxExactInteger && tail_cdf_complement(zi) > t; ++i)
      zi += 1.0;
  }
  return zi;
}

std::string ZetaPopulation::label_for(double z) {
  if (z < kMaxExactInteger) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", z);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", z);
  return buf;
}

RawSample sample_zeta(const ZetaPopulation& pop, std::size_t n, RngStream& rng) {
  if (n < 1) throw std::domain_error("sample_zeta: requires n >= 1");
  RawSample raw;
  raw.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    raw.labels.push_back(ZetaPopulation::label_for(pop.draw_value(rng.uniform())));
  return raw;
}

std::map<long, double> true_discovery_all(const RawSample& raw, const ZetaPopulation& pop) {
  if (raw.labels.empty()) throw std::domain_error("true_discovery: empty sample");
  std::unordered_map<std::string, long> counts;
  for (const auto& lab : raw.labels) ++counts[lab];
  std::map<long, double> d;
  double observed_mass = 0.0;
  for (const auto& [lab, cnt] : counts) {
    const double z = std::stod(lab);
    const double q = pop.mass(z);
    observed_mass += q;
    d[cnt] += q;
  }
  d[0] = std::max(0.0, 1.0 - observed_mass);
  return d;
}

double true_discovery(const RawSample& raw, const ZetaPopulation& pop, long l) {
  if (l < 0) throw std::domain_error("true_discovery: requires l >= 0");
  const auto all = true_discovery_all(raw, pop);
  const auto it = all.find(l);
  return it == all.end() ? 0.0 : it->second;
}

}  // namespace gibbsdp
