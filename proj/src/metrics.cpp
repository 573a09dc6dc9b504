#include "gibbsdp/metrics.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gibbsdp {

namespace {

double at_or_zero(const std::map<long, double>& m, long key) {
  const auto it = m.find(key);
  return it == m.end() ? 0.0 : it->second;
}

std::set<long> key_union(std::initializer_list<const std::map<long, double>*> maps) {
  std::set<long> keys;
  for (const auto* m : maps)
    for (const auto& [k, v] : *m) keys.insert(k);
  return keys;
}

}  // namespace

double sse(const std::map<long, double>& estimates, const std::map<long, double>& truths) {
  double acc = 0.0;
  for (long key : key_union({&estimates, &truths})) {
    const double d = at_or_zero(estimates, key) - at_or_zero(truths, key);
    acc += d * d;
  }
  return acc;
}

double approx_ratio(const std::map<long, double>& exact,
                    const std::map<long, double>& first,
                    const std::map<long, double>& second) {
  double num = 0.0, den = 0.0;
  for (long key : key_union({&exact, &first, &second})) {
    const double e = at_or_zero(exact, key);
    const double d1 = at_or_zero(first, key) - e;
    const double d2 = at_or_zero(second, key) - e;
    num += d1 * d1;
    den += d2 * d2;
  }
  if (den == 0.0)
    throw std::domain_error("approx_ratio: second-order errors are identically zero");
  return num / den;
}

std::vector<std::size_t> group_by_k(const std::vector<SampleSummary>& samples,
                                    std::size_t groups) {
  if (groups < 1) throw std::domain_error("group_by_k: requires groups >= 1");
  const std::size_t n = samples.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (samples[a].k != samples[b].k) return samples[a].k < samples[b].k;
    return a < b;
  });
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t lo = g * n / groups, hi = (g + 1) * n / groups;
    for (std::size_t pos = lo; pos < hi; ++pos) assignment[order[pos]] = g;
  }
  return assignment;
}

}  // namespace gibbsdp
