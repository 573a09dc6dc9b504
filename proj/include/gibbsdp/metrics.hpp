#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "gibbsdp/sample.hpp"

namespace gibbsdp {

struct MetricsReport {
  double sse = 0.0;
  std::map<long, std::pair<double, double>> per_l;  // l -> (estimate, truth)
  std::optional<double> ratio_r12;
};

// Sum of squared deviations over the union of keys; a missing key counts as 0.
double sse(const std::map<long, double>& estimates, const std::map<long, double>& truths);

// r_{1,2} = sum (first - exact)^2 / sum (second - exact)^2, keys unioned.
// Throws on a zero denominator.
double approx_ratio(const std::map<long, double>& exact,
                    const std::map<long, double>& first,
                    const std::map<long, double>& second);

// Quantile partition of samples by their k (ties broken by index): group g
// holds the sorted positions [g*N/groups, (g+1)*N/groups).  Returns the group
// id of each sample in input order.
std::vector<std::size_t> group_by_k(const std::vector<SampleSummary>& samples,
                                    std::size_t groups);

}  // namespace gibbsdp
