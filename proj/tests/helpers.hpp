#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "gibbsdp/sample.hpp"

namespace testutil {

inline std::string data_file(const std::string& name) {
  return std::string(GIBBSDP_DATA_DIR) + "/" + name;
}

// one-sample Kolmogorov-Smirnov distance against a reference CDF
inline double ks_statistic(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double c = cdf(xs[i]);
    d = std::max(d, std::abs(c - double(i) / n));
    d = std::max(d, std::abs(c - double(i + 1) / n));
  }
  return d;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / double(xs.size());
}

// standard error of the sample mean
inline double stderr_mean(const std::vector<double>& xs) {
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (double(xs.size()) - 1.0) / double(xs.size()));
}

inline gibbsdp::SampleSummary make_summary(long n, long k,
                                           std::initializer_list<std::pair<long, long>> m) {
  gibbsdp::SampleSummary s;
  s.n = n;
  s.k = k;
  for (const auto& [l, ml] : m) s.m[l] = ml;
  return s;
}

}  // namespace testutil
