#ifndef GIBBSDP_QUADRATURE_HPP
#define GIBBSDP_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "gibbsdp/errors.hpp"

namespace gibbsdp {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 15(7) nodes and weights on [-1, 1].
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = h * kGk15Nodes[i];
    const double fv = (i == 7) ? f(c) : f(c - dx) + f(c + dx);
    kron += kGk15Weights[i] * fv;
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * fv;
  }
  return {a, b, kron * h, std::fabs((kron - gauss) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration of f over [a, b].
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double rel_tol = 1e-11,
                                    double abs_tol = 0.0, int max_segments = 4000) {
  std::priority_queue<detail::Segment> segs;
  detail::Segment s0 = detail::gk15(f, a, b);
  double total = s0.value, err = s0.error;
  segs.push(s0);
  long evals = 15;
  int n = 1;
  while (err > std::max(abs_tol, rel_tol * std::fabs(total)) && n < max_segments) {
    detail::Segment worst = segs.top();
    segs.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    detail::Segment l = detail::gk15(f, worst.a, mid);
    detail::Segment r = detail::gk15(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    segs.push(l);
    segs.push(r);
    evals += 30;
    ++n;
  }
  if (err > std::max(abs_tol, rel_tol * std::fabs(total)) * 100.0)
    throw numeric_error("integrate_adaptive: tolerance not reached");
  return {total, err, evals};
}

}  // namespace gibbsdp

#endif
