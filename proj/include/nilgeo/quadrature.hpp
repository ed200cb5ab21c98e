#pragma once

// Globally adaptive Gauss-Kronrod (7/15) for vector-valued integrands.

#include "nilgeo/scalar.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <limits>
#include <queue>

namespace nilgeo {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_segments = 2000;
};

namespace detail {

struct GkSegment {
  Real a, b;
  Vec<Real> value;
  Real error;
  bool operator<(const GkSegment& o) const { return error < o.error; }
};

template <class F>
GkSegment gk15_segment(const F& f, Real a, Real b) {
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::gauss;
  const auto& kx = gauss_kronrod<Real, 15>::abscissa();
  const auto& kw = gauss_kronrod<Real, 15>::weights();
  const auto& gw = gauss<Real, 7>::weights();
  const Real mid = (a + b) / 2, half = (b - a) / 2;
  Vec<Real> f0 = f(mid);
  Vec<Real> k15 = kw[0] * f0;
  Vec<Real> g7 = gw[0] * f0;
  for (std::size_t k = 1; k < kx.size(); ++k) {
    Vec<Real> s = f(mid - half * kx[k]) + f(mid + half * kx[k]);
    k15 += kw[k] * s;
    // The Gauss nodes are the even-indexed Kronrod nodes.
    if (k % 2 == 0) g7 += gw[k / 2] * s;
  }
  k15 *= half;
  g7 *= half;
  Real err = k15.size() ? (k15 - g7).cwiseAbs().maxCoeff() : Real(0);
  return {a, b, k15, err};
}

}  // namespace detail

/// Integral of a vector-valued f over [a, b]. The error estimate of a
/// segment is the max component of |K15 - G7|; the worst segment is split
/// until the summed estimate is below max(abs_tol, noise * (b - a)) or the
/// segment budget runs out. noise bounds the rounding error of one
/// integrand evaluation.
template <class F>
Vec<Real> integrate(const F& f, Real a, Real b, const QuadratureOptions& opt = {}, Real noise = 0) {
  if (a == b) return Vec<Real>::Zero(f(a).size());
  const Real target = std::max(static_cast<Real>(opt.abs_tol), noise * std::abs(b - a));
  std::priority_queue<detail::GkSegment> heap;
  heap.push(detail::gk15_segment(f, a, b));
  Real total_err = heap.top().error;
  int segments = 1;
  while (total_err > target && segments < opt.max_segments) {
    detail::GkSegment worst = heap.top();
    heap.pop();
    Real m = (worst.a + worst.b) / 2;
    detail::GkSegment left = detail::gk15_segment(f, worst.a, m);
    detail::GkSegment right = detail::gk15_segment(f, m, worst.b);
    total_err += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++segments;
  }
  Vec<Real> sum = Vec<Real>::Zero(heap.top().value.size());
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

}  // namespace nilgeo
