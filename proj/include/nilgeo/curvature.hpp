#pragma once

// Levi-Civita connection and curvature of the left-invariant metric on the
// algebra level, with R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z -
// nabla_[x,y] z.

#include "nilgeo/decomposition.hpp"

#include <optional>
#include <vector>

namespace nilgeo {

/// nabla_x y = 1/2 [x,y] - 1/2 (ad-dagger_x y + ad-dagger_y x).
template <class T>
Vec<T> nabla(const BasicAlgebra<T>& alg, const Vec<T>& x, const Vec<T>& y) {
  return (alg.bracket(x, y) - alg.ad_star(x, y) - alg.ad_star(y, x)) / T(2);
}

template <class T>
Vec<T> riemann(const BasicAlgebra<T>& alg, const Vec<T>& x, const Vec<T>& y, const Vec<T>& z) {
  return nabla(alg, x, nabla(alg, y, z)) - nabla(alg, y, nabla(alg, x, z)) - nabla(alg, alg.bracket(x, y), z);
}

/// <R(x,y)y, x>.
template <class T>
T sec_numerator(const BasicAlgebra<T>& alg, const Vec<T>& x, const Vec<T>& y) {
  return alg.inner(riemann(alg, x, y, y), x);
}

template <class T>
struct CurvatureReport {
  Vec<T> x, y;
  T numerator{};
  T denominator{};
  std::optional<T> sectional;
  bool homaloidal = false;
};

/// In floating point a value counts as zero below tol (relative to the sizes
/// of the inputs); exact types ignore tol.
template <class T>
CurvatureReport<T> sectional(const BasicAlgebra<T>& alg, const Vec<T>& x, const Vec<T>& y, double tol = 1e-12) {
  CurvatureReport<T> r;
  r.x = x;
  r.y = y;
  r.numerator = sec_numerator(alg, x, y);
  T xy = alg.inner(x, y);
  r.denominator = alg.inner(x, x) * alg.inner(y, y) - xy * xy;
  if constexpr (std::is_floating_point_v<T>) {
    T scale = std::max(T(1), x.squaredNorm() * y.squaredNorm());
    r.homaloidal = std::abs(r.numerator) <= static_cast<T>(tol) * scale;
    if (std::abs(r.denominator) > static_cast<T>(tol) * scale) r.sectional = r.numerator / r.denominator;
  } else {
    r.homaloidal = r.numerator == 0;
    if (r.denominator != 0) r.sectional = r.numerator / r.denominator;
  }
  return r;
}

/// R vanishes identically, checked on all basis triples (exact).
bool is_flat(const ExactAlgebra& alg);

/// Sufficient structural condition for flatness: [n,n] inside U and E = 0.
bool structurally_flat(const ExactAlgebra& alg, const WittFrame& frame);

/// Constant sectional curvature on the adapted coordinate planes and their
/// sums, while R is not identically zero. Only flat groups have constant
/// curvature, so this should never fire.
bool constant_curvature_alarm(const ExactAlgebra& alg, const WittFrame& frame);

template <class T>
bool in_summands(const BasicWittFrame<T>& f, const Vec<T>& x, std::initializer_list<Part> parts) {
  Vec<T> c = f.coords(x);
  std::vector<bool> keep(static_cast<std::size_t>(f.dim()), false);
  for (Part p : parts)
    for (int k = 0; k < f.size(p); ++k) keep[static_cast<std::size_t>(f.offset(p) + k)] = true;
  T limit(0);
  if constexpr (std::is_floating_point_v<T>) limit = static_cast<T>(1e-12) * std::max(T(1), c.cwiseAbs().maxCoeff());
  for (int k = 0; k < f.dim(); ++k)
    if (!keep[static_cast<std::size_t>(k)] && abs(c[k]) > limit) return false;
  return true;
}

/// Curvature numerator on the base torus: <R(x,y)y,x> + 3/4 <[x,y],[x,y]>
/// for x, y in V + E.
template <class T>
T tb_numerator(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& x, const Vec<T>& y) {
  if (!in_summands(f, x, {Part::V, Part::E}) || !in_summands(f, y, {Part::V, Part::E}))
    throw Error(ErrorCode::InvalidArgument, "base torus curvature needs x, y in V + E");
  Vec<T> b = alg.bracket(x, y);
  return sec_numerator(alg, x, y) + T(3) * alg.inner(b, b) / T(4);
}

// Closed forms.

/// -3/4 <[e,e'],[e,e']>: the numerator for any e, e' in E. For orthonormal
/// e, e' the sectional curvature is this times ebar ebar'.
template <class T>
T numerator_ee(const BasicAlgebra<T>& alg, const Vec<T>& e, const Vec<T>& e2) {
  Vec<T> b = alg.bracket(e, e2);
  return -T(3) * alg.inner(b, b) / T(4);
}

/// <R(z,v)v,z> = 1/4 <j(iota z)v, j(iota z)v>.
template <class T>
T numerator_zv(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& z, const Vec<T>& v) {
  Vec<T> jv = j_apply(alg, f, involution(f, z), v);
  return alg.inner(jv, jv) / T(4);
}

/// <R(v,e)e,v> = -3/4 <[v,e],[v,e]> + 1/4 <j(iota v)e, j(iota v)e>.
template <class T>
T numerator_ve(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& v, const Vec<T>& e) {
  Vec<T> b = alg.bracket(v, e);
  Vec<T> je = j_apply(alg, f, involution(f, v), e);
  return -T(3) * alg.inner(b, b) / T(4) + alg.inner(je, je) / T(4);
}

/// <R(v,v')v',v> in terms of brackets and j.
template <class T>
T numerator_vv(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& v, const Vec<T>& w) {
  Vec<T> b = alg.bracket(v, w);
  Vec<T> iv = involution(f, v), iw = involution(f, w);
  Vec<T> jv_w = j_apply(alg, f, iv, w);
  Vec<T> jw_v = j_apply(alg, f, iw, v);
  Vec<T> jv_v = j_apply(alg, f, iv, v);
  Vec<T> jw_w = j_apply(alg, f, iw, w);
  return -T(3) * alg.inner(b, b) / T(4) + alg.inner(jv_w, jw_v) / T(2) +
         (alg.inner(jw_v, jw_v) + alg.inner(jv_w, jv_w)) / T(4) - alg.inner(jv_v, jw_w);
}

/// Base torus closed forms: the same expressions without the bracket term.
template <class T>
T tb_closed_ve(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& v, const Vec<T>& e) {
  Vec<T> je = j_apply(alg, f, involution(f, v), e);
  return alg.inner(je, je) / T(4);
}

template <class T>
T tb_closed_vv(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& v, const Vec<T>& w) {
  Vec<T> b = alg.bracket(v, w);
  return numerator_vv(alg, f, v, w) + T(3) * alg.inner(b, b) / T(4);
}

/// One row of a basis-pair curvature table.
struct CurvatureRow {
  int i = 0, j = 0;
  Rational numerator;
  Rational denominator;
  std::optional<Rational> sectional;
  bool homaloidal = false;
};

/// Numerators and sectional curvatures for all pairs of adapted basis
/// vectors (adapted = true) or ambient basis vectors.
std::vector<CurvatureRow> curvature_table(const ExactAlgebra& alg, const WittFrame& frame, bool adapted);

}  // namespace nilgeo
