#pragma once

// Witt-adapted splitting n = U + Z + V + E of a metric 2-step algebra, the
// involution iota, and the operators j, script-J, S and J.

#include "nilgeo/algebra.hpp"
#include "nilgeo/linalg.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace nilgeo {

using std::abs;

enum class Part { U, Z, V, E };

/// Adapted basis stored as the columns of `basis`, ordered U | Z | V | E.
/// Z and E vectors are mutually orthogonal with <z,z> = z_norms, <e,e> =
/// e_norms. A normalized frame has all norms equal to +-1; an exact frame
/// keeps a vector unnormalized when its norm is not a rational square.
template <class T>
struct BasicWittFrame {
  int du = 0, dz = 0, dv = 0, de = 0;
  Mat<T> basis;
  Mat<T> inverse;  // ambient coordinates -> adapted coordinates
  Vec<T> z_norms;
  Vec<T> e_norms;

  int dim() const { return du + dz + dv + de; }
  int offset(Part p) const {
    switch (p) {
      case Part::U: return 0;
      case Part::Z: return du;
      case Part::V: return du + dz;
      case Part::E: return du + dz + dv;
    }
    return 0;
  }
  int size(Part p) const {
    switch (p) {
      case Part::U: return du;
      case Part::Z: return dz;
      case Part::V: return dv;
      case Part::E: return de;
    }
    return 0;
  }
  Mat<T> vectors(Part p) const { return basis.middleCols(offset(p), size(p)); }
  std::vector<int> z_signs() const { return signs(z_norms); }
  std::vector<int> e_signs() const { return signs(e_norms); }

  Vec<T> coords(const Vec<T>& x) const { return inverse * x; }
  Vec<T> ambient(const Vec<T>& c) const { return basis * c; }

  /// Component of x in one summand, as an ambient vector.
  Vec<T> project(const Vec<T>& x, Part p) const {
    Vec<T> c = coords(x);
    return vectors(p) * c.segment(offset(p), size(p));
  }

  /// Gram matrix in adapted coordinates.
  Mat<T> adapted_gram() const {
    const int n = dim();
    Mat<T> g = Mat<T>::Zero(n, n);
    for (int i = 0; i < du; ++i) g(i, du + dz + i) = g(du + dz + i, i) = T(1);
    for (int a = 0; a < dz; ++a) g(du + a, du + a) = z_norms[a];
    for (int a = 0; a < de; ++a) g(du + dz + dv + a, du + dz + dv + a) = e_norms[a];
    return g;
  }

 private:
  static std::vector<int> signs(const Vec<T>& norms) {
    std::vector<int> out;
    for (Eigen::Index k = 0; k < norms.size(); ++k) out.push_back(sign_of(norms[k]));
    return out;
  }
};

using WittFrame = BasicWittFrame<Rational>;
using RealFrame = BasicWittFrame<Real>;

/// Deterministic exact decomposition. Throws DegenerateForm if a form that
/// must be nondegenerate turns out degenerate (an arithmetic bug), and
/// SingularGram if the inner product itself is degenerate.
WittFrame witt_decompose(const ExactAlgebra& alg);

/// Checks every frame invariant exactly; returns the list of violations.
std::vector<std::string> check_frame(const ExactAlgebra& alg, const WittFrame& frame);

/// Rescales Z and E vectors to unit norm (+-1) in precision R.
template <class R>
BasicWittFrame<R> normalized(const WittFrame& f) {
  BasicWittFrame<R> out;
  out.du = f.du;
  out.dz = f.dz;
  out.dv = f.dv;
  out.de = f.de;
  out.basis = to_real<R>(f.basis);
  out.z_norms = Vec<R>(f.dz);
  out.e_norms = Vec<R>(f.de);
  auto rescale = [&](int col, const Rational& norm) {
    R s = std::sqrt(std::abs(to_real<R>(norm)));
    out.basis.col(col) /= s;
    return static_cast<R>(sign_of(norm));
  };
  for (int a = 0; a < f.dz; ++a) out.z_norms[a] = rescale(f.offset(Part::Z) + a, f.z_norms[a]);
  for (int a = 0; a < f.de; ++a) out.e_norms[a] = rescale(f.offset(Part::E) + a, f.e_norms[a]);
  out.inverse = out.basis.inverse();
  return out;
}

/// The algebra rewritten in the adapted basis of the frame (labels u1.., z1..,
/// v1.., e1..).
template <class T>
BasicAlgebra<T> adapted_algebra(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f) {
  const int n = alg.dim();
  std::vector<typename BasicAlgebra<T>::Bracket> brackets;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Vec<T> b = f.coords(alg.bracket(f.basis.col(i), f.basis.col(j)));
      bool zero = true;
      for (int k = 0; k < n; ++k)
        if (b[k] != T(0)) zero = false;
      if (!zero) brackets.push_back({i, j, b});
    }
  std::vector<std::string> labels;
  auto add = [&](const char* p, int count) {
    for (int k = 0; k < count; ++k) labels.push_back(p + std::to_string(k + 1));
  };
  add("u", f.du);
  add("z", f.dz);
  add("v", f.dv);
  add("e", f.de);
  return BasicAlgebra<T>(n, std::move(brackets), f.adapted_gram(), std::move(labels));
}

/// iota: u_i <-> v_i, z -> sign(z) z, e -> sign(e) e.
template <class T>
Vec<T> involution(const BasicWittFrame<T>& f, const Vec<T>& x) {
  Vec<T> c = f.coords(x);
  Vec<T> out = c;
  const int ou = f.offset(Part::U), ov = f.offset(Part::V);
  for (int i = 0; i < f.du; ++i) {
    out[ou + i] = c[ov + i];
    out[ov + i] = c[ou + i];
  }
  for (int a = 0; a < f.dz; ++a) out[f.offset(Part::Z) + a] *= T(sign_of(f.z_norms[a]));
  for (int a = 0; a < f.de; ++a) out[f.offset(Part::E) + a] *= T(sign_of(f.e_norms[a]));
  return f.ambient(out);
}

/// j(a) x = iota ad-dagger_x (iota a), for a in U + Z.
template <class T>
Vec<T> j_apply(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& a,
               const Vec<T>& x) {
  Vec<T> c = f.coords(a);
  T limit(0);
  if constexpr (std::is_floating_point_v<T>)
    limit = static_cast<T>(1e-12) * std::max(T(1), c.cwiseAbs().maxCoeff());
  for (int k = f.offset(Part::V); k < f.dim(); ++k)
    if (abs(c[k]) > limit) throw Error(ErrorCode::NonCentralArgument, "j(a) needs a in U + Z");
  return involution(f, alg.ad_star(x, involution(f, a)));
}

/// Matrix of j(a) restricted to V + E, in adapted V + E coordinates.
template <class T>
Mat<T> j_op(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& a) {
  const int ov = f.offset(Part::V);
  const int m = f.dv + f.de;
  Mat<T> out(m, m);
  for (int k = 0; k < m; ++k) {
    Vec<T> col = f.coords(j_apply(alg, f, a, Vec<T>(f.basis.col(ov + k))));
    out.col(k) = col.segment(ov, m);
  }
  return out;
}

/// Operators attached to fixed z0 in Z and v0 in V. All matrices act on
/// adapted coordinates: script-J and S on V + E coordinates, J and the split
/// data on E coordinates.
template <class T>
struct BasicJData {
  Vec<T> z0, v0;    // ambient
  Mat<T> script_j;  // de x (dv + de)
  Mat<T> s;         // du x (dv + de)
  Mat<T> j;         // de x de
  Mat<T> e1_basis;  // de x k, kernel of J
  Mat<T> e2_basis;  // de x (de - k)
  bool orthogonal_split = true;
  Mat<T> p1;        // projector onto E1 along E2
  Mat<T> j_inv2;    // inverse of J on E2, extended by zero on E1
};

using JData = BasicJData<Rational>;
using RealJData = BasicJData<Real>;

inline constexpr double kDefaultTauRank = 1e-10;

/// Builds the operators. In exact arithmetic the kernel of J is exact; in
/// floating point it comes from an SVD cut at tau_rank relative. Throws
/// NonOrthogonalKernelSplit when ker J is degenerate unless allowed, in which
/// case p1 and j_inv2 are left empty.
template <class T>
BasicJData<T> build_jdata(const BasicAlgebra<T>& alg, const BasicWittFrame<T>& f, const Vec<T>& z0,
                          const Vec<T>& v0, double tau_rank = kDefaultTauRank,
                          bool allow_nonorthogonal = false) {
  alg.check_dim(z0);
  alg.check_dim(v0);
  auto outside = [&](const Vec<T>& x, Part keep) {
    Vec<T> c = f.coords(x);
    Vec<T> rest = c;
    rest.segment(f.offset(keep), f.size(keep)).setZero();
    if constexpr (std::is_floating_point_v<T>) {
      T scale = std::max(T(1), c.cwiseAbs().maxCoeff());
      return rest.size() > 0 && rest.cwiseAbs().maxCoeff() > static_cast<T>(1e-12) * scale;
    } else {
      for (Eigen::Index k = 0; k < rest.size(); ++k)
        if (rest[k] != 0) return true;
      return false;
    }
  };
  if (outside(z0, Part::Z)) throw Error(ErrorCode::InvalidArgument, "z0 must lie in Z");
  if (outside(v0, Part::V)) throw Error(ErrorCode::InvalidArgument, "v0 must lie in V");

  BasicJData<T> d;
  d.z0 = z0;
  d.v0 = v0;
  const int ov = f.offset(Part::V), oe = f.offset(Part::E);
  const int m = f.dv + f.de;
  d.script_j = Mat<T>(f.de, m);
  d.s = Mat<T>(f.du, m);
  Vec<T> a = z0 + v0;
  for (int k = 0; k < m; ++k) {
    Vec<T> c = f.coords(alg.ad_star(Vec<T>(f.basis.col(ov + k)), a));
    d.script_j.col(k) = c.segment(oe, f.de);
    d.s.col(k) = c.segment(0, f.du);
  }
  d.j = d.script_j.rightCols(f.de);

  Mat<T> gram_e = Mat<T>::Zero(f.de, f.de);
  for (int k = 0; k < f.de; ++k) gram_e(k, k) = f.e_norms[k];
  if constexpr (std::is_floating_point_v<T>) d.e1_basis = kernel_svd(d.j, tau_rank);
  else d.e1_basis = kernel(d.j);
  const Eigen::Index k1 = d.e1_basis.cols();

  Mat<T> restricted = d.e1_basis.transpose() * gram_e * d.e1_basis;
  bool nondegenerate = true;
  Mat<T> restricted_inv;
  if (k1 > 0) {
    if constexpr (std::is_floating_point_v<T>) {
      Eigen::FullPivLU<Mat<T>> lu(restricted);
      nondegenerate = lu.isInvertible();
      if (nondegenerate) restricted_inv = lu.inverse();
    } else {
      auto inv = inverse(restricted);
      nondegenerate = inv.has_value();
      if (inv) restricted_inv = *inv;
    }
  }
  d.orthogonal_split = nondegenerate;
  if (nondegenerate) {
    // E2 = orthogonal complement of E1 inside E.
    Mat<T> rows = d.e1_basis.transpose() * gram_e;
    if (k1 == 0) d.e2_basis = Mat<T>::Identity(f.de, f.de);
    else if constexpr (std::is_floating_point_v<T>) d.e2_basis = kernel_svd(rows, 1e-14);
    else d.e2_basis = kernel(rows);
    if (k1 == 0) d.p1 = Mat<T>::Zero(f.de, f.de);
    else d.p1 = d.e1_basis * restricted_inv * d.e1_basis.transpose() * gram_e;
    Mat<T> p2 = Mat<T>::Identity(f.de, f.de) - d.p1;
    Mat<T> shifted = d.j + d.p1;
    if constexpr (std::is_floating_point_v<T>) {
      Eigen::FullPivLU<Mat<T>> lu(shifted);
      if (f.de > 0 && !lu.isInvertible()) throw Error(ErrorCode::SingularJOnE2, "J is singular on E2");
      d.j_inv2 = f.de > 0 ? Mat<T>(lu.inverse() * p2) : Mat<T>(0, 0);
    } else {
      auto inv = inverse(shifted);
      if (f.de > 0 && !inv) throw Error(ErrorCode::SingularJOnE2, "J is singular on E2");
      d.j_inv2 = f.de > 0 ? Mat<T>(*inv * p2) : Mat<T>(0, 0);
    }
  } else {
    // Any complement, for reporting only.
    Mat<T> id = Mat<T>::Identity(f.de, f.de);
    std::vector<int> chosen;
    if constexpr (std::is_floating_point_v<T>) chosen = greedy_extend<T>(d.e1_basis, id, 1e-12);
    else chosen = greedy_extend<T>(d.e1_basis, id);
    d.e2_basis = Mat<T>(f.de, static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t c = 0; c < chosen.size(); ++c) d.e2_basis.col(static_cast<Eigen::Index>(c)) = id.col(chosen[c]);
    if (!allow_nonorthogonal)
      throw Error(ErrorCode::NonOrthogonalKernelSplit, "ker J is degenerate, so E1 + E2 is not orthogonal");
  }
  return d;
}

}  // namespace nilgeo
