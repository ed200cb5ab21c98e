#pragma once

// Small dense linear algebra that must be exact over the rationals:
// reduced row echelon form, kernels, particular solutions, and integer
// lattice bases (Hermite normal form) for rational generating sets.

#include "nilgeo/scalar.hpp"

#include <Eigen/SVD>

#include <optional>
#include <vector>

namespace nilgeo {

template <class T>
struct Echelon {
  Mat<T> reduced;
  std::vector<int> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan elimination. Exact for Rational; for double a pivot counts as
/// nonzero above `tol`.
template <class T>
Echelon<T> rref(Mat<T> a, double tol = 0.0) {
  const int rows = static_cast<int>(a.rows());
  const int cols = static_cast<int>(a.cols());
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = -1;
    if constexpr (std::is_floating_point_v<T>) {
      T best_abs = static_cast<T>(tol);
      for (int i = r; i < rows; ++i) {
        if (std::abs(a(i, c)) > best_abs) {
          best_abs = std::abs(a(i, c));
          best = i;
        }
      }
    } else {
      for (int i = r; i < rows; ++i) {
        if (a(i, c) != T(0)) {
          best = i;
          break;
        }
      }
    }
    if (best < 0) continue;
    if (best != r) a.row(best).swap(a.row(r));
    T inv = T(1) / a(r, c);
    a.row(r) *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == T(0)) continue;
      T f = a(i, c);
      a.row(i) -= f * a.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(a), std::move(pivots)};
}

template <class T>
int rank(const Mat<T>& a, double tol = 0.0) {
  return static_cast<int>(rref(a, tol).pivots.size());
}

/// Basis of the null space as matrix columns. Free variables are set to unit
/// values in increasing index order, so the result is deterministic.
template <class T>
Mat<T> kernel(const Mat<T>& a, double tol = 0.0) {
  const int cols = static_cast<int>(a.cols());
  auto e = rref(a, tol);
  std::vector<bool> is_pivot(cols, false);
  for (int p : e.pivots) is_pivot[p] = true;
  std::vector<int> free;
  for (int c = 0; c < cols; ++c)
    if (!is_pivot[c]) free.push_back(c);
  Mat<T> basis = Mat<T>::Zero(cols, static_cast<Eigen::Index>(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], static_cast<Eigen::Index>(k)) = T(1);
    for (std::size_t row = 0; row < e.pivots.size(); ++row)
      basis(e.pivots[row], static_cast<Eigen::Index>(k)) = -e.reduced(static_cast<Eigen::Index>(row), free[k]);
  }
  return basis;
}

/// A particular solution of a x = b (free variables zero), or nullopt when
/// the system is inconsistent.
template <class T>
std::optional<Vec<T>> solve_particular(const Mat<T>& a, const Vec<T>& b, double tol = 0.0) {
  const int cols = static_cast<int>(a.cols());
  Mat<T> aug(a.rows(), cols + 1);
  aug.leftCols(cols) = a;
  aug.col(cols) = b;
  auto e = rref(aug, tol);
  if (!e.pivots.empty() && e.pivots.back() == cols) return std::nullopt;
  Vec<T> x = Vec<T>::Zero(cols);
  for (std::size_t row = 0; row < e.pivots.size(); ++row)
    x[e.pivots[row]] = e.reduced(static_cast<Eigen::Index>(row), cols);
  return x;
}

template <class T>
std::optional<Mat<T>> inverse(const Mat<T>& a) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) return std::nullopt;
  if (n == 0) return Mat<T>(0, 0);
  Mat<T> aug(n, 2 * n);
  aug.leftCols(n) = a;
  aug.rightCols(n) = Mat<T>::Identity(n, n);
  auto e = rref(aug);
  if (static_cast<int>(e.pivots.size()) < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  return Mat<T>(e.reduced.rightCols(n));
}

/// Greedily appends candidate columns (in order) that increase the rank of
/// `start`. Returns the chosen candidate indices.
template <class T>
std::vector<int> greedy_extend(const Mat<T>& start, const Mat<T>& candidates, double tol = 0.0) {
  std::vector<int> chosen;
  Mat<T> current = start;
  int current_rank = current.cols() == 0 ? 0 : rank(current, tol);
  for (int c = 0; c < candidates.cols(); ++c) {
    Mat<T> trial(candidates.rows(), current.cols() + 1);
    if (current.cols() > 0) trial.leftCols(current.cols()) = current;
    trial.col(current.cols()) = candidates.col(c);
    int r = rank(trial, tol);
    if (r > current_rank) {
      current = std::move(trial);
      current_rank = r;
      chosen.push_back(c);
    }
  }
  return chosen;
}

/// Stacks a list of vectors as matrix columns.
template <class T>
Mat<T> as_columns(const std::vector<Vec<T>>& vs, int dim) {
  Mat<T> m(dim, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vs[k];
  return m;
}

template <class T>
std::vector<Vec<T>> columns_of(const Mat<T>& m) {
  std::vector<Vec<T>> out;
  for (Eigen::Index k = 0; k < m.cols(); ++k) out.push_back(m.col(k));
  return out;
}

/// Null-space basis from the SVD; singular values below
/// rel_tol * (largest singular value) count as zero.
template <class T>
Mat<T> kernel_svd(const Mat<T>& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Mat<T>(0, 0);
  if (a.rows() == 0) return Mat<T>::Identity(n, n);
  Eigen::JacobiSVD<Mat<T>> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  T cutoff = static_cast<T>(rel_tol) * (s.size() > 0 ? s[0] : T(0));
  Eigen::Index nonzero = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cutoff && s[i] > T(0)) ++nonzero;
  return svd.matrixV().rightCols(n - nonzero);
}

/// Z-basis (rows in Hermite normal form, returned as columns) of the additive
/// group generated by rational vectors. Deterministic.
MatQ lattice_basis(const std::vector<VecQ>& generators, int dim);

/// Canonical representative of a modulo the lattice with the given
/// lattice_basis() output.
VecQ reduce_modulo(const VecQ& a, const MatQ& hnf_basis);

/// Whether every column of `vectors` is an integer combination of the basis.
bool in_lattice(const VecQ& v, const MatQ& hnf_basis);

Rational floor_rational(const Rational& q);

}  // namespace nilgeo
