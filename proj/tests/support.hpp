#pragma once

#include "nilgeo/algebra.hpp"
#include "nilgeo/linalg.hpp"

#include <algorithm>
#include <random>

namespace testing_support {

using namespace nilgeo;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

/// Small random rational in [-range, range] with denominators up to 4.
inline Rational random_rational(int range = 3) {
  std::uniform_int_distribution<int> num(-4 * range, 4 * range);
  std::uniform_int_distribution<int> den(1, 4);
  return Rational(num(rng()), den(rng()));
}

inline VecQ random_vecq(int n, int range = 3) {
  VecQ v(n);
  for (int i = 0; i < n; ++i) v[i] = random_rational(range);
  return v;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

template <class T>
bool all_zero(const Vec<T>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] != T(0)) return false;
  return true;
}

/// Same metric algebra written in the basis given by the columns of p.
inline ExactAlgebra change_basis(const ExactAlgebra& alg, const MatQ& p) {
  const int n = alg.dim();
  MatQ pinv = *nilgeo::inverse(p);
  std::vector<ExactAlgebra::Bracket> b;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VecQ c = pinv * alg.bracket(p.col(i), p.col(j));
      if (!all_zero(c)) b.push_back({i, j, c});
    }
  return ExactAlgebra(n, b, p.transpose() * alg.gram() * p);
}

/// Random invertible integer matrix: unit lower times unit upper triangular,
/// times a random permutation.
inline MatQ random_unimodular(int n) {
  std::uniform_int_distribution<int> d(-2, 2);
  MatQ l = MatQ::Identity(n, n), u = MatQ::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      l(i, j) = d(rng());
      u(j, i) = d(rng());
    }
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng());
  MatQ pm = MatQ::Zero(n, n);
  for (int i = 0; i < n; ++i) pm(perm[i], i) = 1;
  return MatQ(l * u * pm);
}

inline ExactAlgebra degenerate_kernel_example() {
  // E = (e1, e2, e3) with signature (+, +, -), center (z1, z2); with z0 = z1
  // the kernel of J is spanned by the null vector e2 - e3.
  VecQ z1 = unit_vector<Rational>(5, 3), z2 = unit_vector<Rational>(5, 4);
  MatQ g = MatQ::Identity(5, 5);
  g(2, 2) = -1;
  return ExactAlgebra(5, {{0, 1, z1}, {0, 2, z1}, {1, 2, z2}}, g);
}

}  // namespace testing_support
