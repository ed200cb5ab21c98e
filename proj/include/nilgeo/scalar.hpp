#pragma once

// Scalar types shared by the exact (rational) and floating-point code paths.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nilgeo {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Extended precision used by the geodesic solvers.
using Real = long double;

using VecQ = Vec<Rational>;
using MatQ = Mat<Rational>;
using VecD = Vec<double>;
using MatD = Mat<double>;

/// Arithmetic mode an algebra was supplied in.
enum class Mode { Exact, Float };

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }
inline double to_double(long double x) { return static_cast<double>(x); }

template <class R>
R to_real(const Rational& q) {
  if constexpr (std::is_same_v<R, Rational>) return q;
  else return q.convert_to<R>();
}

/// Exact rational value of a finite double (every double is a dyadic rational).
Rational exact_from_double(double x);

/// Parses "p/q", "-3", "2.5" or "1e-3" into an exact rational.
/// Decimal notation is read exactly in base ten, not through a double.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// Best rational approximation with denominator <= max_den, accepted only if
/// it reproduces x to within tol (relative to max(1,|x|)).
std::optional<Rational> rationalize(double x, std::int64_t max_den = 1'000'000,
                                    double tol = 1e-15);

template <class T>
bool is_zero(const T& x) {
  return x == T(0);
}

template <class T>
int sign_of(const T& x) {
  return (x > T(0)) - (x < T(0));
}

template <class T>
Vec<double> to_float(const Vec<T>& v) {
  Vec<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

template <class T>
Mat<double> to_float(const Mat<T>& m) {
  Mat<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

template <class R, class T>
Vec<R> to_real(const Vec<T>& v) {
  Vec<R> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<T, Rational>) out[i] = to_real<R>(v[i]);
    else out[i] = static_cast<R>(v[i]);
  }
  return out;
}

template <class R, class T>
Mat<R> to_real(const Mat<T>& m) {
  Mat<R> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<T, Rational>) out(i, j) = to_real<R>(m(i, j));
      else out(i, j) = static_cast<R>(m(i, j));
    }
  return out;
}

Vec<Rational> to_exact(const Vec<double>& v);

template <class T>
Vec<T> unit_vector(int n, int k) {
  Vec<T> v = Vec<T>::Zero(n);
  v[k] = T(1);
  return v;
}

}  // namespace nilgeo
