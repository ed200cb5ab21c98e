#include "nilgeo/linalg.hpp"

#include <algorithm>

namespace nilgeo {

using boost::multiprecision::mpz_int;

Rational floor_rational(const Rational& q) {
  mpz_int num = boost::multiprecision::numerator(q);
  mpz_int den = boost::multiprecision::denominator(q);
  mpz_int quotient = num / den;  // truncates toward zero
  if (num % den != 0 && num < 0) quotient -= 1;
  return Rational(quotient);
}

namespace {

mpz_int lcm_of_denominators(const std::vector<VecQ>& vs) {
  mpz_int l = 1;
  for (const auto& v : vs)
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      mpz_int d = boost::multiprecision::denominator(v[i]);
      l = boost::multiprecision::lcm(l, d);
    }
  return l;
}

// Integer row Hermite normal form; rows of `m` are generators.
std::vector<std::vector<mpz_int>> hermite_rows(std::vector<std::vector<mpz_int>> m, int cols) {
  std::size_t r = 0;
  for (int c = 0; c < cols && r < m.size(); ++c) {
    // Euclid on column c among rows r..end.
    while (true) {
      std::size_t best = m.size();
      for (std::size_t i = r; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        if (best == m.size() || abs(m[i][c]) < abs(m[best][c])) best = i;
      }
      if (best == m.size()) break;
      std::swap(m[r], m[best]);
      bool done = true;
      for (std::size_t i = r + 1; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        mpz_int q = m[i][c] / m[r][c];
        for (int k = 0; k < cols; ++k) m[i][k] -= q * m[r][k];
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (r < m.size() && m[r][c] != 0) {
      if (m[r][c] < 0)
        for (int k = 0; k < cols; ++k) m[r][k] = -m[r][k];
      // Reduce entries above the pivot into [0, pivot).
      for (std::size_t i = 0; i < r; ++i) {
        mpz_int q = m[i][c] / m[r][c];
        if (m[i][c] % m[r][c] != 0 && m[i][c] < 0) q -= 1;
        if (q != 0)
          for (int k = 0; k < cols; ++k) m[i][k] -= q * m[r][k];
      }
      ++r;
    }
  }
  m.resize(r);
  return m;
}

}  // namespace

MatQ lattice_basis(const std::vector<VecQ>& generators, int dim) {
  if (generators.empty()) return MatQ(dim, 0);
  mpz_int scale = lcm_of_denominators(generators);
  std::vector<std::vector<mpz_int>> rows;
  for (const auto& g : generators) {
    std::vector<mpz_int> row(dim);
    for (int k = 0; k < dim; ++k) {
      Rational scaled = g[k] * Rational(scale);
      row[k] = boost::multiprecision::numerator(scaled);
    }
    rows.push_back(std::move(row));
  }
  auto h = hermite_rows(std::move(rows), dim);
  MatQ basis(dim, static_cast<Eigen::Index>(h.size()));
  for (std::size_t r = 0; r < h.size(); ++r)
    for (int k = 0; k < dim; ++k) basis(k, static_cast<Eigen::Index>(r)) = Rational(h[r][k]) / Rational(scale);
  return basis;
}

VecQ reduce_modulo(const VecQ& a, const MatQ& hnf_basis) {
  VecQ out = a;
  for (Eigen::Index r = 0; r < hnf_basis.cols(); ++r) {
    Eigen::Index pivot = -1;
    for (Eigen::Index k = 0; k < hnf_basis.rows(); ++k)
      if (hnf_basis(k, r) != 0) {
        pivot = k;
        break;
      }
    if (pivot < 0) continue;
    Rational q = floor_rational(out[pivot] / hnf_basis(pivot, r));
    if (q != 0) out -= q * hnf_basis.col(r);
  }
  return out;
}

bool in_lattice(const VecQ& v, const MatQ& hnf_basis) {
  VecQ rest = reduce_modulo(v, hnf_basis);
  for (Eigen::Index k = 0; k < rest.size(); ++k)
    if (rest[k] != 0) return false;
  return true;
}

}  // namespace nilgeo
