#include "nilgeo/decomposition.hpp"

namespace nilgeo {

namespace {

using boost::multiprecision::mpz_int;

Rational form(const MatQ& g, const VecQ& x, const VecQ& y) { return (x.transpose() * g * y)(0, 0); }

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  mpz_int num = boost::multiprecision::numerator(q);
  mpz_int den = boost::multiprecision::denominator(q);
  mpz_int rn = boost::multiprecision::sqrt(num);
  mpz_int rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

// Indefinite Gram-Schmidt: repeatedly take the remaining vector of largest
// |<w,w>|; when every remaining vector is null, use w + w' for a pair with
// <w,w'> != 0. Returns mutually orthogonal vectors and their norms.
std::pair<std::vector<VecQ>, std::vector<Rational>> indefinite_gram_schmidt(const MatQ& g,
                                                                           std::vector<VecQ> pool) {
  std::vector<VecQ> out;
  std::vector<Rational> norms;
  while (!pool.empty()) {
    std::size_t best = 0;
    Rational best_abs = -1;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      Rational a = abs(form(g, pool[k], pool[k]));
      if (a > best_abs) {
        best_abs = a;
        best = k;
      }
    }
    VecQ pivot;
    if (best_abs != 0) {
      pivot = pool[best];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    } else {
      bool found = false;
      for (std::size_t a = 0; a < pool.size() && !found; ++a)
        for (std::size_t b = a + 1; b < pool.size() && !found; ++b)
          if (form(g, pool[a], pool[b]) != 0) {
            pivot = pool[a] + pool[b];
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(a));
            found = true;
          }
      if (!found) throw Error(ErrorCode::DegenerateForm, "restricted inner product is degenerate");
    }
    Rational nn = form(g, pivot, pivot);
    for (auto& w : pool) {
      Rational c = form(g, w, pivot) / nn;
      if (c != 0) w -= c * pivot;
    }
    if (auto r = rational_sqrt(abs(nn))) {
      pivot /= *r;
      nn = sign_of(nn);
    }
    out.push_back(pivot);
    norms.push_back(nn);
  }
  return {out, norms};
}

}  // namespace

WittFrame witt_decompose(const ExactAlgebra& alg) {
  const int n = alg.dim();
  const MatQ& g = alg.gram();
  if (!alg.nondegenerate()) throw Error(ErrorCode::SingularGram, "inner product is degenerate");

  MatQ c = center(alg);
  MatQ restricted = c.transpose() * g * c;
  MatQ u = c * kernel(restricted);

  // Z: complete U to a basis of the center, then orthogonalize.
  std::vector<int> extra = greedy_extend(u, c);
  std::vector<VecQ> zpool;
  for (int k : extra) zpool.push_back(c.col(k));
  auto [zs, znorms] = indefinite_gram_schmidt(g, zpool);

  // V: ambient basis vectors pairing nondegenerately with U.
  const int du = static_cast<int>(u.cols());
  MatQ pairing_rows = u.transpose() * g;  // du x n
  std::vector<int> chosen = greedy_extend<Rational>(MatQ(du, 0), pairing_rows);
  if (static_cast<int>(chosen.size()) != du)
    throw Error(ErrorCode::DegenerateForm, "no dual complement for the null part of the center");
  MatQ w(n, du);
  for (int j = 0; j < du; ++j) w.col(j) = alg.basis_vector(chosen[j]);
  MatQ a = u.transpose() * g * w;
  auto a_inv = inverse(a);
  if (!a_inv) throw Error(ErrorCode::DegenerateForm, "U pairing is singular");
  w = w * *a_inv;
  for (int j = 0; j < du; ++j)
    for (std::size_t k = 0; k < zs.size(); ++k) {
      Rational coeff = form(g, w.col(j), zs[k]) / znorms[k];
      if (coeff != 0) w.col(j) -= coeff * zs[k];
    }
  MatQ v = w;
  for (int j = 0; j < du; ++j)
    for (int i = 0; i < du; ++i) {
      Rational coeff = form(g, w.col(j), w.col(i)) / 2;
      if (coeff != 0) v.col(j) -= coeff * u.col(i);
    }

  // E: orthogonal complement of U + Z + V.
  std::vector<VecQ> taken;
  for (int i = 0; i < du; ++i) taken.push_back(u.col(i));
  for (const auto& z : zs) taken.push_back(z);
  for (int i = 0; i < du; ++i) taken.push_back(v.col(i));
  MatQ rows(static_cast<Eigen::Index>(taken.size()), n);
  for (std::size_t k = 0; k < taken.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = (g * taken[k]).transpose();
  MatQ ecand = taken.empty() ? MatQ(MatQ::Identity(n, n)) : kernel(rows);
  auto [es, enorms] = indefinite_gram_schmidt(g, columns_of(ecand));

  WittFrame f;
  f.du = du;
  f.dz = static_cast<int>(zs.size());
  f.dv = du;
  f.de = static_cast<int>(es.size());
  if (f.dim() != n) throw Error(ErrorCode::DegenerateForm, "adapted basis has the wrong size");
  f.basis = MatQ(n, n);
  int col = 0;
  for (int i = 0; i < du; ++i) f.basis.col(col++) = u.col(i);
  for (const auto& z : zs) f.basis.col(col++) = z;
  for (int i = 0; i < du; ++i) f.basis.col(col++) = v.col(i);
  for (const auto& e : es) f.basis.col(col++) = e;
  auto inv = inverse(f.basis);
  if (!inv) throw Error(ErrorCode::DegenerateForm, "adapted vectors are dependent");
  f.inverse = *inv;
  f.z_norms = VecQ(f.dz);
  for (int k = 0; k < f.dz; ++k) f.z_norms[k] = znorms[k];
  f.e_norms = VecQ(f.de);
  for (int k = 0; k < f.de; ++k) f.e_norms[k] = enorms[k];
  return f;
}

std::vector<std::string> check_frame(const ExactAlgebra& alg, const WittFrame& f) {
  std::vector<std::string> issues;
  const int n = alg.dim();
  if (f.dim() != n || f.basis.rows() != n || f.basis.cols() != n) {
    issues.push_back("frame size does not match the algebra");
    return issues;
  }
  MatQ expected = f.adapted_gram();
  MatQ actual = f.basis.transpose() * alg.gram() * f.basis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (actual(i, j) != expected(i, j))
        issues.push_back("inner product of adapted vectors " + std::to_string(i) + "," + std::to_string(j) +
                         " is " + to_string(actual(i, j)) + ", expected " + to_string(expected(i, j)));
  for (int k = 0; k < f.dz; ++k)
    if (f.z_norms[k] == 0) issues.push_back("null Z vector");
  for (int k = 0; k < f.de; ++k)
    if (f.e_norms[k] == 0) issues.push_back("null E vector");
  MatQ prod = f.inverse * f.basis;
  if (prod != MatQ::Identity(n, n)) issues.push_back("stored inverse is wrong");
  // U + Z must be the center.
  MatQ c = center(alg);
  if (c.cols() != f.du + f.dz) issues.push_back("U + Z does not have the dimension of the center");
  for (int k = 0; k < f.du + f.dz; ++k) {
    VecQ x = f.basis.col(k);
    for (int w = 0; w < n; ++w) {
      VecQ b = alg.bracket(x, alg.basis_vector(w));
      for (int i = 0; i < n; ++i)
        if (b[i] != 0) {
          issues.push_back("U + Z vector " + std::to_string(k) + " is not central");
          w = n;
          break;
        }
    }
  }
  return issues;
}

}  // namespace nilgeo
