#include "nilgeo/curvature.hpp"

namespace nilgeo {

namespace {

bool zero(const VecQ& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v[k] != 0) return false;
  return true;
}

}  // namespace

bool is_flat(const ExactAlgebra& alg) {
  const int n = alg.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!zero(riemann(alg, alg.basis_vector(i), alg.basis_vector(j), alg.basis_vector(k)))) return false;
  return true;
}

bool structurally_flat(const ExactAlgebra& alg, const WittFrame& frame) {
  if (frame.de != 0) return false;
  const int n = alg.dim();
  const int oz = frame.offset(Part::Z);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VecQ c = frame.coords(alg.structure(i, j));
      for (int a = 0; a < frame.dz; ++a)
        if (c[oz + a] != 0) return false;
    }
  return true;
}

bool constant_curvature_alarm(const ExactAlgebra& alg, const WittFrame& frame) {
  if (is_flat(alg)) return false;
  const int n = alg.dim();
  std::vector<VecQ> family;
  for (int i = 0; i < n; ++i) family.push_back(frame.basis.col(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) family.push_back(VecQ(frame.basis.col(i) + frame.basis.col(j)));
  std::optional<Rational> value;
  int planes = 0;
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b) {
      auto r = sectional(alg, family[a], family[b]);
      if (!r.sectional) continue;
      ++planes;
      if (!value) value = r.sectional;
      else if (*value != *r.sectional) return false;
    }
  return planes > 0;
}

std::vector<CurvatureRow> curvature_table(const ExactAlgebra& alg, const WittFrame& frame, bool adapted) {
  const int n = alg.dim();
  std::vector<CurvatureRow> rows;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      VecQ x = adapted ? VecQ(frame.basis.col(i)) : alg.basis_vector(i);
      VecQ y = adapted ? VecQ(frame.basis.col(j)) : alg.basis_vector(j);
      auto r = sectional(alg, x, y);
      rows.push_back({i, j, r.numerator, r.denominator, r.sectional, r.homaloidal});
    }
  return rows;
}

}  // namespace nilgeo
