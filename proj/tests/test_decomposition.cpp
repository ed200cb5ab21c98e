#include "doctest.h"
#include "support.hpp"

#include "nilgeo/bundled.hpp"
#include "nilgeo/decomposition.hpp"

using namespace nilgeo;
using namespace testing_support;

namespace {

VecQ unit7(int k) { return unit_vector<Rational>(7, k); }

}  // namespace

TEST_SUITE("decomposition") {

TEST_CASE("quaternionic frame matches the given basis") {
  for (int eps : {1, -1})
    for (int b1 : {1, -1})
      for (int b2 : {1, -1}) {
        auto q = quaternionic7(eps, b1, b2);
        WittFrame f = witt_decompose(q);
        CHECK(f.du == 2);
        CHECK(f.dz == 1);
        CHECK(f.dv == 2);
        CHECK(f.de == 2);
        CHECK(f.basis == MatQ(MatQ::Identity(7, 7)));
        CHECK(f.z_signs() == std::vector<int>{eps});
        CHECK(f.e_signs() == std::vector<int>{b1, b2});
        CHECK(check_frame(q, f).empty());
      }
}

TEST_CASE("riemannian and abelian frames") {
  auto h = heisenberg3(1, 1, 1);
  WittFrame f = witt_decompose(h);
  CHECK(f.du == 0);
  CHECK(f.dv == 0);
  CHECK(f.dz == 1);
  CHECK(f.de == 2);
  CHECK(VecQ(f.vectors(Part::Z).col(0)) == unit_vector<Rational>(3, 2));

  WittFrame a = witt_decompose(abelian(4));
  CHECK(a.dz == 4);
  CHECK(a.du + a.dv + a.de == 0);

  WittFrame nc = witt_decompose(heisenberg3_null_center());
  CHECK(nc.du == 1);
  CHECK(nc.dz == 0);
  CHECK(nc.de == 1);
}

TEST_CASE("frame invariants on bundled algebras") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    const MetricAlgebra held = bundled_algebra(name);
    const auto& alg = held.exact();
    WittFrame f = witt_decompose(alg);
    CHECK(check_frame(alg, f).empty());
    CHECK(f.du + f.dz == center(alg).cols());
  }
}

TEST_CASE("frame invariants after random changes of basis") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    const MetricAlgebra held = bundled_algebra(name);
    const auto& base = held.exact();
    WittFrame ref = witt_decompose(base);
    for (int trial = 0; trial < 5; ++trial) {
      ExactAlgebra alg = change_basis(base, random_unimodular(base.dim()));
      WittFrame f = witt_decompose(alg);
      auto issues = check_frame(alg, f);
      CHECK(issues.empty());
      CHECK(f.du == ref.du);
      CHECK(f.dz == ref.dz);
      CHECK(f.de == ref.de);
      // Signatures of Z and E are basis independent.
      auto count = [](std::vector<int> s) { return std::count(s.begin(), s.end(), 1); };
      CHECK(count(f.z_signs()) == count(ref.z_signs()));
      CHECK(count(f.e_signs()) == count(ref.e_signs()));
    }
  }
}

TEST_CASE("decomposition is deterministic") {
  ExactAlgebra alg = change_basis(quaternionic7(1, -1, 1), random_unimodular(7));
  WittFrame a = witt_decompose(alg), b = witt_decompose(alg);
  CHECK(a.basis == b.basis);
}

TEST_CASE("unnormalizable norms are kept exact") {
  // <e1,e1> = 2 cannot be normalized over the rationals.
  MatQ g = MatQ::Identity(3, 3);
  g(0, 0) = 2;
  ExactAlgebra h(3, {{0, 1, unit_vector<Rational>(3, 2)}}, g);
  WittFrame f = witt_decompose(h);
  CHECK(check_frame(h, f).empty());
  bool has_two = false;
  for (Eigen::Index k = 0; k < f.e_norms.size(); ++k) has_two |= f.e_norms[k] == 2;
  CHECK(has_two);
  RealFrame r = normalized<Real>(f);
  for (Eigen::Index k = 0; k < r.e_norms.size(); ++k) CHECK(std::abs(r.e_norms[k]) == 1);
  MatD check = to_float(h.gram());
  Mat<Real> gr = to_real<Real>(h.gram());
  Mat<Real> adapted = r.basis.transpose() * gr * r.basis;
  CHECK((adapted - r.adapted_gram()).cwiseAbs().maxCoeff() < 1e-15L);
}

TEST_CASE("involution") {
  auto q = quaternionic7(1, -1, 1);
  WittFrame f = witt_decompose(q);
  CHECK(involution(f, unit7(0)) == unit7(3));
  CHECK(involution(f, unit7(4)) == unit7(1));
  CHECK(involution(f, unit7(5)) == VecQ(-unit7(5)));
  CHECK(involution(f, unit7(2)) == unit7(2));

  WittFrame r = witt_decompose(heisenberg3(1, 1, 1));
  for (int k = 0; k < 10; ++k) {
    VecQ x = random_vecq(3);
    CHECK(involution(r, x) == x);
  }
}

TEST_CASE("involution properties on random vectors") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    for (int trial = 0; trial < 3; ++trial) {
      const MetricAlgebra held = bundled_algebra(name);
      ExactAlgebra alg = change_basis(held.exact(), random_unimodular(held.dim()));
      WittFrame f = witt_decompose(alg);
      for (int k = 0; k < 10; ++k) {
        VecQ x = random_vecq(alg.dim()), y = random_vecq(alg.dim());
        CHECK(involution(f, involution(f, x)) == x);
        CHECK(alg.inner(involution(f, x), y) == alg.inner(x, involution(f, y)));
        CHECK(alg.inner(involution(f, x), involution(f, y)) == alg.inner(x, y));
        if (!all_zero(x)) CHECK(alg.inner(x, involution(f, x)) > 0);
      }
      CHECK(alg.inner(VecQ::Zero(alg.dim()), involution(f, VecQ(VecQ::Zero(alg.dim())))) == 0);
    }
  }
}

TEST_CASE("j operator") {
  auto ab = abelian(3);
  WittFrame fa = witt_decompose(ab);
  CHECK(j_op(ab, fa, random_vecq(3)).size() == 0);

  auto h = heisenberg3(1, 1, 1);
  WittFrame fh = witt_decompose(h);
  VecQ z = unit_vector<Rational>(3, 2);
  CHECK(j_apply(h, fh, z, unit_vector<Rational>(3, 0)) == unit_vector<Rational>(3, 1));
  CHECK(j_apply(h, fh, z, unit_vector<Rational>(3, 1)) == VecQ(-unit_vector<Rational>(3, 0)));
  MatQ jz = j_op(h, fh, z);
  MatQ expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK(jz == expected);
  CHECK_THROWS_AS(j_apply(h, fh, unit_vector<Rational>(3, 0), z), Error);

  // <j(a)x, y> = <iota a, [x, y]> on V + E.
  auto q = quaternionic7(-1, 1, -1);
  WittFrame fq = witt_decompose(q);
  for (int k = 0; k < 20; ++k) {
    VecQ a = fq.vectors(Part::U) * random_vecq(2) + fq.vectors(Part::Z) * random_vecq(1);
    VecQ x = fq.vectors(Part::V) * random_vecq(2) + fq.vectors(Part::E) * random_vecq(2);
    VecQ y = fq.vectors(Part::V) * random_vecq(2) + fq.vectors(Part::E) * random_vecq(2);
    VecQ jx = j_apply(q, fq, a, x);
    CHECK(q.inner(involution(fq, jx), y) == q.inner(involution(fq, a), q.bracket(x, y)));
    // Brute-force agreement of the matrix form with per-vector evaluation.
    MatQ m = j_op(q, fq, a);
    VecQ cx = fq.coords(x).segment(3, 4);
    CHECK(VecQ(m * cx) == VecQ(fq.coords(jx).segment(3, 4)));
  }
}

TEST_CASE("jdata basics") {
  auto h = heisenberg3(1, 1, 1);
  WittFrame f = witt_decompose(h);
  JData zero = build_jdata(h, f, VecQ(VecQ::Zero(3)), VecQ(VecQ::Zero(3)));
  CHECK(zero.j == MatQ(MatQ::Zero(2, 2)));
  CHECK(zero.e1_basis.cols() == 2);
  CHECK(zero.e2_basis.cols() == 0);
  CHECK(zero.orthogonal_split);

  Rational c(3, 2);
  JData d = build_jdata(h, f, VecQ(c * unit_vector<Rational>(3, 2)), VecQ(VecQ::Zero(3)));
  MatQ expected(2, 2);
  expected << 0, -c, c, 0;
  CHECK(d.j == expected);
  CHECK(d.e1_basis.cols() == 0);
  CHECK(d.e2_basis.cols() == 2);
  CHECK(MatQ(d.j * d.j_inv2) == MatQ(MatQ::Identity(2, 2)));

  CHECK_THROWS_AS(build_jdata(h, f, unit_vector<Rational>(3, 0), VecQ(VecQ::Zero(3))), Error);
}

TEST_CASE("jdata script operators in the quaternionic example") {
  auto q = quaternionic7(1, -1, 1);
  WittFrame f = witt_decompose(q);
  for (int k = 0; k < 20; ++k) {
    VecQ v0 = f.vectors(Part::V) * random_vecq(2);
    JData d = build_jdata(q, f, VecQ(VecQ::Zero(7)), v0);
    VecQ full = f.coords(q.ad_star(v0, v0));
    VecQ cv = f.coords(v0).segment(3, 4);
    // ad-dagger_{v0} v0 has no Z or V part; its U and E parts are S v0 and J v0.
    CHECK(full[2] == 0);
    CHECK(full[3] == 0);
    CHECK(full[4] == 0);
    CHECK(VecQ(d.s * cv) == VecQ(full.segment(0, 2)));
    CHECK(VecQ(d.script_j * cv) == VecQ(full.segment(5, 2)));
  }
}

TEST_CASE("J is skewadjoint and J inverse works on E2") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    const MetricAlgebra held = bundled_algebra(name);
    const auto& alg = held.exact();
    WittFrame f = witt_decompose(alg);
    MatQ ge = MatQ::Zero(f.de, f.de);
    for (int a = 0; a < f.de; ++a) ge(a, a) = f.e_norms[a];
    for (int k = 0; k < 10; ++k) {
      VecQ z0 = f.vectors(Part::Z) * random_vecq(f.dz);
      VecQ v0 = f.vectors(Part::V) * random_vecq(f.dv);
      JData d = build_jdata(alg, f, z0, v0, kDefaultTauRank, true);
      CHECK(MatQ(d.j.transpose() * ge + ge * d.j) == MatQ(MatQ::Zero(f.de, f.de)));
      if (!d.orthogonal_split) continue;
      CHECK(MatQ(d.e1_basis.transpose() * ge * d.e2_basis) == MatQ(MatQ::Zero(d.e1_basis.cols(), d.e2_basis.cols())));
      CHECK(MatQ(d.j * d.e1_basis) == MatQ(MatQ::Zero(f.de, d.e1_basis.cols())));
      for (Eigen::Index c = 0; c < d.e2_basis.cols(); ++c) {
        VecQ y = d.e2_basis.col(c);
        CHECK(VecQ(d.j * (d.j_inv2 * y)) == y);
      }
    }
  }
}

TEST_CASE("degenerate kernel of J is refused") {
  ExactAlgebra alg = degenerate_kernel_example();
  WittFrame f = witt_decompose(alg);
  VecQ z0 = unit_vector<Rational>(5, 3);
  REQUIRE(f.dz == 2);
  try {
    build_jdata(alg, f, z0, VecQ(VecQ::Zero(5)));
    FAIL("expected NonOrthogonalKernelSplit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonOrthogonalKernelSplit);
  }
  JData d = build_jdata(alg, f, z0, VecQ(VecQ::Zero(5)), kDefaultTauRank, true);
  CHECK_FALSE(d.orthogonal_split);
  CHECK(d.e1_basis.cols() == 1);
}

TEST_CASE("floating jdata agrees with the exact one") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    const MetricAlgebra held = bundled_algebra(name);
    const auto& alg = held.exact();
    WittFrame f = witt_decompose(alg);
    RealFrame rf = normalized<Real>(f);
    RealAlgebra ra = convert<Real>(alg);
    VecQ z0 = f.vectors(Part::Z) * random_vecq(f.dz);
    VecQ v0 = f.vectors(Part::V) * random_vecq(f.dv);
    JData d = build_jdata(alg, f, z0, v0, kDefaultTauRank, true);
    if (!d.orthogonal_split) continue;
    RealJData r = build_jdata(ra, rf, to_real<Real>(z0), to_real<Real>(v0));
    CHECK(r.e1_basis.cols() == d.e1_basis.cols());
    // Frames agree up to the E rescaling, so compare J through the spectrum
    // invariant trace(J^2).
    Real t_exact = to_real<Real>(MatQ(d.j * d.j).trace());
    Real t_real = (r.j * r.j).trace();
    CHECK(std::abs(t_exact - t_real) < 1e-15L * std::max(Real(1), std::abs(t_exact)));
  }
}

}  // TEST_SUITE
