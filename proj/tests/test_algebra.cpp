#include "doctest.h"
#include "support.hpp"

#include "nilgeo/bundled.hpp"
#include "nilgeo/linalg.hpp"

#include <cmath>

using namespace nilgeo;
using namespace testing_support;

namespace {

VecQ vq(std::initializer_list<int> xs) {
  VecQ v(static_cast<Eigen::Index>(xs.size()));
  int k = 0;
  for (int x : xs) v[k++] = x;
  return v;
}

// Strictly upper triangular 4x4 matrices: 3-step nilpotent.
ExactAlgebra upper_triangular4() {
  enum { e12, e13, e14, e23, e24, e34 };
  auto unit = [](int k) { return unit_vector<Rational>(6, k); };
  std::vector<ExactAlgebra::Bracket> b = {
      {e12, e23, unit(e13)}, {e12, e24, unit(e14)}, {e13, e34, unit(e14)}, {e23, e34, unit(e24)}};
  return ExactAlgebra(6, b, MatQ::Identity(6, 6));
}

}  // namespace

TEST_SUITE("core-algebra") {

TEST_CASE("heisenberg bracket and antisymmetry") {
  auto h = heisenberg3(1, 1, 1);
  CHECK(h.bracket(vq({1, 0, 0}), vq({0, 1, 0})) == vq({0, 0, 1}));
  CHECK(h.bracket(vq({0, 1, 0}), vq({1, 0, 0})) == vq({0, 0, -1}));
  for (int k = 0; k < 20; ++k) {
    VecQ x = random_vecq(3);
    CHECK(all_zero(h.bracket(x, x)));
  }
}

TEST_CASE("quaternionic brackets and inner products") {
  auto q = quaternionic7(-1, 1, -1);
  enum { u1, u2, z, v1, v2, e1, e2 };
  auto b = [](int k) { return unit_vector<Rational>(7, k); };
  CHECK(q.bracket(b(e1), b(v2)) == b(u2));
  CHECK(q.bracket(b(e2), b(v2)) == VecQ(-b(u1)));
  CHECK(q.bracket(b(v1), b(v2)) == b(z));
  CHECK(q.inner(b(u1), b(v1)) == 1);
  CHECK(q.inner(b(u1), b(v2)) == 0);
  CHECK(q.inner(b(z), b(z)) == -1);
  CHECK(q.inner(b(e2), b(e2)) == -1);
  CHECK(q.inner(random_vecq(7), VecQ::Zero(7)) == 0);
}

TEST_CASE("inner product is symmetric") {
  auto q = quaternionic7(1, -1, 1);
  for (int k = 0; k < 20; ++k) {
    VecQ x = random_vecq(7), y = random_vecq(7);
    CHECK(q.inner(x, y) == q.inner(y, x));
  }
}

TEST_CASE("dimension mismatch is rejected") {
  auto h = heisenberg3(1, 1, 1);
  CHECK_THROWS_AS(h.bracket(vq({1, 0}), vq({0, 1, 0})), Error);
  CHECK_THROWS_AS(h.inner(vq({1, 0, 0, 0}), vq({0, 1, 0})), Error);
  try {
    h.ad_star(vq({1, 0}), vq({1, 0, 0}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("malformed construction") {
  std::vector<ExactAlgebra::Bracket> dup = {{0, 1, vq({0, 0, 1})}, {0, 1, vq({0, 0, 1})}};
  CHECK_THROWS_AS(ExactAlgebra(3, dup, MatQ::Identity(3, 3)), Error);
  std::vector<ExactAlgebra::Bracket> out_of_range = {{0, 5, vq({0, 0, 1})}};
  CHECK_THROWS_AS(ExactAlgebra(3, out_of_range, MatQ::Identity(3, 3)), Error);
  CHECK_THROWS_AS(ExactAlgebra(3, {}, MatQ::Identity(2, 2)), Error);
}

TEST_CASE("validate") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    auto report = validate(bundled_algebra(name));
    CHECK(report.ok());
    CHECK(report.failures.empty());
  }
  auto ab = validate(bundled_algebra("abelian-4"));
  CHECK(ab.ok());
  CHECK(ab.abelian);
  CHECK_FALSE(validate(bundled_algebra("quaternionic7")).abelian);

  auto three = validate(MetricAlgebra(upper_triangular4(), Mode::Exact));
  CHECK_FALSE(three.two_step);
  CHECK(three.jacobi);
  CHECK_FALSE(three.ok());

  // Both orders supplied inconsistently.
  std::vector<ExactAlgebra::Bracket> bad = {{0, 1, vq({0, 0, 1})}, {1, 0, vq({0, 0, 1})}};
  auto anti = validate(MetricAlgebra(ExactAlgebra(3, bad, MatQ::Identity(3, 3)), Mode::Exact));
  CHECK_FALSE(anti.antisymmetric);

  MatQ g = MatQ::Identity(3, 3);
  g(2, 2) = 0;
  auto sing = validate(MetricAlgebra(ExactAlgebra(3, {}, g), Mode::Exact));
  CHECK_FALSE(sing.gram_nondegenerate);
  g(2, 2) = 1;
  g(0, 1) = 1;
  CHECK_FALSE(validate(MetricAlgebra(ExactAlgebra(3, {}, g), Mode::Exact)).gram_symmetric);
}

TEST_CASE("float-mode rationality check") {
  VecQ c = VecQ::Zero(3);
  c[2] = exact_from_double(0.25);
  MetricAlgebra ok(ExactAlgebra(3, {{0, 1, c}}, MatQ::Identity(3, 3)), Mode::Float);
  CHECK(validate(ok).rational);
  c[2] = exact_from_double(std::sqrt(2.0));
  MetricAlgebra irr(ExactAlgebra(3, {{0, 1, c}}, MatQ::Identity(3, 3)), Mode::Float);
  auto report = validate(irr);
  CHECK_FALSE(report.rational);
  CHECK_FALSE(report.ok());
}

TEST_CASE("center") {
  CHECK(center(heisenberg3(1, 1, 1)) == MatQ(vq({0, 0, 1})));
  CHECK(center(abelian(4)).cols() == 4);
  MatQ c = center(quaternionic7(1, 1, 1));
  REQUIRE(c.cols() == 3);
  // Brute force: x is central iff ad_x is the zero matrix, tested on the
  // spanning set and on random combinations of the result.
  auto q = quaternionic7(1, 1, 1);
  MatQ expected = MatQ::Zero(7, 3);
  expected(0, 0) = expected(1, 1) = expected(2, 2) = 1;
  CHECK(rank(MatQ((MatQ(7, 6) << c, expected).finished())) == 3);
  for (int k = 0; k < 10; ++k) {
    VecQ x = c * random_vecq(3);
    CHECK(all_zero(VecQ(q.ad_matrix(x).reshaped())));
  }
}

TEST_CASE("center agrees with brute-force kernel of ad") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    const MetricAlgebra held = bundled_algebra(name);
    const auto& alg = held.exact();
    const int n = alg.dim();
    // Brute force over coordinates: the map x -> (ad_x b_w)_w as n^2 x n matrix
    // assembled column by column from the bracket operation.
    MatQ big(n * n, n);
    for (int i = 0; i < n; ++i) {
      MatQ ad = alg.ad_matrix(alg.basis_vector(i));
      big.col(i) = ad.reshaped();
    }
    CHECK(rank(big) == n - center(alg).cols());
    MatQ c = center(alg);
    for (Eigen::Index k = 0; k < c.cols(); ++k) CHECK(all_zero(VecQ(big * VecQ(c.col(k)))));
  }
}

TEST_CASE("ad_star") {
  auto h = heisenberg3(1, 1, 1);
  CHECK(h.ad_star(vq({1, 0, 0}), vq({0, 0, 1})) == vq({0, 1, 0}));
  CHECK(h.ad_star(vq({0, 1, 0}), vq({0, 0, 1})) == vq({-1, 0, 0}));

  auto q = quaternionic7(1, -1, 1);
  for (int k = 0; k < 20; ++k) {
    VecQ a = center(q) * random_vecq(3);
    CHECK(all_zero(q.ad_star(a, random_vecq(7))));
    VecQ u = random_rational() * unit_vector<Rational>(7, 0) + random_rational() * unit_vector<Rational>(7, 1);
    CHECK(all_zero(q.ad_star(random_vecq(7), u)));
  }
}

TEST_CASE("ad_star defining identity holds exactly on random triples") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    const MetricAlgebra held = bundled_algebra(name);
    const auto& alg = held.exact();
    for (int k = 0; k < 25; ++k) {
      VecQ x = random_vecq(alg.dim()), y = random_vecq(alg.dim()), w = random_vecq(alg.dim());
      CHECK(alg.inner(alg.ad_star(x, y), w) == alg.inner(y, alg.bracket(x, w)));
    }
  }
}

TEST_CASE("ad_star defining identity in floating point") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    const MetricAlgebra held = bundled_algebra(name);
    const auto& alg = held.approx();
    for (int k = 0; k < 25; ++k) {
      VecD x = VecD::Random(alg.dim()), y = VecD::Random(alg.dim()), w = VecD::Random(alg.dim());
      double lhs = alg.inner(alg.ad_star(x, y), w);
      double rhs = alg.inner(y, alg.bracket(x, w));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("bch group law") {
  auto h = heisenberg3(1, 1, 1);
  GroupElement<Rational> g{random_vecq(3)};
  CHECK(bch_mul(h, g, identity_element<Rational>(3)).log == g.log);
  CHECK(all_zero(bch_mul(h, g, inverse(g)).log));
  GroupElement<Rational> a{vq({1, 0, 0})}, b{vq({0, 1, 0})};
  VecQ expected(3);
  expected << 1, 1, Rational(1, 2);
  CHECK(bch_mul(h, a, b).log == expected);
  auto comm = bch_mul(h, bch_mul(h, bch_mul(h, a, b), inverse(a)), inverse(b));
  CHECK(comm.log == vq({0, 0, 1}));
}

TEST_CASE("bch is associative") {
  for (const auto& name : bundled_names()) {
    CAPTURE(name);
    const MetricAlgebra held = bundled_algebra(name);
    const auto& alg = held.exact();
    for (int k = 0; k < 20; ++k) {
      GroupElement<Rational> a{random_vecq(alg.dim())}, b{random_vecq(alg.dim())}, c{random_vecq(alg.dim())};
      CHECK(bch_mul(alg, bch_mul(alg, a, b), c).log == bch_mul(alg, a, bch_mul(alg, b, c)).log);
    }
    const auto& fa = held.approx();
    for (int k = 0; k < 20; ++k) {
      GroupElement<double> a{VecD::Random(fa.dim())}, b{VecD::Random(fa.dim())}, c{VecD::Random(fa.dim())};
      VecD d = bch_mul(fa, bch_mul(fa, a, b), c).log - bch_mul(fa, a, bch_mul(fa, b, c)).log;
      CHECK(d.cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("causal character") {
  auto q = quaternionic7(1, 1, -1);
  enum { u1, u2, z, v1, v2, e1, e2 };
  CHECK(causal_character(q, unit_vector<Rational>(7, u1)) == CausalCharacter::Null);
  CHECK(causal_character(q, unit_vector<Rational>(7, z)) == CausalCharacter::Timelike);
  CHECK(causal_character(q, unit_vector<Rational>(7, e2)) == CausalCharacter::Spacelike);
  CHECK(causal_character(q, VecQ(VecQ::Zero(7))) == CausalCharacter::Zero);
  VecQ x = unit_vector<Rational>(7, u1) + unit_vector<Rational>(7, v1);
  CHECK(causal_character(q, x) == CausalCharacter::Timelike);

  auto f = to_float(q);
  VecD almost_null = VecD::Zero(7);
  almost_null[e1] = 1.0;
  almost_null[e2] = 1.0 + 1e-12;
  CHECK(causal_character(f, almost_null) == CausalCharacter::Null);
  CHECK(causal_character(f, almost_null, 1e-14) == CausalCharacter::Spacelike);
  CHECK(causal_character(f, VecD(VecD::Constant(7, 1e-12))) == CausalCharacter::Zero);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational(" -2 ") == -2);
  CHECK(parse_rational("0.1") == Rational(1, 10));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("-1.5/3") == Rational(-1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(exact_from_double(0.375) == Rational(3, 8));
  CHECK(*rationalize(0.3333333333333333) == Rational(1, 3));
  CHECK_FALSE(rationalize(M_PI).has_value());
}

}  // TEST_SUITE
