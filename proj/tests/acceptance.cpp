// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include "translation_sampling.hpp"

#include "nilgeo/bundled.hpp"
#include "nilgeo/curvature.hpp"
#include "nilgeo/lattice.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace nilgeo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::mt19937_64 rng(20240611);

Rational small_rational() {
  std::uniform_int_distribution<int> num(-12, 12), den(1, 4);
  return Rational(num(rng), den(rng));
}

VecQ random_in(const WittFrame& f, Part p) {
  VecQ c(f.size(p));
  for (int k = 0; k < f.size(p); ++k) c[k] = small_rational();
  return f.vectors(p) * c;
}

bool is_zero(const VecQ& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v[k] != 0) return false;
  return true;
}

// 1 -------------------------------------------------------------------------

Outcome golden_table() {
  const auto t0 = Clock::now();
  enum { u1, u2, z, v1, v2, e1, e2 };
  auto b = [](int k) { return unit_vector<Rational>(7, k); };
  int bad = 0, checks = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++bad;
  };
  for (int eps : {1, -1})
    for (int b1 : {1, -1})
      for (int b2 : {1, -1}) {
        ExactAlgebra q = quaternionic7(eps, b1, b2);
        expect(sec_numerator(q, b(v1), b(v2)) == -(Rational(b1) + Rational(3 * eps, 4)));
        for (int v : {v1, v2}) {
          for (int e : {e1, e2}) expect(sec_numerator(q, b(v), b(e)) == 0);
          expect(sec_numerator(q, b(z), b(v)) == 0);
        }
        const Rational sign = eps * b1 * b2;
        auto k = [&](int x, int y) { return sectional(q, b(x), b(y)).sectional; };
        expect(k(z, e1) && *k(z, e1) == sign / 4);
        expect(k(z, e2) && *k(z, e2) == sign / 4);
        expect(k(e1, e2) && *k(e1, e2) == -3 * sign / 4);
      }
  const double dt = seconds_since(t0);
  std::ostringstream d;
  d << checks - bad << "/" << checks << " identities over 8 sign choices, " << dt << " s";
  return {bad == 0 && dt < 1.0, d.str()};
}

// 2 -------------------------------------------------------------------------

Outcome formula_equivalence() {
  const int per_algebra = 200;
  int exact_bad = 0, float_bad = 0, exact_total = 0, float_total = 0;
  double worst_rel = 0;
  std::string first_failure;
  for (const auto& name : bundled_names()) {
    const MetricAlgebra held = bundled_algebra(name);
    const ExactAlgebra& alg = held.exact();
    const WittFrame f = witt_decompose(alg);
    const BasicAlgebra<double> fa = convert<double>(alg);
    const BasicWittFrame<double> ff = normalized<double>(f);
    Rational structure(0);
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = 0; j < alg.dim(); ++j) {
        VecQ br = alg.bracket(alg.basis_vector(i), alg.basis_vector(j));
        for (Eigen::Index k = 0; k < br.size(); ++k) structure = std::max(structure, abs(br[k]));
      }
    const double kappa = std::max(1.0, to_double(structure) * to_double(structure));

    // float inputs are the exact ones written in the normalized frame
    auto to_float = [&](const VecQ& x) { return Vec<double>(to_real<double>(x)); };
    auto check_float = [&](double generic, double formula, const Vec<double>& x, const Vec<double>& y) {
      // relative to the larger value, or to the natural size of the
      // numerator when both vanish
      const double size = std::max({std::abs(generic), std::abs(formula),
                                    kappa * x.squaredNorm() * y.squaredNorm() * 1e-3});
      const double rel = size > 0 ? std::abs(generic - formula) / size : 0;
      worst_rel = std::max(worst_rel, rel);
      ++float_total;
      if (rel > 1e-12) ++float_bad;
    };
    auto record = [&](bool ok, const char* which) {
      ++exact_total;
      if (!ok) {
        ++exact_bad;
        if (first_failure.empty()) first_failure = name + " " + which;
      }
    };
    for (int k = 0; k < per_algebra; ++k) {
      const VecQ zq = random_in(f, Part::Z), vq = random_in(f, Part::V), wq = random_in(f, Part::V),
                 eq = random_in(f, Part::E), gq = random_in(f, Part::E);
      record(sec_numerator(alg, eq, gq) == numerator_ee(alg, eq, gq), "ee");
      record(sec_numerator(alg, zq, vq) == numerator_zv(alg, f, zq, vq), "zv");
      record(sec_numerator(alg, vq, eq) == numerator_ve(alg, f, vq, eq), "ve");
      record(sec_numerator(alg, vq, wq) == numerator_vv(alg, f, vq, wq), "vv");

      const Vec<double> z = to_float(zq), v = to_float(vq), w = to_float(wq), e = to_float(eq), g = to_float(gq);
      check_float(sec_numerator(fa, e, g), numerator_ee(fa, e, g), e, g);
      check_float(sec_numerator(fa, z, v), numerator_zv(fa, ff, z, v), z, v);
      check_float(sec_numerator(fa, v, e), numerator_ve(fa, ff, v, e), v, e);
      check_float(sec_numerator(fa, v, w), numerator_vv(fa, ff, v, w), v, w);
    }
  }
  std::ostringstream d;
  d << "exact " << exact_total - exact_bad << "/" << exact_total << ", float " << float_total - float_bad << "/"
    << float_total << " (worst rel " << worst_rel << "), " << per_algebra << " inputs x "
    << bundled_names().size() << " algebras";
  if (!first_failure.empty()) d << ", first failure " << first_failure;
  return {exact_bad == 0 && float_bad == 0, d.str()};
}

// 3 -------------------------------------------------------------------------

Outcome flatness() {
  bool flat = is_flat(bundled_algebra("flat-u-group").exact());
  int bad = 0, triples = 0;
  for (const auto& name : bundled_names()) {
    const MetricAlgebra held = bundled_algebra(name);
    const ExactAlgebra& alg = held.exact();
    const WittFrame f = witt_decompose(alg);
    MatQ c(alg.dim(), f.du + f.dz);
    c << f.vectors(Part::U), f.vectors(Part::Z);
    for (int i = 0; i < c.cols(); ++i)
      for (int j = 0; j < c.cols(); ++j) {
        const VecQ x = c.col(i), y = c.col(j);
        if (sec_numerator(alg, x, y) != 0) ++bad;
        for (int k = 0; k < c.cols(); ++k) {
          ++triples;
          if (!is_zero(riemann(alg, x, y, VecQ(c.col(k))))) ++bad;
          if (sec_numerator(alg, VecQ(x + c.col(k)), y) != 0) ++bad;
        }
      }
  }
  std::ostringstream d;
  d << "flat-u-group full scan " << (flat ? "flat" : "NOT flat") << ", " << triples << " central triples, " << bad
    << " nonvanishing";
  return {flat && bad == 0, d.str()};
}

// 4 -------------------------------------------------------------------------

Outcome closed_form_vs_oracle() {
  const auto t0 = Clock::now();
  const std::vector<Real> grid = chebyshev_grid(10, 33);
  Real pos = 0, speed = 0, integral = 0;
  int total = 0, algebras_short = 0, skipped = 0;
  std::mt19937_64 gen(4);
  for (const auto& name : bundled_names()) {
    const MetricAlgebra held = bundled_algebra(name);
    GeodesicContext ctx(held.exact());
    int done = 0;
    for (int attempt = 0; done < 100 && attempt < 400; ++attempt) {
      GeodesicIvp ivp = random_ivp(ctx, gen);
      OracleComparison c;
      try {
        c = compare_with_oracle(ctx, ivp, grid);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonOrthogonalKernelSplit) throw;
        ++skipped;
        continue;
      }
      pos = std::max(pos, c.position);
      speed = std::max(speed, c.speed_drift);
      integral = std::max(integral, c.integral_drift);
      ++done;
    }
    total += done;
    if (done < 100) ++algebras_short;
  }
  const double dt = seconds_since(t0);
  std::ostringstream d;
  d << total << " IVPs (" << skipped << " degenerate splits skipped), position " << static_cast<double>(pos)
    << ", speed drift " << static_cast<double>(speed) << ", integral drift " << static_cast<double>(integral)
    << ", " << dt << " s";
  return {algebras_short == 0 && pos <= 1e-8 && speed <= 1e-9 && integral <= 1e-9 && dt < 30, d.str()};
}

// 5 -------------------------------------------------------------------------

Outcome torus_spectrum() {
  std::vector<MatQ> grams;
  for (int m = 1; m <= 4; ++m) {
    MatQ euc = MatQ::Identity(m, m);
    grams.push_back(euc);
    MatQ lor = MatQ::Identity(m, m);
    lor(0, 0) = -1;
    if (m >= 2) grams.push_back(lor);
    if (m >= 2) {
      // hyperbolic plane plus a positive block, and a skewed Lorentzian form
      MatQ hyp = MatQ::Identity(m, m);
      hyp(0, 0) = 0;
      hyp(1, 1) = 0;
      hyp(0, 1) = hyp(1, 0) = 1;
      grams.push_back(hyp);
      MatQ sk = MatQ::Identity(m, m) * 2;
      sk(0, 0) = -3;
      sk(0, 1) = sk(1, 0) = Rational(1, 2);
      grams.push_back(sk);
    }
  }
  int cases = 0, bad = 0;
  for (const MatQ& g : grams) {
    const int m = static_cast<int>(g.rows());
    for (int bound = 1; bound <= 3; ++bound) {
      ++cases;
      std::vector<Rational> brute;
      int nulls = 0;
      std::vector<int> k(m, -bound);
      for (;;) {
        bool nonzero = std::any_of(k.begin(), k.end(), [](int x) { return x != 0; });
        if (nonzero) {
          Rational q(0);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) q += g(i, j) * k[i] * k[j];
          if (q == 0)
            ++nulls;
          else
            brute.push_back(abs(q));
        }
        int i = 0;
        while (i < m && k[i] == bound) k[i++] = -bound;
        if (i == m) break;
        ++k[i];
      }
      std::sort(brute.begin(), brute.end());
      TorusSpectrum s = flat_torus_spectrum(MatQ::Identity(m, m), g, bound);
      std::vector<Rational> got = s.squared;
      std::sort(got.begin(), got.end());
      if (got != brute || s.null_count != nulls) ++bad;
    }
  }
  std::ostringstream d;
  d << cases - bad << "/" << cases << " (gram, bound) cases equal the brute-force multiset";
  return {bad == 0, d.str()};
}

// 6 -------------------------------------------------------------------------

Outcome flat_group_certification() {
  const MetricAlgebra held = bundled_algebra("flat-u-group");
  const ExactAlgebra& alg = held.exact();
  const LatticeSpec lat = standard_lattice(alg);
  const PeriodSpectrum ps = flat_group_spectrum(alg, lat, 3);
  GeodesicContext ctx(alg, lat.frame);
  const WittFrame& f = lat.frame;
  int bad_defect = 0, bad_form = 0;
  Real worst = 0;
  for (const PeriodRecord& r : ps.records) {
    const VecQ u = f.project(r.phi.log, Part::U), z = f.project(r.phi.log, Part::Z),
               v = f.project(r.phi.log, Part::V);
    if (r.omega_sq != abs(2 * alg.inner(u, v) + alg.inner(z, z))) ++bad_form;
    GeodesicIvp ivp = flat_translated_ivp(ctx, alg, r.phi.log, r.omega);
    Vec<Real> phi = ctx.to_adapted(to_real<Real>(r.phi.log));
    const std::vector<Real> times = translation_sample_times(r.omega);
    Real d = translation_defect(ctx, phi, ivp, r.omega, times);
    worst = std::max(worst, d);
    if (times.size() != 10 || d > 1e-8) ++bad_defect;
  }
  std::ostringstream d;
  d << ps.records.size() << " records, worst defect " << static_cast<double>(worst) << ", " << bad_defect
    << " uncertified, " << bad_form << " period-form mismatches";
  return {!ps.records.empty() && bad_defect == 0 && bad_form == 0, d.str()};
}

// 7 -------------------------------------------------------------------------

Outcome translation_criterion_equivalence() {
  std::mt19937_64 gen(7);
  int total = 0, agree = 0, translating = 0;
  std::map<std::string, int> disagreements;
  for (const auto& name : bundled_names()) {
    const MetricAlgebra held = bundled_algebra(name);
    GeodesicContext ctx(held.exact());
    for (char fam : {'A', 'B', 'C', 'D'})
      for (int k = 0; k < 4; ++k) {
        auto tr = sampling::make_triple(ctx, fam, gen);
        if (!tr) continue;
        const bool crit = translation_check(ctx, tr->phi, tr->ivp, tr->omega, 1e-9);
        const bool direct = direct_translation_check(ctx, tr->phi, tr->ivp, tr->omega);
        ++total;
        translating += direct;
        if (crit == direct)
          ++agree;
        else
          ++disagreements[name];
      }
  }
  std::ostringstream d;
  d << agree << "/" << total << " triples agree (" << translating << " translating)";
  if (!disagreements.empty()) {
    d << "; disagreements in";
    for (const auto& [n, c] : disagreements) d << " " << n << ":" << c;
  }
  return {total >= 100 && agree == total, d.str()};
}

// 8 -------------------------------------------------------------------------

Outcome distinguished_period_properties() {
  std::mt19937_64 gen(8);
  int definite = 0, definite_bad = 0, indefinite = 0, indefinite_bad = 0;
  std::string first_failure;
  std::map<std::string, int> failures;
  auto judge = [&](const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp, Real omega,
                   bool is_definite, const std::string& label) {
    RealDistinguishedPeriod dp = distinguished_period(ctx, phi);
    PeriodComparison pc = compare_periods(ctx, dp, ivp, static_cast<double>(omega));
    bool ok;
    if (is_definite) {
      ++definite;
      ok = pc.e_star_bound && pc.omega <= pc.omega_star * (1 + 1e-9);
      if (!ok) ++definite_bad;
    } else {
      ++indefinite;
      ok = pc.rule_holds;
      if (!ok) ++indefinite_bad;
    }
    if (!ok) ++failures[label.substr(0, label.find(' '))];
    if (!ok && first_failure.empty()) {
      std::ostringstream s;
      s << label << " omega " << pc.omega << " omega* " << pc.omega_star;
      first_failure = s.str();
    }
  };

  for (const auto& name : bundled_names()) {
    const MetricAlgebra held = bundled_algebra(name);
    const ExactAlgebra& alg = held.exact();
    const WittFrame f = witt_decompose(alg);
    if (f.du != 0 || f.dz == 0) continue;
    const std::vector<int> s = f.z_signs();
    const bool is_definite = std::all_of(s.begin(), s.end(), [&](int x) { return x == s[0]; });
    GeodesicContext ctx(alg, f);
    for (char fam : {'A', 'B', 'D'})
      for (int k = 0; k < 15; ++k) {
        auto tr = sampling::make_triple(ctx, fam, gen);
        if (!tr || !direct_translation_check(ctx, tr->phi, tr->ivp, tr->omega)) continue;
        judge(ctx, tr->phi, tr->ivp, tr->omega, is_definite, name);
      }
  }

  // timelike helices sqrt(1+c^2) e1 + c z on the spacelike-center Heisenberg
  // group, each translated by its own endpoint after one turn
  {
    const MetricAlgebra held = bundled_algebra("heisenberg3-lorentzian-spacelike-center");
    const ExactAlgebra& alg = held.exact();
    const WittFrame f = witt_decompose(alg);
    GeodesicContext ctx(alg, f);
    const Real pi = boost::math::constants::pi<Real>();
    for (Real c : {0.2L, 0.5L, 1.0L, 2.0L}) {
      Vec<Real> amb(3);
      amb << std::sqrt(1 + c * c), 0, c;
      GeodesicIvp ivp = ctx.make_ivp(ctx.to_adapted(amb));
      const Real omega = 2 * pi / c;
      Vec<Real> phi = solve_closed_form(ctx, ivp, omega).position;
      if (!direct_translation_check(ctx, phi, ivp, omega)) continue;
      std::ostringstream label;
      label << "helix c=" << static_cast<double>(c);
      judge(ctx, phi, ivp, omega, true, label.str());
    }
  }

  std::ostringstream d;
  d << "definite center " << definite - definite_bad << "/" << definite << ", indefinite center "
    << indefinite - indefinite_bad << "/" << indefinite;
  if (!failures.empty()) {
    d << "; failures in";
    for (const auto& [n, c] : failures) d << " " << n << ":" << c;
    d << "; first " << first_failure;
  }
  return {definite > 0 && definite_bad == 0 && indefinite_bad == 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "curvature golden table", golden_table},
      {2, "curvature formula equivalence", formula_equivalence},
      {3, "flatness and central planes", flatness},
      {4, "closed form vs oracle", closed_form_vs_oracle},
      {5, "flat torus spectrum", torus_spectrum},
      {6, "flat-group spectrum certification", flat_group_certification},
      {7, "translation criterion equivalence", translation_criterion_equivalence},
      {8, "period vs distinguished period", distinguished_period_properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
