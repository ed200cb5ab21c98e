#include "nilgeo/lattice.hpp"

#include "nilgeo/curvature.hpp"
#include "nilgeo/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace nilgeo {

namespace {

bool all_zero(const VecQ& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v[k] != 0) return false;
  return true;
}

VecQ center_part(const WittFrame& f, const VecQ& x) { return f.project(x, Part::U) + f.project(x, Part::Z); }

VecQ base_part(const WittFrame& f, const VecQ& x) { return f.project(x, Part::V) + f.project(x, Part::E); }

double sqrt_abs(const Rational& q) { return std::sqrt(std::abs(to_double(q))); }

// c with (A^T G A) c = -A^T G a, i.e. a + A c orthogonal to the columns of A.
// Among the solutions one whose A c has no U part is preferred.
std::optional<VecQ> orthogonalizer(const ExactAlgebra& alg, const WittFrame& f, const MatQ& a, const VecQ& target,
                                   bool* no_u_part) {
  const MatQ ga = alg.gram() * a;
  const MatQ lhs = a.transpose() * ga;
  const VecQ rhs = -(ga.transpose() * target);
  if (f.du > 0) {
    MatQ u_rows = (f.inverse * a).topRows(f.du);
    MatQ stacked(lhs.rows() + f.du, lhs.cols());
    stacked << lhs, u_rows;
    VecQ srhs = VecQ::Zero(stacked.rows());
    srhs.head(rhs.size()) = rhs;
    if (auto c = solve_particular(stacked, srhs)) {
      if (no_u_part) *no_u_part = true;
      return c;
    }
  }
  auto c = solve_particular(lhs, rhs);
  if (no_u_part) *no_u_part = f.du == 0 || (c && all_zero(VecQ((f.inverse * a * *c).head(f.du))));
  return c;
}

Real inf_norm(const Vec<Real>& v) { return v.size() ? v.cwiseAbs().maxCoeff() : Real(0); }

std::vector<GeodesicState> states_at(const GeodesicContext& ctx, const GeodesicIvp& ivp,
                                     const std::vector<Real>& times) {
  try {
    ClosedFormGeodesic cf(ctx, ivp);
    std::vector<GeodesicState> out;
    for (Real t : times) out.push_back(cf.at(t));
    return out;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonOrthogonalKernelSplit) throw;
    return ode_oracle(ctx, ivp, times);
  }
}

}  // namespace

bool LatticeSpec::is_central(int i) const { return std::find(central.begin(), central.end(), i) != central.end(); }

LatticeSpec build_lattice(const MetricAlgebra& alg, const std::vector<VecQ>& generator_logs) {
  if (alg.mode() == Mode::Float && !validate(alg).rational)
    throw Error(ErrorCode::NonRationalStructure, "structure constants are not rational");
  return build_lattice(alg.exact(), generator_logs);
}

LatticeSpec build_lattice(const ExactAlgebra& alg, const std::vector<VecQ>& generator_logs) {
  return build_lattice(alg, witt_decompose(alg), generator_logs);
}

LatticeSpec build_lattice(const ExactAlgebra& alg, const WittFrame& frame, const std::vector<VecQ>& generator_logs) {
  const int n = alg.dim();
  if (static_cast<int>(generator_logs.size()) != n)
    throw Error(ErrorCode::NotABasis, "need " + std::to_string(n) + " generators, got " +
                                          std::to_string(generator_logs.size()));
  for (const auto& g : generator_logs) alg.check_dim(g);
  MatQ cols = as_columns(generator_logs, n);
  auto inv = inverse(cols);
  if (!inv) throw Error(ErrorCode::NotABasis, "generator logs are linearly dependent");

  LatticeSpec out;
  out.frame = frame;
  for (const auto& g : generator_logs) out.generators.push_back({g});

  std::vector<VecQ> central;
  for (int i = 0; i < n; ++i)
    if (alg.ad_matrix(generator_logs[i]) == MatQ::Zero(n, n)) {
      out.central.push_back(i);
      central.push_back(generator_logs[i]);
    }
  const int dim_center = static_cast<int>(center(alg).cols());
  if (static_cast<int>(central.size()) != dim_center)
    throw Error(ErrorCode::NotCanonical, "central generators do not span the center");

  out.structure = MatQ::Zero(n, n * n);
  out.central_lattice = lattice_basis(central, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      VecQ b = alg.bracket(generator_logs[i], generator_logs[j]);
      out.structure.col(i * n + j) = *inv * b;
      if (i < j && !in_lattice(b, out.central_lattice))
        throw Error(ErrorCode::NotCanonical, "bracket of generators " + std::to_string(i) + ", " +
                                                 std::to_string(j) + " is not in the central lattice");
    }

  out.projected_lattice = MatQ(n, n - dim_center);
  int c = 0;
  for (int i = 0; i < n; ++i)
    if (!out.is_central(i)) out.projected_lattice.col(c++) = base_part(frame, generator_logs[i]);
  return out;
}

LatticeSpec standard_lattice(const ExactAlgebra& alg) {
  std::vector<VecQ> logs;
  for (int k = 0; k < alg.dim(); ++k) logs.push_back(alg.basis_vector(k));
  return build_lattice(alg, logs);
}

TorusData torus_data(const ExactAlgebra& alg, const LatticeSpec& lattice) {
  const WittFrame& f = lattice.frame;
  TorusData td;
  td.dim_fiber = f.du + f.dz;
  td.dim_base = f.dv + f.de;
  td.central_lattice = lattice.central_lattice;
  td.projected_lattice = lattice.projected_lattice;
  td.nondegenerate_center = f.du == 0;

  MatQ zc(alg.dim(), td.dim_fiber);
  zc << f.vectors(Part::U), f.vectors(Part::Z);
  for (int i = 0; i < zc.cols(); ++i)
    for (int j = i + 1; j < zc.cols(); ++j)
      if (sec_numerator(alg, VecQ(zc.col(i)), VecQ(zc.col(j))) != 0) td.fiber_flat = false;

  // A quartic form vanishing on these vectors and on the seeded random pairs
  // vanishes identically except on a set of measure zero.
  MatQ bc(alg.dim(), td.dim_base);
  bc << f.vectors(Part::V), f.vectors(Part::E);
  std::vector<VecQ> probe;
  const int m = td.dim_base;
  for (int i = 0; i < m; ++i) {
    probe.push_back(bc.col(i));
    for (int j = i + 1; j < m; ++j) {
      probe.push_back(bc.col(i) + bc.col(j));
      for (int k = j + 1; k < m; ++k) probe.push_back(bc.col(i) + bc.col(j) + bc.col(k));
    }
  }
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<int>(state % 11) - 5;
  };
  for (int r = 0; r < 8 && m > 0; ++r) {
    VecQ x = VecQ::Zero(alg.dim());
    for (int i = 0; i < m; ++i) x += Rational(next()) * bc.col(i);
    probe.push_back(x);
  }
  for (std::size_t i = 0; i < probe.size() && td.base_flat; ++i)
    for (std::size_t j = i + 1; j < probe.size(); ++j)
      if (tb_numerator(alg, f, probe[i], probe[j]) != 0) {
        td.base_flat = false;
        break;
      }
  return td;
}

TorusSpectrum flat_torus_spectrum(const MatQ& lattice_vectors, const MatQ& gram, int bound) {
  if (bound < 1) throw Error(ErrorCode::InvalidArgument, "bound must be at least 1");
  if (gram.rows() != gram.cols() || gram.rows() != lattice_vectors.rows())
    throw Error(ErrorCode::DimensionMismatch, "gram and lattice vectors disagree in dimension");
  const MatQ g = lattice_vectors.transpose() * gram * lattice_vectors;
  const int m = static_cast<int>(g.rows());
  TorusSpectrum out;
  std::vector<int> c(static_cast<std::size_t>(m), -bound);
  while (m > 0) {
    bool zero = std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
    if (!zero) {
      Rational q = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) q += Rational(c[i]) * Rational(c[j]) * g(i, j);
      if (q == 0)
        ++out.null_count;
      else
        out.squared.push_back(abs(q));
    }
    int k = 0;
    while (k < m && c[k] == bound) c[k++] = -bound;
    if (k == m) break;
    ++c[k];
  }
  std::sort(out.squared.begin(), out.squared.end());
  for (const auto& q : out.squared) out.periods.push_back(sqrt_abs(q));
  return out;
}

Rational flat_period_form(const ExactAlgebra& alg, const WittFrame& f, const VecQ& phi_log) {
  VecQ u = f.project(phi_log, Part::U), z = f.project(phi_log, Part::Z), v = f.project(phi_log, Part::V);
  return 2 * alg.inner(u, v) + alg.inner(z, z);
}

GeodesicIvp flat_translated_ivp(const GeodesicContext& ctx, const ExactAlgebra& alg, const VecQ& phi_log,
                                double omega) {
  const WittFrame& f = witt_decompose(alg);
  VecQ v = f.project(phi_log, Part::V);
  VecQ w = center_part(f, phi_log) - alg.ad_star(v, v) / Rational(2) + v;
  Vec<Real> vel = ctx.to_adapted(to_real<Real>(w)) / static_cast<Real>(omega);
  return ctx.make_ivp(vel);
}

VecQ conjugacy_key(const ExactAlgebra& alg, const LatticeSpec& lattice, const VecQ& phi_log) {
  std::vector<VecQ> moves;
  for (const auto& g : lattice.generators) moves.push_back(alg.bracket(phi_log, g.log));
  return reduce_modulo(phi_log, lattice_basis(moves, alg.dim()));
}

bool central_in_lattice(const ExactAlgebra& alg, const LatticeSpec& lattice, const VecQ& phi_log) {
  for (const auto& g : lattice.generators)
    if (!all_zero(alg.bracket(phi_log, g.log))) return false;
  return true;
}

void enumerate_lattice(const ExactAlgebra& alg, const LatticeSpec& lattice, int bound,
                       const std::function<void(const std::vector<int>&, const VecQ&)>& f) {
  if (bound < 1) throw Error(ErrorCode::InvalidArgument, "bound must be at least 1");
  const int n = lattice.size();
  std::vector<int> k(static_cast<std::size_t>(n), -bound);
  while (n > 0) {
    if (!std::all_of(k.begin(), k.end(), [](int x) { return x == 0; })) {
      GroupElement<Rational> phi = identity_element<Rational>(alg.dim());
      for (int i = 0; i < n; ++i)
        if (k[i] != 0) phi = bch_mul(alg, phi, GroupElement<Rational>{Rational(k[i]) * lattice.generators[i].log});
      f(k, phi.log);
    }
    int i = 0;
    while (i < n && k[i] == bound) k[i++] = -bound;
    if (i == n) break;
    ++k[i];
  }
}

namespace {

PeriodRecord make_record(const ExactAlgebra& alg, const LatticeSpec& lattice, const std::vector<int>& k,
                         const VecQ& log, const Rational& q) {
  PeriodRecord r;
  r.omega_sq = abs(q);
  r.omega = sqrt_abs(q);
  r.phi = {log};
  r.exponents = k;
  r.causal = q > 0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;
  r.central = central_in_lattice(alg, lattice, log);
  r.class_key = conjugacy_key(alg, lattice, log);
  return r;
}

void sort_records(std::vector<PeriodRecord>& records) {
  std::sort(records.begin(), records.end(), [](const PeriodRecord& a, const PeriodRecord& b) {
    if (a.omega_sq != b.omega_sq) return a.omega_sq < b.omega_sq;
    for (Eigen::Index c = 0; c < a.phi.log.size(); ++c)
      if (a.phi.log[c] != b.phi.log[c]) return a.phi.log[c] < b.phi.log[c];
    return false;
  });
}

}  // namespace

PeriodSpectrum flat_group_spectrum(const ExactAlgebra& alg, const LatticeSpec& lattice, int bound) {
  const WittFrame& f = lattice.frame;
  if (!structurally_flat(alg, f)) throw Error(ErrorCode::FlatCaseOnly, "needs [n,n] inside U and E = 0");
  PeriodSpectrum out;
  out.bound = bound;
  enumerate_lattice(alg, lattice, bound, [&](const std::vector<int>& k, const VecQ& log) {
    VecQ v = f.project(log, Part::V);
    Rational q = flat_period_form(alg, f, log);
    if (!all_zero(alg.ad_star(v, v))) {
      ++out.non_translating;
      return;
    }
    if (q == 0) {
      ++out.null_count;
      return;
    }
    PeriodRecord r = make_record(alg, lattice, k, log, q);
    TranslatedGeodesic tg = translated_geodesic(alg, f, log);
    r.distinguished = !tg.null && abs(tg.norm_sq) == r.omega_sq;
    out.records.push_back(std::move(r));
  });
  sort_records(out.records);
  return out;
}

PeriodSpectrum translated_spectrum(const ExactAlgebra& alg, const LatticeSpec& lattice, int bound) {
  PeriodSpectrum out;
  out.bound = bound;
  enumerate_lattice(alg, lattice, bound, [&](const std::vector<int>& k, const VecQ& log) {
    TranslatedGeodesic tg;
    try {
      tg = translated_geodesic(alg, lattice.frame, log);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PerpConditionFailed && e.code() != ErrorCode::NoXiSolution) throw;
      ++out.non_translating;
      return;
    }
    if (tg.null) {
      ++out.null_count;
      return;
    }
    PeriodRecord r = make_record(alg, lattice, k, log, tg.norm_sq);
    r.distinguished = true;
    out.records.push_back(std::move(r));
  });
  sort_records(out.records);
  return out;
}

std::optional<double> simple_period_v(const Vec<Real>& v_star, const Vec<Real>& v0, double tol) {
  if (v_star.size() != v0.size()) throw Error(ErrorCode::DimensionMismatch, "v* and v0 differ in length");
  const Real scale = std::max(Real(1), inf_norm(v_star));
  if (inf_norm(v_star) <= tol) return std::nullopt;
  if (inf_norm(v0) <= tol) throw Error(ErrorCode::InconsistentRatio, "v* is nonzero but v0 vanishes");
  const Real ratio = v_star.dot(v0) / v0.dot(v0);
  if (inf_norm(v_star - ratio * v0) > tol * scale)
    throw Error(ErrorCode::InconsistentRatio, "v* is not a multiple of v0");
  if (ratio <= 0) throw Error(ErrorCode::InconsistentRatio, "v* points against v0");
  return static_cast<double>(ratio);
}

TranslatedGeodesic translated_geodesic(const ExactAlgebra& alg, const WittFrame& f, const VecQ& phi_log) {
  alg.check_dim(phi_log);
  TranslatedGeodesic tg;
  tg.x_star = base_part(f, phi_log);
  tg.a_star = phi_log - tg.x_star;
  const MatQ a = alg.ad_matrix(tg.x_star);
  if (!all_zero(VecQ(a.transpose() * alg.gram() * tg.x_star)))
    throw Error(ErrorCode::PerpConditionFailed, "x* is not orthogonal to [x*, n]");

  bool no_u = true;
  auto c = orthogonalizer(alg, f, a, tg.a_star, &no_u);
  if (!c) throw Error(ErrorCode::NoXiSolution, "a* has no component orthogonal to [x*, n]");
  const VecQ s = a * *c;
  tg.a_prime = tg.a_star + s;
  tg.u_components_coincide = no_u;

  // Minimum-norm xi with [x*, xi] = s: xi = A^T w, A A^T w = s.
  auto w = solve_particular(MatQ(a * a.transpose()), s);
  if (!w) throw Error(ErrorCode::NoXiSolution, "a' - a* is not in [x*, n]");
  tg.xi = a.transpose() * *w;

  tg.direction = tg.a_prime + tg.x_star;
  tg.norm_sq = alg.inner(tg.direction, tg.direction);
  tg.null = tg.norm_sq == 0;
  tg.omega_star = tg.null ? 1.0 : sqrt_abs(tg.norm_sq);
  return tg;
}

GeodesicIvp translated_ivp(const GeodesicContext& ctx, const TranslatedGeodesic& tg) {
  Vec<Real> vel = ctx.to_adapted(to_real<Real>(tg.direction)) / static_cast<Real>(tg.omega_star);
  return ctx.make_ivp(vel, ctx.to_adapted(to_real<Real>(tg.xi)));
}

std::vector<Real> translation_sample_times(Real omega) {
  std::vector<Real> out;
  for (int k = 0; k < 10; ++k) out.push_back(2 * omega * k / 9);
  return out;
}

Real translation_defect(const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp, Real omega,
                        const std::vector<Real>& times) {
  ctx.algebra().check_dim(phi);
  std::vector<Real> all = times;
  for (Real t : times) all.push_back(t + omega);
  std::vector<GeodesicState> s = states_at(ctx, ivp, all);
  const std::size_t n = times.size();
  Real worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec<Real> lhs = bch_mul(ctx.algebra(), GroupElement<Real>{phi}, GroupElement<Real>{s[i].position}).log;
    const Vec<Real>& rhs = s[n + i].position;
    worst = std::max(worst, inf_norm(lhs - rhs) / std::max(Real(1), inf_norm(rhs)));
  }
  return worst;
}

bool direct_translation_check(const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp, Real omega,
                              double tol) {
  return translation_defect(ctx, phi, ivp, omega, translation_sample_times(omega)) <= tol;
}

TranslationCriterion translation_criterion(const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp,
                                           Real omega, double tau_fix) {
  const RealAlgebra& alg = ctx.algebra();
  const RealFrame& f = ctx.frame();
  alg.check_dim(phi);
  // n^-1 phi n, so that the geodesic starts at the identity.
  GroupElement<Real> n{ivp.base};
  Vec<Real> conj = bch_mul(alg, bch_mul(alg, inverse(n), GroupElement<Real>{phi}), n).log;
  GeodesicIvp ivp0 = ivp;
  ivp0.base = Vec<Real>::Zero(ctx.dim());

  ClosedFormGeodesic cf(ctx, ivp0);
  const IvpSplit& sp = cf.split();
  const RealJData& jd = cf.jdata();
  TranslationCriterion tc;
  auto close = [&](const Vec<Real>& a, const Vec<Real>& b) {
    return inf_norm(a - b) <= static_cast<Real>(tau_fix) * std::max({Real(1), inf_norm(a), inf_norm(b)});
  };
  tc.endpoint = close(cf.at(omega).position, conj);

  const int oe = f.offset(Part::E);
  Vec<Real> w = (sp.e1 + sp.y1 + sp.x2).segment(oe, f.de);
  tc.fixes = f.de == 0 || close(Vec<Real>(exp_tj(jd.j, omega) * w), w);

  Vec<Real> x_star = ctx.block(conj, Part::V) + ctx.block(conj, Part::E);
  tc.x_star = close(x_star, omega * sp.x1 + omega * omega / 2 * sp.y1);
  if (f.du > 0) tc.s_x_star = inf_norm(Vec<Real>(jd.s * x_star.segment(f.offset(Part::V), f.dv + f.de)));
  return tc;
}

bool translation_check(const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp, Real omega,
                       double tau_fix) {
  return translation_criterion(ctx, phi, ivp, omega, tau_fix).holds();
}

DistinguishedPeriod distinguished_period(const ExactAlgebra& alg, const WittFrame& f, const VecQ& phi_log) {
  alg.check_dim(phi_log);
  if (f.du > 0) throw Error(ErrorCode::DegenerateCenter, "distinguished periods need a nondegenerate center");
  DistinguishedPeriod dp;
  dp.z_star = f.project(phi_log, Part::Z);
  dp.e_star = f.project(phi_log, Part::E);
  const MatQ a = alg.ad_matrix(dp.e_star);
  auto c = orthogonalizer(alg, f, a, dp.z_star, nullptr);
  if (!c) throw Error(ErrorCode::DegenerateForm, "z* has no component orthogonal to [e*, n]");
  dp.z_prime = dp.z_star + a * *c;
  VecQ d = dp.z_prime + dp.e_star;
  dp.norm_sq = alg.inner(d, d);
  dp.null = dp.norm_sq == 0;
  dp.omega_star = dp.null ? 1.0 : sqrt_abs(dp.norm_sq);
  return dp;
}

RealDistinguishedPeriod distinguished_period(const GeodesicContext& ctx, const Vec<Real>& phi, double tol) {
  const RealAlgebra& alg = ctx.algebra();
  alg.check_dim(phi);
  if (ctx.frame().du > 0) throw Error(ErrorCode::DegenerateCenter, "distinguished periods need a nondegenerate center");
  RealDistinguishedPeriod dp;
  dp.z_star = ctx.block(phi, Part::Z);
  dp.e_star = ctx.block(phi, Part::E);
  if (inf_norm(dp.e_star) <= tol * std::max(Real(1), inf_norm(phi))) dp.e_star.setZero();
  dp.z_prime = dp.z_star;
  const Mat<Real> a = alg.ad_matrix(dp.e_star);
  Eigen::JacobiSVD<Mat<Real>> svd(a, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv[r] > ctx.tau_rank() * std::max(Real(1), sv[0])) ++r;
  if (r > 0) {
    Mat<Real> q = svd.matrixU().leftCols(r);
    const Mat<Real> gq = alg.gram() * q;
    Mat<Real> lhs = q.transpose() * gq;
    Vec<Real> rhs = -(gq.transpose() * dp.z_star);
    Vec<Real> c = lhs.completeOrthogonalDecomposition().solve(rhs);
    if (inf_norm(lhs * c - rhs) > 1e-9 * std::max(Real(1), inf_norm(rhs)))
      throw Error(ErrorCode::DegenerateForm, "z* has no component orthogonal to [e*, n]");
    dp.z_prime += q * c;
  }
  Vec<Real> d = dp.z_prime + dp.e_star;
  dp.norm_sq = alg.inner(d, d);
  dp.null = std::abs(dp.norm_sq) <= tol * std::max(Real(1), d.squaredNorm());
  dp.omega_star = dp.null ? 1.0 : static_cast<double>(std::sqrt(std::abs(dp.norm_sq)));
  return dp;
}

PeriodComparison compare_periods(const GeodesicContext& ctx, const DistinguishedPeriod& dp, const GeodesicIvp& ivp,
                                 double omega, double tol) {
  RealDistinguishedPeriod r;
  r.z_star = ctx.to_adapted(to_real<Real>(dp.z_star));
  r.e_star = ctx.to_adapted(to_real<Real>(dp.e_star));
  r.z_prime = ctx.to_adapted(to_real<Real>(dp.z_prime));
  r.norm_sq = to_real<Real>(dp.norm_sq);
  r.omega_star = dp.omega_star;
  r.null = dp.null;
  return compare_periods(ctx, r, ivp, omega, tol);
}

PeriodComparison compare_periods(const GeodesicContext& ctx, const RealDistinguishedPeriod& dp,
                                 const GeodesicIvp& ivp, double omega, double tol) {
  const RealAlgebra& alg = ctx.algebra();
  PeriodComparison pc;
  pc.omega = omega;
  pc.omega_star = dp.omega_star;
  Vec<Real> vel = ivp.velocity();
  pc.epsilon = alg.inner(vel, vel) > 0 ? 1 : -1;
  const Vec<Real>& zp = dp.z_prime;
  pc.e_star_norm = static_cast<double>(std::sqrt(std::abs(alg.inner(dp.e_star, dp.e_star))));

  const Real w = omega;
  Vec<Real> off = w * ivp.z0 - zp;
  Real q_off = alg.inner(off, off);
  Real scale = std::max(Real(1), off.squaredNorm());
  if (std::abs(q_off) <= tol * scale)
    pc.offset = CausalCharacter::Null;
  else
    pc.offset = q_off > 0 ? CausalCharacter::Timelike : CausalCharacter::Spacelike;

  if (pc.offset == CausalCharacter::Null)
    pc.predicted = 0;
  else if ((pc.epsilon > 0) == (pc.offset == CausalCharacter::Timelike))
    pc.predicted = -1;
  else
    pc.predicted = 1;

  if (dp.null)
    pc.actual = 1;
  else if (std::abs(omega - dp.omega_star) <= tol * std::max(1.0, dp.omega_star))
    pc.actual = 0;
  else
    pc.actual = omega < dp.omega_star ? -1 : 1;
  pc.rule_holds = pc.predicted == pc.actual;

  const Real q = dp.norm_sq;
  pc.rule_applicable = pc.epsilon * q > tol * std::max(Real(1), std::abs(q));
  pc.e_star_bound = pc.e_star_norm <= omega * (1 + tol);
  pc.identity_residual = static_cast<double>(std::abs(q - pc.epsilon * w * w - q_off));
  return pc;
}

SpectrumPartition spectrum_partition(const ExactAlgebra& alg, const LatticeSpec& lattice,
                                     const std::vector<PeriodRecord>& records) {
  SpectrumPartition p;
  for (const auto& r : records) {
    (central_in_lattice(alg, lattice, r.phi.log) ? p.fiber : p.base).push_back(r);
    if (r.distinguished) p.distinguished.push_back(r);
  }
  return p;
}

}  // namespace nilgeo
