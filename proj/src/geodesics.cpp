#include "nilgeo/geodesics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nilgeo {

namespace {

RealFrame identity_frame(const RealFrame& f) {
  RealFrame out;
  out.du = f.du;
  out.dz = f.dz;
  out.dv = f.dv;
  out.de = f.de;
  out.basis = Mat<Real>::Identity(f.dim(), f.dim());
  out.inverse = out.basis;
  out.z_norms = f.z_norms;
  out.e_norms = f.e_norms;
  return out;
}

}  // namespace

Mat<Real> exp_tj(const Mat<Real>& j, Real t) {
  if (j.rows() == 0) return j;
  Mat<Real> a = t * j;
  return a.exp();
}

namespace {

// Rounding noise of [e^{sJ} a, e^{sJ} b] for s in [0, t]: the factors may
// grow while the bracket stays small, so the bound uses their sizes.
Real bracket_noise(const GeodesicContext& ctx, const Mat<Real>& j, Real t, const Vec<Real>& a, const Vec<Real>& b) {
  Real worst = 0;
  for (Real s : {Real(0), t / 2, t}) {
    Mat<Real> es = exp_tj(j, s);
    worst = std::max(worst, Vec<Real>(es * a).norm() * Vec<Real>(es * b).norm());
  }
  const Real n = static_cast<Real>(ctx.dim());
  return 64 * std::numeric_limits<Real>::epsilon() * n * n * ctx.bracket_scale() * worst;
}

}  // namespace

GeodesicContext::GeodesicContext(const ExactAlgebra& alg, double tau_rank)
    : GeodesicContext(alg, witt_decompose(alg), tau_rank) {}

GeodesicContext::GeodesicContext(const ExactAlgebra& alg, const WittFrame& frame, double tau_rank)
    : ambient_(normalized<Real>(frame)), tau_rank_(tau_rank) {
  algebra_ = adapted_algebra(convert<Real>(alg), ambient_);
  frame_ = identity_frame(ambient_);
  for (int i = 0; i < dim(); ++i)
    for (int j = i + 1; j < dim(); ++j) {
      Vec<Real> b = algebra_.structure(i, j);
      if (b.size()) bracket_scale_ = std::max(bracket_scale_, b.cwiseAbs().maxCoeff());
    }
}

Vec<Real> GeodesicContext::block(const Vec<Real>& x, Part p) const {
  Vec<Real> out = Vec<Real>::Zero(dim());
  out.segment(frame_.offset(p), frame_.size(p)) = x.segment(frame_.offset(p), frame_.size(p));
  return out;
}

GeodesicIvp GeodesicContext::make_ivp(const Vec<Real>& velocity, const Vec<Real>& base) const {
  algebra_.check_dim(velocity);
  GeodesicIvp ivp;
  ivp.base = base.size() ? base : Vec<Real>(Vec<Real>::Zero(dim()));
  algebra_.check_dim(ivp.base);
  ivp.u0 = block(velocity, Part::U);
  ivp.z0 = block(velocity, Part::Z);
  ivp.v0 = block(velocity, Part::V);
  ivp.e0 = block(velocity, Part::E);
  return ivp;
}

RealJData GeodesicContext::jdata(const GeodesicIvp& ivp, bool allow_nonorthogonal) const {
  return build_jdata(algebra_, frame_, ivp.z0, ivp.v0, tau_rank_, allow_nonorthogonal);
}

IvpSplit split_ivp(const GeodesicContext& ctx, const GeodesicIvp& ivp, const RealJData& jd) {
  const RealFrame& f = ctx.frame();
  const int oe = f.offset(Part::E), ov = f.offset(Part::V);
  auto embed = [&](const Vec<Real>& e) {
    Vec<Real> out = Vec<Real>::Zero(f.dim());
    out.segment(oe, f.de) = e;
    return out;
  };
  Vec<Real> e0 = ivp.e0.segment(oe, f.de);
  Vec<Real> jv0 = jd.script_j.leftCols(f.dv) * ivp.v0.segment(ov, f.dv);
  Vec<Real> e1 = jd.p1 * e0, y1 = jd.p1 * jv0;
  IvpSplit s;
  s.e1 = embed(e1);
  s.e2 = embed(e0 - e1);
  s.y1 = embed(y1);
  s.y2 = embed(jv0 - y1);
  Vec<Real> jy2 = embed(jd.j_inv2 * (jv0 - y1));
  s.x1 = s.e1 + ivp.v0 - jy2;
  s.x2 = s.e2 + jy2;
  return s;
}

ClosedFormGeodesic::ClosedFormGeodesic(const GeodesicContext& ctx, GeodesicIvp ivp, QuadratureOptions quad)
    : ctx_(ctx), ivp_(std::move(ivp)), quad_(quad) {
  jd_ = ctx_.jdata(ivp_);
  split_ = split_ivp(ctx_, ivp_, jd_);
  x2e_ = e_part(split_.x2);
  kx2_ = jd_.j_inv2 * x2e_;
  k2x2_ = jd_.j_inv2 * kx2_;
  k3x2_ = jd_.j_inv2 * k2x2_;
}

Vec<Real> ClosedFormGeodesic::embed_e(const Vec<Real>& e) const {
  Vec<Real> out = Vec<Real>::Zero(ctx_.dim());
  out.segment(ctx_.frame().offset(Part::E), ctx_.frame().de) = e;
  return out;
}

Vec<Real> ClosedFormGeodesic::e_part(const Vec<Real>& x) const {
  return x.segment(ctx_.frame().offset(Part::E), ctx_.frame().de);
}

Vec<Real> ClosedFormGeodesic::s_apply(const Vec<Real>& x) const {
  const RealFrame& f = ctx_.frame();
  Vec<Real> out = Vec<Real>::Zero(f.dim());
  out.segment(0, f.du) = jd_.s * x.segment(f.offset(Part::V), f.dv + f.de);
  return out;
}

Real ClosedFormGeodesic::noise(Real t, const Vec<Real>& a, const Vec<Real>& b) const {
  return bracket_noise(ctx_, jd_.j, t, a, b);
}

Vec<Real> ClosedFormGeodesic::x_at(Real t) const {
  Mat<Real> m = exp_tj(jd_.j, t) - Mat<Real>::Identity(jd_.j.rows(), jd_.j.cols());
  return t * split_.x1 + embed_e(m * kx2_) + t * t / 2 * split_.y1;
}

Vec<Real> ClosedFormGeodesic::xdot_at(Real t) const {
  return split_.x1 + embed_e(exp_tj(jd_.j, t) * x2e_) + t * split_.y1;
}

Vec<Real> ClosedFormGeodesic::bracket_integral(Real t) const {
  const RealAlgebra& alg = ctx_.algebra();
  const Mat<Real> e = exp_tj(jd_.j, t);
  const Mat<Real> id = Mat<Real>::Identity(e.rows(), e.cols());
  const Vec<Real>& x1 = split_.x1;
  const Vec<Real>& y1 = split_.y1;
  Vec<Real> out = t / 2 * alg.bracket(Vec<Real>(x1 + t / 2 * y1), embed_e((e + id) * kx2_));
  out -= t * alg.bracket(y1, embed_e(e * x2e_));
  out += t * t * t / 12 * alg.bracket(x1, y1);
  out += alg.bracket(embed_e((e - id) * kx2_), embed_e(kx2_)) / 2;
  out -= alg.bracket(x1, embed_e((e - id) * k2x2_));
  out += alg.bracket(y1, embed_e((e - id) * k3x2_));
  auto integrand = [&](Real s) {
    Mat<Real> es = exp_tj(jd_.j, s);
    return Vec<Real>(alg.bracket(embed_e(es * kx2_), embed_e(es * x2e_)));
  };
  out += integrate(integrand, Real(0), t, quad_, noise(t, kx2_, x2e_)) / 2;
  return out;
}

Vec<Real> ClosedFormGeodesic::s_double_integral(Real t) const {
  auto integrand = [&](Real s) { return Vec<Real>((t - s) * s_apply(xdot_at(s))); };
  return integrate(integrand, Real(0), t, quad_);
}

GeodesicState ClosedFormGeodesic::at(Real t) const {
  const RealAlgebra& alg = ctx_.algebra();
  Vec<Real> x = x_at(t), xdot = xdot_at(t);
  Vec<Real> bi = bracket_integral(t);
  Vec<Real> pos = x + t * ivp_.z0 + ctx_.block(bi, Part::Z) + t * ivp_.u0 + ctx_.block(bi, Part::U) +
                  s_double_integral(t);
  GeodesicState s;
  s.t = t;
  s.body = ivp_.u0 + s_apply(x) + ivp_.z0 + xdot;
  s.position = pos;
  s.velocity = s.body - alg.bracket(s.body, pos) / 2;
  if (!ivp_.base.isZero(0)) return left_translate(alg, ivp_.base, s);
  return s;
}

GeodesicState solve_closed_form(const GeodesicContext& ctx, const GeodesicIvp& ivp, Real t,
                                const QuadratureOptions& quad) {
  return ClosedFormGeodesic(ctx, ivp, quad).at(t);
}

GeodesicState solve_nondegenerate(const GeodesicContext& ctx, const GeodesicIvp& ivp, Real t,
                                  const QuadratureOptions& quad) {
  const RealFrame& f = ctx.frame();
  if (f.du != 0) throw Error(ErrorCode::DegenerateCenter, "the nondegenerate formulas need U = V = 0");
  const RealAlgebra& alg = ctx.algebra();
  RealJData jd = ctx.jdata(ivp);
  IvpSplit sp = split_ivp(ctx, ivp, jd);
  const int oe = f.offset(Part::E);
  auto embed = [&](const Vec<Real>& e) {
    Vec<Real> out = Vec<Real>::Zero(f.dim());
    out.segment(oe, f.de) = e;
    return out;
  };
  Vec<Real> e2 = sp.e2.segment(oe, f.de);
  Vec<Real> ke2 = jd.j_inv2 * e2, k2e2 = jd.j_inv2 * ke2;
  Mat<Real> ex = exp_tj(jd.j, t);
  Mat<Real> id = Mat<Real>::Identity(ex.rows(), ex.cols());

  Vec<Real> e = t * sp.e1 + embed((ex - id) * ke2);
  Vec<Real> z1 = ivp.z0 + alg.bracket(sp.e1, embed((ex + id) * ke2)) / 2;
  Vec<Real> z2 = alg.bracket(sp.e1, embed((id - ex) * k2e2)) + alg.bracket(embed(ex * ke2), embed(ke2)) / 2;
  auto integrand = [&](Real s) {
    Mat<Real> es = exp_tj(jd.j, s);
    return Vec<Real>(alg.bracket(embed(es * ke2), embed(es * e2)));
  };
  Vec<Real> z3 = integrate(integrand, Real(0), t, quad, bracket_noise(ctx, jd.j, t, ke2, e2)) / 2;

  GeodesicState s;
  s.t = t;
  s.position = e + t * z1 + z2 + z3;
  s.body = ivp.z0 + sp.e1 + embed(ex * e2);
  s.velocity = s.body - alg.bracket(s.body, s.position) / 2;
  if (!ivp.base.isZero(0)) return left_translate(alg, ivp.base, s);
  return s;
}

std::vector<GeodesicState> ode_oracle(const GeodesicContext& ctx, const GeodesicIvp& ivp,
                                      const std::vector<Real>& times, const OdeOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<Real>;
  const RealAlgebra& alg = ctx.algebra();
  const int n = ctx.dim();

  auto rhs = [&](const State& y, State& dy, Real) {
    Eigen::Map<const Vec<Real>> x(y.data(), n), w(y.data() + n, n);
    Vec<Real> xv = x, wv = w;
    Eigen::Map<Vec<Real>> dx(dy.data(), n), dw(dy.data() + n, n);
    dx = wv - alg.bracket(wv, xv) / 2;
    dw = alg.ad_star(wv, wv);
  };

  State y(static_cast<std::size_t>(2 * n));
  Vec<Real> w0 = ivp.velocity();
  for (int k = 0; k < n; ++k) {
    y[static_cast<std::size_t>(k)] = 0;
    y[static_cast<std::size_t>(n + k)] = w0[k];
  }

  std::vector<Real> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && sorted.front() < 0) throw Error(ErrorCode::InvalidArgument, "sample times must be >= 0");
  std::vector<Real> grid{0};
  for (Real t : sorted)
    if (t > grid.back()) grid.push_back(t);

  std::vector<State> states;
  auto observer = [&](const State& s, Real) { states.push_back(s); };
  if (grid.size() == 1) {
    states.push_back(y);
  } else {
    auto stepper = odeint::make_controlled(static_cast<Real>(opt.abs_tol), static_cast<Real>(opt.rel_tol),
                                           odeint::runge_kutta_fehlberg78<State, Real>());
    try {
      odeint::integrate_times(stepper, rhs, y, grid.begin(), grid.end(), static_cast<Real>(opt.initial_step),
                              observer, odeint::max_step_checker(100000));
    } catch (const std::exception& ex) {
      throw Error(ErrorCode::StepSizeUnderflow, std::string("ode oracle failed: ") + ex.what());
    }
  }
  if (states.size() != grid.size()) throw Error(ErrorCode::StepSizeUnderflow, "ode oracle stopped early");

  std::vector<GeodesicState> out;
  out.reserve(times.size());
  for (Real t : times) {
    auto it = std::lower_bound(grid.begin(), grid.end(), t);
    const State& s = states[static_cast<std::size_t>(it - grid.begin())];
    GeodesicState g;
    g.t = t;
    g.position = Eigen::Map<const Vec<Real>>(s.data(), n);
    g.body = Eigen::Map<const Vec<Real>>(s.data() + n, n);
    g.velocity = g.body - alg.bracket(g.body, g.position) / 2;
    out.push_back(ivp.base.isZero(0) ? g : left_translate(alg, ivp.base, g));
  }
  return out;
}

CausalCharacter causal_character_along(const GeodesicContext& ctx, const std::vector<GeodesicState>& path,
                                       double tau_null) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, "empty path");
  CausalCharacter first = causal_character(ctx.algebra(), path.front().body, tau_null);
  for (const auto& s : path) {
    CausalCharacter c = causal_character(ctx.algebra(), s.body, tau_null);
    if (c != first)
      throw Error(ErrorCode::CausalInconsistency, "causal character changes along the path at t = " +
                                                      std::to_string(static_cast<double>(s.t)));
  }
  return first;
}

std::vector<Real> chebyshev_grid(Real t_end, int n) {
  std::vector<Real> out;
  if (n == 1) return {t_end};
  const Real pi = boost::math::constants::pi<Real>();
  for (int k = 0; k < n; ++k) out.push_back(t_end / 2 * (1 - std::cos(pi * k / (n - 1))));
  return out;
}

GeodesicState left_translate(const RealAlgebra& alg, const Vec<Real>& n, const GeodesicState& s) {
  GeodesicState out = s;
  out.position = bch_mul(alg, GroupElement<Real>{n}, GroupElement<Real>{s.position}).log;
  out.velocity = s.velocity + alg.bracket(n, s.velocity) / 2;
  return out;
}

Vec<Real> z_first_integral(const GeodesicContext& ctx, const GeodesicState& s) {
  Vec<Real> w = s.velocity + ctx.algebra().bracket(s.velocity, s.position) / 2;
  return ctx.block(w, Part::Z);
}

Vec<Real> v_first_integral(const GeodesicContext& ctx, const GeodesicState& s) {
  return ctx.block(s.velocity, Part::V);
}

OracleComparison compare_with_oracle(const GeodesicContext& ctx, const GeodesicIvp& ivp,
                                     const std::vector<Real>& times, const OdeOptions& opt) {
  ClosedFormGeodesic cf(ctx, ivp);
  std::vector<GeodesicState> path = ode_oracle(ctx, ivp, times, opt);
  const RealAlgebra& alg = ctx.algebra();
  const Vec<Real> w0 = ivp.velocity();
  const Real q0 = alg.inner(w0, w0);
  auto dev = [](const Vec<Real>& a) { return a.size() ? a.cwiseAbs().maxCoeff() : Real(0); };
  OracleComparison out;
  for (const auto& o : path) {
    GeodesicState c = cf.at(o.t);
    out.position = std::max(out.position, dev(c.position - o.position));
    out.body = std::max(out.body, dev(c.body - o.body));
    out.speed_drift = std::max(out.speed_drift, std::abs(alg.inner(o.body, o.body) - q0));
    // The first integrals are read at the identity-based geodesic.
    GeodesicState local = o;
    if (!ivp.base.isZero(0)) {
      local = left_translate(alg, Vec<Real>(-ivp.base), o);
    }
    out.integral_drift = std::max({out.integral_drift, dev(z_first_integral(ctx, local) - ivp.z0),
                                   dev(v_first_integral(ctx, local) - ivp.v0)});
    ++out.samples;
  }
  return out;
}

}  // namespace nilgeo
