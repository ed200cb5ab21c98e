#pragma once

// Geodesics of the left-invariant metric. Everything here works in the
// adapted coordinates of a normalized Witt frame (u, z, v, e blocks), in
// long double.

#include "nilgeo/decomposition.hpp"
#include "nilgeo/quadrature.hpp"

#include <random>
#include <vector>

namespace nilgeo {

/// gamma(0) = exp(base); the velocity u0 + z0 + v0 + e0 is the left
/// translate to the identity of gamma'(0). All vectors are full-length
/// adapted coordinates, each supported in its own block.
struct GeodesicIvp {
  Vec<Real> base;
  Vec<Real> u0, z0, v0, e0;

  Vec<Real> velocity() const { return u0 + z0 + v0 + e0; }
};

struct GeodesicState {
  Real t = 0;
  Vec<Real> position;  // log gamma(t)
  Vec<Real> velocity;  // d/dt log gamma(t)
  Vec<Real> body;      // left translate of gamma'(t) to the identity
};

/// The algebra in adapted coordinates together with the frame that maps
/// them back to the ambient basis.
class GeodesicContext {
 public:
  explicit GeodesicContext(const ExactAlgebra& alg, double tau_rank = kDefaultTauRank);
  GeodesicContext(const ExactAlgebra& alg, const WittFrame& frame, double tau_rank = kDefaultTauRank);

  int dim() const { return algebra_.dim(); }
  const RealAlgebra& algebra() const { return algebra_; }
  /// Identity frame on adapted coordinates.
  const RealFrame& frame() const { return frame_; }
  /// Normalized frame in the ambient basis.
  const RealFrame& ambient_frame() const { return ambient_; }
  double tau_rank() const { return tau_rank_; }
  /// Largest structure constant in adapted coordinates.
  Real bracket_scale() const { return bracket_scale_; }

  Vec<Real> to_adapted(const Vec<Real>& ambient) const { return ambient_.coords(ambient); }
  Vec<Real> to_ambient(const Vec<Real>& adapted) const { return ambient_.ambient(adapted); }

  /// Splits an adapted velocity into its blocks; base defaults to the identity.
  GeodesicIvp make_ivp(const Vec<Real>& velocity, const Vec<Real>& base = Vec<Real>()) const;
  Vec<Real> block(const Vec<Real>& x, Part p) const;

  RealJData jdata(const GeodesicIvp& ivp, bool allow_nonorthogonal = false) const;

 private:
  RealAlgebra algebra_;
  RealFrame frame_;
  RealFrame ambient_;
  double tau_rank_;
  Real bracket_scale_ = 0;
};

/// e1, e2: E1/E2 parts of e0; y1, y2: parts of script-J v0;
/// x1 = e1 + v0 - J^-1 y2, x2 = e2 + J^-1 y2.
struct IvpSplit {
  Vec<Real> e1, e2, y1, y2, x1, x2;
};

IvpSplit split_ivp(const GeodesicContext& ctx, const GeodesicIvp& ivp, const RealJData& jd);

/// Matrix exponential of tJ (scaling and squaring with a Pade approximant).
Mat<Real> exp_tj(const Mat<Real>& j, Real t);

/// Closed-form geodesic. Needs an orthogonal E1 + E2 split.
class ClosedFormGeodesic {
 public:
  ClosedFormGeodesic(const GeodesicContext& ctx, GeodesicIvp ivp, QuadratureOptions quad = {});

  GeodesicState at(Real t) const;
  /// x(t) and its derivative, in adapted coordinates.
  Vec<Real> x_at(Real t) const;
  Vec<Real> xdot_at(Real t) const;
  /// The displayed six-term expression plus its residual integral.
  Vec<Real> bracket_integral(Real t) const;
  /// Double integral of S x-dot, as a single weighted integral.
  Vec<Real> s_double_integral(Real t) const;

  const GeodesicIvp& ivp() const { return ivp_; }
  const RealJData& jdata() const { return jd_; }
  const IvpSplit& split() const { return split_; }

 private:
  Vec<Real> embed_e(const Vec<Real>& e) const;
  Vec<Real> e_part(const Vec<Real>& x) const;
  Vec<Real> s_apply(const Vec<Real>& x) const;
  Real noise(Real t, const Vec<Real>& a, const Vec<Real>& b) const;

  GeodesicContext ctx_;
  GeodesicIvp ivp_;
  QuadratureOptions quad_;
  RealJData jd_;
  IvpSplit split_;
  Vec<Real> kx2_, k2x2_, k3x2_, x2e_;  // E coordinates
};

GeodesicState solve_closed_form(const GeodesicContext& ctx, const GeodesicIvp& ivp, Real t,
                                const QuadratureOptions& quad = {});

/// The nondegenerate-center specialization (U = V = 0).
GeodesicState solve_nondegenerate(const GeodesicContext& ctx, const GeodesicIvp& ivp, Real t,
                                  const QuadratureOptions& quad = {});

struct OdeOptions {
  double abs_tol = 1e-16;
  double rel_tol = 1e-16;
  double initial_step = 1e-3;
};

/// Independent numerical solution: state (log gamma, body velocity W) with
/// d/dt log gamma = W - [W, log gamma]/2 and dW/dt = ad-dagger_W W, by an
/// adaptive Runge-Kutta-Fehlberg 7(8) scheme. Returns states at the requested
/// times (any order). Never uses J or the E split.
std::vector<GeodesicState> ode_oracle(const GeodesicContext& ctx, const GeodesicIvp& ivp,
                                      const std::vector<Real>& times, const OdeOptions& opt = {});

/// Causal character of the body velocity, required to be the same at every
/// sample; CausalInconsistency otherwise.
CausalCharacter causal_character_along(const GeodesicContext& ctx, const std::vector<GeodesicState>& path,
                                       double tau_null = kDefaultTauNull);

/// n samples t_k = T/2 (1 - cos(pi k/(n-1))) on [0, T].
std::vector<Real> chebyshev_grid(Real t_end = 10, int n = 33);

/// Left translation of a state: position becomes log(exp(n) gamma(t)).
GeodesicState left_translate(const RealAlgebra& alg, const Vec<Real>& n, const GeodesicState& s);

/// z-dot + [x-dot, x]^Z / 2 and v-dot from a state; both are constant along
/// a geodesic.
Vec<Real> z_first_integral(const GeodesicContext& ctx, const GeodesicState& s);
Vec<Real> v_first_integral(const GeodesicContext& ctx, const GeodesicState& s);

struct OracleComparison {
  Real position = 0;  // max componentwise |closed form - oracle| of log gamma
  Real body = 0;      // same for the body velocity
  Real speed_drift = 0;     // max |<W,W> - <W0,W0>| along the oracle
  Real integral_drift = 0;  // max drift of the Z and V first integrals
  int samples = 0;
};

OracleComparison compare_with_oracle(const GeodesicContext& ctx, const GeodesicIvp& ivp,
                                     const std::vector<Real>& times, const OdeOptions& opt = {});

/// Velocity with independent uniform adapted components in [-range, range].
template <class Rng>
GeodesicIvp random_ivp(const GeodesicContext& ctx, Rng& rng, double range = 1.0) {
  std::uniform_real_distribution<double> d(-range, range);
  Vec<Real> v(ctx.dim());
  for (int i = 0; i < ctx.dim(); ++i) v[i] = d(rng);
  return ctx.make_ivp(v);
}

}  // namespace nilgeo
