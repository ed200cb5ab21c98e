#pragma once

// Lattices in N, the fiber and base tori, translated geodesics and period
// spectra.

#include "nilgeo/geodesics.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace nilgeo {

/// Lattice generated by exp(g_1), ..., exp(g_n). The logs must form a
/// canonical generating set: a basis of n whose central members span the
/// center and contain every bracket [g_i, g_j] in their integer span, so that
/// every lattice element is exp(g_1)^k1 ... exp(g_n)^kn in exactly one way.
struct LatticeSpec {
  std::vector<GroupElement<Rational>> generators;  // ambient coordinates
  std::vector<int> central;                        // indices of central generators
  MatQ structure;          // column i*n+j: [g_i, g_j] in generator coordinates
  MatQ central_lattice;    // columns: Z-basis of log(Gamma) in the center
  MatQ projected_lattice;  // columns: pi of the noncentral generators, in V + E
  WittFrame frame;

  int size() const { return static_cast<int>(generators.size()); }
  bool is_central(int i) const;
};

/// Throws NonRationalStructure for float algebras whose constants are not
/// rational, NotABasis, and NotCanonical.
LatticeSpec build_lattice(const MetricAlgebra& alg, const std::vector<VecQ>& generator_logs);
LatticeSpec build_lattice(const ExactAlgebra& alg, const std::vector<VecQ>& generator_logs);
LatticeSpec build_lattice(const ExactAlgebra& alg, const WittFrame& frame,
                          const std::vector<VecQ>& generator_logs);

/// The integer lattice spanned by the ambient basis vectors. Needs integral
/// structure constants.
LatticeSpec standard_lattice(const ExactAlgebra& alg);

struct TorusData {
  int dim_fiber = 0;
  int dim_base = 0;
  MatQ central_lattice;
  MatQ projected_lattice;
  bool fiber_flat = true;  // central planes are always flat
  bool base_flat = true;
  bool nondegenerate_center = true;
};

TorusData torus_data(const ExactAlgebra& alg, const LatticeSpec& lattice);

struct TorusSpectrum {
  std::vector<Rational> squared;  // |<g,g>| for each non-null g, sorted
  std::vector<double> periods;    // square roots, same order
  int null_count = 0;
};

/// Periods |g| of the flat torus R^m / Gamma over all nonzero integer
/// combinations of the columns with coefficients in [-bound, bound].
TorusSpectrum flat_torus_spectrum(const MatQ& lattice_vectors, const MatQ& gram, int bound);

struct PeriodRecord {
  Rational omega_sq;  // exact omega^2
  double omega = 0;
  GroupElement<Rational> phi;
  std::vector<int> exponents;
  CausalCharacter causal = CausalCharacter::Timelike;
  bool distinguished = false;
  bool central = false;
  VecQ class_key;  // log phi reduced modulo the conjugation lattice
};

struct PeriodSpectrum {
  std::vector<PeriodRecord> records;
  int null_count = 0;         // q = 0: translation vectors without a period
  int non_translating = 0;    // elements left out because they translate no geodesic
  int bound = 0;
};

/// Enumerates exp(g_1)^k1 ... exp(g_n)^kn with |k_i| <= bound. Requires
/// [n,n] inside U and E = 0 (FlatCaseOnly). Elements that translate no
/// geodesic are counted, not recorded.
PeriodSpectrum flat_group_spectrum(const ExactAlgebra& alg, const LatticeSpec& lattice, int bound);

/// Periods omega* of the geodesics exp(xi) exp(t (a' + x*) / omega*) that
/// each enumerated element translates (when x* is orthogonal to [x*, n] and
/// a' + x* is not null). Works for any lattice; every record is distinguished.
PeriodSpectrum translated_spectrum(const ExactAlgebra& alg, const LatticeSpec& lattice, int bound);

/// Calls f(exponents, log phi) for every nonidentity element
/// exp(g_1)^k1 ... exp(g_n)^kn with |k_i| <= bound, in a fixed order.
void enumerate_lattice(const ExactAlgebra& alg, const LatticeSpec& lattice, int bound,
                       const std::function<void(const std::vector<int>&, const VecQ&)>& f);

/// 2<u*,v*> + <z*,z*> for log phi = u* + z* + v*.
Rational flat_period_form(const ExactAlgebra& alg, const WittFrame& frame, const VecQ& phi_log);

/// Unit-speed geodesic from the identity translated by phi in the flat case:
/// velocity (u* - ad-dagger_{v*} v* / 2 + z* + v*) / omega, in adapted
/// coordinates of ctx.
GeodesicIvp flat_translated_ivp(const GeodesicContext& ctx, const ExactAlgebra& alg, const VecQ& phi_log,
                                double omega);

/// The conjugacy class of phi in Gamma is log phi + Z-span{[log phi, g_i]};
/// this returns a canonical representative.
VecQ conjugacy_key(const ExactAlgebra& alg, const LatticeSpec& lattice, const VecQ& phi_log);

bool central_in_lattice(const ExactAlgebra& alg, const LatticeSpec& lattice, const VecQ& phi_log);

/// omega with v* = omega v0 (adapted or ambient, consistently), nullopt for
/// v* = 0. InconsistentRatio when v* is not a positive multiple of v0.
std::optional<double> simple_period_v(const Vec<Real>& v_star, const Vec<Real>& v0, double tol = 1e-9);

struct TranslatedGeodesic {
  VecQ a_star, x_star;  // U + Z and V + E parts of log phi (ambient)
  VecQ a_prime;
  VecQ xi;
  VecQ direction;       // a' + x*
  Rational norm_sq;     // <a' + x*, a' + x*>
  double omega_star = 1;
  bool null = false;
  bool u_components_coincide = true;
};

/// gamma(t) = exp(xi) exp(t (a' + x*) / omega*). PerpConditionFailed unless
/// <x*, [x*, n]> = 0; NoXiSolution if a* has no component orthogonal to
/// [x*, n] (possible only for a degenerate [x*, n]).
TranslatedGeodesic translated_geodesic(const ExactAlgebra& alg, const WittFrame& frame, const VecQ& phi_log);

/// The geodesic above as an IVP in adapted coordinates of ctx.
GeodesicIvp translated_ivp(const GeodesicContext& ctx, const TranslatedGeodesic& tg);

/// Largest |log(phi gamma(t)) - log gamma(t + omega)| over the sample times,
/// with phi in adapted coordinates.
Real translation_defect(const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp, Real omega,
                        const std::vector<Real>& times);

/// Ten sample times spread over [0, 2 omega].
std::vector<Real> translation_sample_times(Real omega);

bool direct_translation_check(const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp,
                              Real omega, double tol = 1e-8);

struct TranslationCriterion {
  bool endpoint = false;   // gamma(omega) = phi gamma(0)
  bool fixes = false;      // e^{omega J} fixes e0 + y1 + J^-1 y2
  bool x_star = false;     // x* = omega x1 + omega^2 y1 / 2
  bool holds() const { return endpoint && fixes && x_star; }
  Real s_x_star = 0;       // |S x*|, not part of the criterion
};

/// The fixed-point criterion for phi to translate gamma by omega, after
/// conjugating phi by gamma(0).
TranslationCriterion translation_criterion(const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp,
                                           Real omega, double tau_fix = 1e-9);

bool translation_check(const GeodesicContext& ctx, const Vec<Real>& phi, const GeodesicIvp& ivp, Real omega,
                       double tau_fix = 1e-9);

struct DistinguishedPeriod {
  VecQ z_star, e_star, z_prime;  // ambient
  Rational norm_sq;              // <z' + e*, z' + e*>
  double omega_star = 1;
  bool null = false;
};

/// Requires U = 0 (DegenerateCenter).
DistinguishedPeriod distinguished_period(const ExactAlgebra& alg, const WittFrame& frame, const VecQ& phi_log);

struct RealDistinguishedPeriod {
  Vec<Real> z_star, e_star, z_prime;  // adapted
  Real norm_sq = 0;
  double omega_star = 1;
  bool null = false;
};

/// Floating-point version for phi in adapted coordinates of ctx: e* below
/// tol (relative) counts as zero and [e*, n] is cut at tau_rank.
RealDistinguishedPeriod distinguished_period(const GeodesicContext& ctx, const Vec<Real>& phi, double tol = 1e-9);

struct PeriodComparison {
  double omega = 0, omega_star = 0, e_star_norm = 0;
  int epsilon = 1;                   // sign of <gamma', gamma'>
  CausalCharacter offset = CausalCharacter::Zero;  // omega z0 - z'
  int predicted = 0;                 // -1: omega < omega*, 0: equal, 1: greater
  int actual = 0;
  bool rule_holds = false;
  bool rule_applicable = false;      // epsilon <z' + e*, z' + e*> > 0
  bool e_star_bound = false;         // |e*| <= omega
  double identity_residual = 0;      // <z'+e*,.> - eps omega^2 - <omega z0 - z',.>
};

/// Compares a verified translating pair (phi, gamma, omega), gamma unit
/// speed, with the distinguished period of phi.
PeriodComparison compare_periods(const GeodesicContext& ctx, const RealDistinguishedPeriod& dp,
                                 const GeodesicIvp& ivp, double omega, double tol = 1e-7);
PeriodComparison compare_periods(const GeodesicContext& ctx, const DistinguishedPeriod& dp, const GeodesicIvp& ivp,
                                 double omega, double tol = 1e-7);

struct SpectrumPartition {
  std::vector<PeriodRecord> fiber;  // phi central in Gamma
  std::vector<PeriodRecord> base;
  std::vector<PeriodRecord> distinguished;
};

SpectrumPartition spectrum_partition(const ExactAlgebra& alg, const LatticeSpec& lattice,
                                     const std::vector<PeriodRecord>& records);

}  // namespace nilgeo
