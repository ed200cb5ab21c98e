#ifndef NILGEO_H
#define NILGEO_H

/* C interface to the nilgeo library. Objects are opaque handles; results
 * that are not plain numbers come back as JSON strings owned by the caller
 * (release with nilgeo_string_free). Every function returns a status; on
 * failure nilgeo_last_error() describes the problem for the calling thread. */

#include <stddef.h>

#if defined(_WIN32)
#define NILGEO_API __declspec(dllexport)
#else
#define NILGEO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nilgeo_status {
  NILGEO_OK = 0,
  NILGEO_ERR_DIMENSION_MISMATCH,
  NILGEO_ERR_INVALID_ALGEBRA,
  NILGEO_ERR_SINGULAR_GRAM,
  NILGEO_ERR_DEGENERATE_FORM,
  NILGEO_ERR_NONCENTRAL_ARGUMENT,
  NILGEO_ERR_NONORTHOGONAL_KERNEL_SPLIT,
  NILGEO_ERR_SINGULAR_J_ON_E2,
  NILGEO_ERR_DEGENERATE_CENTER,
  NILGEO_ERR_STEP_SIZE_UNDERFLOW,
  NILGEO_ERR_CAUSAL_INCONSISTENCY,
  NILGEO_ERR_NON_RATIONAL_STRUCTURE,
  NILGEO_ERR_NOT_A_BASIS,
  NILGEO_ERR_NOT_CANONICAL,
  NILGEO_ERR_FLAT_CASE_ONLY,
  NILGEO_ERR_PERP_CONDITION_FAILED,
  NILGEO_ERR_NO_XI_SOLUTION,
  NILGEO_ERR_INCONSISTENT_RATIO,
  NILGEO_ERR_PARSE,
  NILGEO_ERR_SCHEMA,
  NILGEO_ERR_INVALID_ARGUMENT,
  NILGEO_ERR_INTERNAL
} nilgeo_status;

typedef struct nilgeo_options {
  double tau_null;     /* null classification in float mode, default 1e-9 */
  double tau_rank;     /* relative SVD cut for ker J, default 1e-10 */
  double tau_fix;      /* translation criterion, default 1e-9 */
  double ode_abs_tol;  /* oracle tolerances, default 1e-16 */
  double ode_rel_tol;
  double compare_tol;  /* closed form vs oracle and direct checks, default 1e-8 */
  unsigned long long seed; /* random sweeps, default 20240611 */
} nilgeo_options;

typedef struct nilgeo_algebra nilgeo_algebra;
typedef struct nilgeo_lattice nilgeo_lattice;

NILGEO_API void nilgeo_options_default(nilgeo_options* opt);
NILGEO_API const char* nilgeo_status_string(nilgeo_status s);
NILGEO_API const char* nilgeo_last_error(void);
NILGEO_API void nilgeo_string_free(char* s);

/* Algebras. */
NILGEO_API nilgeo_status nilgeo_algebra_from_json(const char* text, nilgeo_algebra** out);
NILGEO_API nilgeo_status nilgeo_algebra_bundled(const char* name, nilgeo_algebra** out);
NILGEO_API void nilgeo_algebra_free(nilgeo_algebra* alg);
NILGEO_API int nilgeo_algebra_dim(const nilgeo_algebra* alg);
NILGEO_API int nilgeo_algebra_is_exact(const nilgeo_algebra* alg);
NILGEO_API nilgeo_status nilgeo_algebra_to_json(const nilgeo_algebra* alg, char** out);
NILGEO_API nilgeo_status nilgeo_bundled_names(char** out);

/* [x, y] and <x, y> in ambient coordinates; arrays have length dim. */
NILGEO_API nilgeo_status nilgeo_bracket(const nilgeo_algebra* alg, const double* x, const double* y, double* out);
NILGEO_API nilgeo_status nilgeo_inner(const nilgeo_algebra* alg, const double* x, const double* y, double* out);

/* Structural checks; *ok is 1 when the algebra is a valid 2-step metric
 * nilpotent algebra. */
NILGEO_API nilgeo_status nilgeo_validate(const nilgeo_algebra* alg, int* ok, char** report);
NILGEO_API nilgeo_status nilgeo_decompose(const nilgeo_algebra* alg, char** frame);

/* Basis-pair curvature table (adapted or ambient basis) plus flatness flags. */
NILGEO_API nilgeo_status nilgeo_curvature(const nilgeo_algebra* alg, int adapted, char** out);

/* Geodesic with the IVP given as JSON ({"velocity", "base"?, "coords"?}),
 * sampled at the given times (closed form). With compare_oracle != 0 the
 * independent numerical solution is reported alongside, and *breach is set
 * when the deviation exceeds opt->compare_tol. opt and breach may be NULL. */
NILGEO_API nilgeo_status nilgeo_geodesic(const nilgeo_algebra* alg, const char* ivp, const double* times,
                                         size_t n_times, int compare_oracle, const nilgeo_options* opt,
                                         int* breach, char** out);

/* Closed form against the oracle for n_ivps seeded random IVPs on a
 * Chebyshev grid of n_samples points in [0, t_end]. */
NILGEO_API nilgeo_status nilgeo_compare(const nilgeo_algebra* alg, int n_ivps, double t_end, int n_samples,
                                        const nilgeo_options* opt, int* breach, char** out);

/* Lattices. The generator JSON is {"generators": [[...], ...]}. */
NILGEO_API nilgeo_status nilgeo_lattice_from_json(const nilgeo_algebra* alg, const char* text,
                                                  nilgeo_lattice** out);
NILGEO_API nilgeo_status nilgeo_lattice_standard(const nilgeo_algebra* alg, nilgeo_lattice** out);
NILGEO_API void nilgeo_lattice_free(nilgeo_lattice* lat);
NILGEO_API nilgeo_status nilgeo_lattice_to_json(const nilgeo_lattice* lat, char** out);

/* Fiber and base tori, with their flat-torus spectra up to bound when the
 * restricted inner product is nondegenerate. */
NILGEO_API nilgeo_status nilgeo_torus(const nilgeo_lattice* lat, int bound, char** out);

/* Period records over exponent vectors with |k_i| <= bound. flat_case
 * selects the complete flat-group computation; otherwise the periods of the
 * translated one-parameter geodesics are listed. Each record is certified by
 * the direct translation check; *breach is set if any fails. partition adds
 * the fiber/base split. */
NILGEO_API nilgeo_status nilgeo_spectrum(const nilgeo_lattice* lat, int bound, int flat_case, int partition,
                                         const nilgeo_options* opt, int* breach, char** out);

/* The geodesic translated by exp(phi) (phi given as a JSON array). */
NILGEO_API nilgeo_status nilgeo_translated_geodesic(const nilgeo_lattice* lat, const char* phi, char** out);

#ifdef __cplusplus
}
#endif

#endif
