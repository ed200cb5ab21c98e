#pragma once

// JSON forms of algebras, frames, IVPs, lattices and results. Scalars are
// written as integers when integral, "p/q" strings when rational, and plain
// numbers in float mode. The formats are described by the schemas in docs/.

#include "nilgeo/curvature.hpp"
#include "nilgeo/lattice.hpp"

#include <json.hpp>

#include <string>

namespace nilgeo {

using Json = nlohmann::json;

/// Parses text; ParseError on malformed JSON.
Json parse_json(const std::string& text);

Rational rational_from_json(const Json& j, bool* inexact = nullptr);
Json rational_to_json(const Rational& q);
VecQ vector_from_json(const Json& j, int dim, bool* inexact = nullptr);
Json vector_to_json(const VecQ& v);
Json real_vector_to_json(const Vec<Real>& v);

/// {"dim", "brackets": [[i, j, [c...]], ...], "gram": [[...]], "labels"?,
/// "mode"?}. Any non-integral JSON number selects float mode unless "mode"
/// says otherwise. SchemaError on structural problems.
MetricAlgebra algebra_from_json(const Json& j);
Json algebra_to_json(const MetricAlgebra& alg);

Json validation_to_json(const ValidationReport& r);
Json frame_to_json(const ExactAlgebra& alg, const WittFrame& f);
Json curvature_table_to_json(const ExactAlgebra& alg, const WittFrame& f, const std::vector<CurvatureRow>& rows,
                             bool adapted);

/// {"velocity": [...], "base"?: [...], "coords"?: "ambient" | "adapted"}, or the
/// adapted blocks {"u0", "z0", "v0", "e0"} in place of "velocity" (missing ones
/// are zero; "coords" then applies to "base" only).
GeodesicIvp ivp_from_json(const GeodesicContext& ctx, const Json& j);
Json ivp_to_json(const GeodesicContext& ctx, const GeodesicIvp& ivp);
/// States in ambient coordinates.
Json state_to_json(const GeodesicContext& ctx, const GeodesicState& s);

/// {"generators": [[...], ...]}.
LatticeSpec lattice_from_json(const MetricAlgebra& alg, const Json& j);
Json lattice_to_json(const LatticeSpec& l);
Json torus_to_json(const TorusData& t);
Json torus_spectrum_to_json(const TorusSpectrum& s);
Json record_to_json(const PeriodRecord& r);
Json spectrum_to_json(const PeriodSpectrum& s);

}  // namespace nilgeo
