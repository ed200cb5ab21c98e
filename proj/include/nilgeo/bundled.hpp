#pragma once

// Example algebras shipped with the library.

#include "nilgeo/algebra.hpp"

#include <string>
#include <vector>

namespace nilgeo {

/// Heisenberg algebra on (e1, e2, z), [e1, e2] = z, with diagonal Gram entries.
ExactAlgebra heisenberg3(int s1, int s2, int sz);

/// Heisenberg algebra with a null center: basis (u, v, e), <u,v> = 1,
/// <e,e> = 1, [e, v] = u.
ExactAlgebra heisenberg3_null_center();

/// Quaternionic Heisenberg algebra on (u1, u2, z, v1, v2, e1, e2) with
/// <z,z> = eps, <e_a,e_a> = ebar_a.
ExactAlgebra quaternionic7(int eps, int ebar1, int ebar2);

/// Flat group with brackets into U and no E part: (u1, u2, z, v1, v2),
/// [v1, v2] = u1, <u_i,v_j> = delta_ij, <z,z> = 1.
ExactAlgebra flat_u_group();

ExactAlgebra abelian(int n);

/// Complex Heisenberg algebra viewed as a real 6-dimensional algebra, with a
/// Lorentzian center: (x1, x2, y1, y2, z1, z2).
ExactAlgebra complex_heisenberg6();

/// Names accepted by bundled_algebra(); quaternionic7 takes a sign suffix
/// such as "quaternionic7:+-+" (eps, ebar1, ebar2), abelian takes "abelian-N".
std::vector<std::string> bundled_names();

MetricAlgebra bundled_algebra(const std::string& name);

}  // namespace nilgeo
