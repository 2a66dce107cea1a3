#pragma once

#include "pchbv/actions.hpp"

namespace pchbv {

/// Integration-by-parts split of a varied first-order density: the bulk
/// part keeps every variation undifferentiated, the boundary part is the
/// collected content of the exact terms (a bulk 3-form expression to be
/// restricted to the face).  Exactly:
///
///   integral_box(vary(S)) = integral_box(el) + integral_face(boundary)
///
/// for every configuration and payload with the matching support mode.
struct NoetherSplit {
    ExprPtr el_density;
    ExprPtr boundary_density;
};

NoetherSplit noether_split(const ExprPtr& S_density, int slot);

} // namespace pchbv
