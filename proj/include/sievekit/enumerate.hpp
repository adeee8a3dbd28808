#pragma once

#include "sievekit/lattice.hpp"

#include <optional>
#include <vector>

namespace sievekit {

/// Largest dimension the exact oracles accept.
inline constexpr int kOracleMaxDimension = 40;

/// Exact shortest nonzero vector by depth-first enumeration. Among ties the
/// sign-canonical vector with the lexicographically smallest coefficients
/// wins. With `bound` set, only vectors of norm <= bound are searched and
/// EmptyResultError is raised if there are none.
LatticeVector enumerate_svp(const Basis& basis, std::optional<double> bound = std::nullopt);

/// Exact closest lattice vector to `target`; ties broken by lexicographically
/// smallest coefficients.
LatticeVector enumerate_cvp(const Basis& basis, const TargetVector& target);

/// All nonzero lattice vectors of norm <= radius, one representative per
/// +/- pair (sign canonical), sorted by norm then coefficients.
std::vector<LatticeVector> enumerate_short_vectors(const Basis& basis, double radius);

/// Babai nearest-plane rounding of `target`.
LatticeVector babai_nearest_plane(const Basis& basis, const TargetVector& target);

/// lambda_1 by enumeration when d <= kOracleMaxDimension, otherwise the
/// Gaussian heuristic.
Lambda1Estimate lambda1_estimate(const Basis& basis);

}  // namespace sievekit
