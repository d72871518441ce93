#pragma once

// Stacky refinements, stellar subdivision and the transfer of weighted
// functionals along a refinement.

#include "stackyfan/deltainv.hpp"
#include "stackyfan/stacky.hpp"

#include <optional>
#include <vector>

namespace stackyfan {

struct IntegralityCertificate {
  /// Minimal coarse cone containing the fine ray.
  Cone coarse_cone;
  /// Integer coefficients of the fine b over the coarse b_j of `coarse_cone`.
  std::vector<Integer> coefficients;
};

struct RefinementWitness {
  /// For each maximal cone of the fine fan, the index of a coarse maximal cone containing it.
  std::vector<int> cone_map;
  /// One per fine ray.
  std::vector<IntegralityCertificate> certificates;
};

/// Witness that `fine` refines `coarse` as stacky fans, or nullopt. Support
/// equality is checked on lattice points with psi <= d + 1 on either side.
/// Throws RankMismatch.
std::optional<RefinementWitness> is_stacky_refinement(const StackyFan &fine, const StackyFan &coarse);

/// Star subdivision at the ray through w with b = multiplicity * primitive(w).
/// If that ray already exists only its weight is replaced (nothing changes when
/// the weight agrees). Throws NotInSupport, IntegralityFailure.
StackyFan stellar_subdivide(const StackyFan &sfan, const LatticeVector &w, const Integer &multiplicity);

/// lambda'(b_i) = lambda(b_i) + psi_coarse(b_i) - 1 on the fine rays. Throws
/// NotARefinement, LambdaNotKLT, TransferNotKLT.
PiecewiseQLinear transfer_lambda(const StackyFan &coarse, const PiecewiseQLinear &lam, const StackyFan &fine);

/// Whether the weighted delta-vectors of (coarse, lambda) and (fine, lambda') agree.
bool check_invariance(const StackyFan &coarse, const PiecewiseQLinear &lam, const StackyFan &fine);

} // namespace stackyfan
