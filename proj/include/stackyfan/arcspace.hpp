#pragma once

// Torus orbits of twisted arcs, labelled by lattice points of the support:
// closure order, cylinder measures, contact orders and the truncated motivic
// integral summed orbit by orbit. The variable q stands for uv.

#include "stackyfan/qseries.hpp"
#include "stackyfan/stacky.hpp"

#include <utility>
#include <vector>

namespace stackyfan {

struct OrbitLabel {
  LatticeVector w;
  FractionalDecomposition decomposition;
};

/// Throws OutsideSupport.
OrbitLabel orbit_label(const StackyFan &sfan, const LatticeVector &w);

/// E = sum beta_i D_i on the stack.
class StackDivisor {
public:
  StackDivisor() = default;
  explicit StackDivisor(std::vector<Rational> coefficients) : beta_(std::move(coefficients)) {}
  const std::vector<Rational> &coefficients() const { return beta_; }
  std::size_t size() const { return beta_.size(); }
  /// Kawamata log terminal: every beta_i < 1.
  bool is_klt() const;
  bool operator==(const StackDivisor &) const = default;

private:
  std::vector<Rational> beta_;
};

/// beta_i = a_i alpha_i
StackDivisor pullback_divisor(const StackyFan &sfan, const std::vector<Rational> &alpha);
/// lambda(b_i) = -beta_i
PiecewiseQLinear divisor_to_pl(const StackDivisor &e);

Rational contact_order(const StackyFan &sfan, const StackDivisor &e, const OrbitLabel &w);
/// dim sigma({w}) - psi({w}); checked against psi(iota({w})).
Rational shift_function(const StackyFan &sfan, const OrbitLabel &w);
/// (q - 1)^d q^(-psi(w) + psi({w}) - dim sigma({w}))
FracPoly orbit_measure(const StackyFan &sfan, const OrbitLabel &w);

/// Whether orbit(w) lies in the closure of orbit(v).
bool closure_leq(const StackyFan &sfan, const LatticeVector &v, const LatticeVector &w);

struct OrbitPoset {
  /// Ascending psi, ties lexicographic.
  std::vector<OrbitLabel> labels;
  /// Every related pair (i, j), i.e. labels[i] <= labels[j], reflexive pairs included.
  std::vector<std::pair<int, int>> relations;
  /// Transitive reduction of `relations`.
  std::vector<std::pair<int, int>> covers;
};

/// Labels with psi(w) <= bound. Throws std::logic_error if the relation fails to
/// be a partial order.
OrbitPoset orbit_poset(const StackyFan &sfan, const Rational &bound);

/// Partial motivic integral over labels with psi(w) + lambda(w) <= bound, as a
/// series in x = 1/q. Coefficients at x-exponents <= bound - d are exact.
/// Throws NotKLT.
TruncatedSeries gamma_truncated_direct(const StackyFan &sfan, const StackDivisor &e, const Rational &bound);

} // namespace stackyfan
