#pragma once

// Stacky fans (N, Sigma, {b_i}) with b_i = a_i v_i, piecewise Q-linear
// functionals, box elements and the lattice-point scanner shared by every
// brute-force count in the library.

#include "stackyfan/core.hpp"

#include <functional>
#include <vector>

namespace stackyfan {

class StackyFan {
public:
  /// Throws InvalidArgument when the weights do not match the rays or are < 1.
  StackyFan(Fan fan, std::vector<Integer> weights);

  const Fan &fan() const { return fan_; }
  const std::vector<Integer> &weights() const { return weights_; }
  int rank() const { return fan_.rank(); }
  int num_rays() const { return fan_.num_rays(); }
  const LatticeVector &b(int i) const { return b_[static_cast<std::size_t>(i)]; }
  const std::vector<LatticeVector> &b_vectors() const { return b_; }
  /// The same cones with the b_i in place of the primitive rays; its frames give
  /// coordinates with respect to the b_i.
  const Fan &b_fan() const { return b_fan_; }

private:
  Fan fan_;
  std::vector<Integer> weights_;
  std::vector<LatticeVector> b_;
  Fan b_fan_;
};

/// A functional on the support, linear on each cone, given by its values on the b_i.
class PiecewiseQLinear {
public:
  PiecewiseQLinear() = default;
  explicit PiecewiseQLinear(std::vector<Rational> values_on_b) : values_(std::move(values_on_b)) {}
  static PiecewiseQLinear constant_on_b(int num_rays, const Rational &value) {
    return PiecewiseQLinear(std::vector<Rational>(static_cast<std::size_t>(num_rays), value));
  }

  const std::vector<Rational> &values_on_b() const { return values_; }
  const Rational &at_b(int i) const { return values_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return values_.size(); }
  bool operator==(const PiecewiseQLinear &) const = default;

private:
  std::vector<Rational> values_;
};

/// psi with psi(b_i) = 1.
PiecewiseQLinear psi_functional(const StackyFan &sfan);

struct BoxElement {
  LatticeVector point;
  Cone cone;
  /// Coordinates with respect to the b_i of `cone`, all in (0,1).
  RationalVector q;
  Integer order{1};

  bool is_zero() const { return cone.is_zero(); }
};

BoxElement zero_box_element(int rank);

struct FractionalDecomposition {
  LatticeVector w;
  /// sigma(w)
  Cone cone;
  BoxElement box_part;
  /// floor of the b-coordinates of w, indexed by the rays of sigma(w)
  std::vector<Integer> shifts;
};

/// Coordinates of v with respect to the b_i of sigma(v). Throws OutsideSupport.
RationalVector b_coordinates(const StackyFan &sfan, const Cone &cone, const RationalVector &v);

Rational psi(const StackyFan &sfan, const RationalVector &v);
Rational psi(const StackyFan &sfan, const LatticeVector &v);
/// Throws InvalidArgument when the functional has the wrong number of values.
Rational eval_pl(const StackyFan &sfan, const PiecewiseQLinear &f, const RationalVector &v);
Rational eval_pl(const StackyFan &sfan, const PiecewiseQLinear &f, const LatticeVector &v);

/// BOX(tau), sorted lexicographically by point. The zero cone gives {0}.
std::vector<BoxElement> box_elements(const StackyFan &sfan, const Cone &tau);
/// Union over all cones in canonical cone order.
std::vector<BoxElement> box_all(const StackyFan &sfan);
BoxElement iota(const StackyFan &sfan, const BoxElement &e);
Rational age(const BoxElement &e);
Integer element_order(const BoxElement &e);
/// |det b_i| over a d-dimensional cone. Throws NotMaximalCone.
Integer group_order(const StackyFan &sfan, const Cone &sigma);
/// w = {w} + sum shifts_i b_i. Throws OutsideSupport.
FractionalDecomposition fractional_decompose(const StackyFan &sfan, const LatticeVector &w);
/// Lattice points sum q_i b_i with 0 < q_i <= n, sorted lexicographically.
std::vector<LatticeVector> box_bar_n(const StackyFan &sfan, const Cone &tau, long long n);

/// A lattice point of the support with its minimal cone and b-coordinates.
struct SupportPoint {
  const LatticeVector &point;
  const Cone &cone;
  const RationalVector &q;
};

/// Visits every lattice point v of the support with sum_i cost_i q_i <= bound,
/// where q are the b-coordinates of v in sigma(v). Every cost must be positive.
/// Each point is visited once; the order is by owning maximal cone, then by
/// coordinates.
void for_each_support_point(const StackyFan &sfan, const std::vector<Rational> &costs,
                            const Rational &bound,
                            const std::function<void(const SupportPoint &)> &visit);

/// Lattice points with psi(v) <= bound, ascending by psi then lexicographically.
std::vector<LatticeVector> support_points(const StackyFan &sfan, const Rational &bound);

} // namespace stackyfan
