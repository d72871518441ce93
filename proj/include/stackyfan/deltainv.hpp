#pragma once

// Ehrhart counts, delta-vectors (plain, weighted and mu-twisted), h-vectors,
// Hodge polynomials and the motivic integral Gamma.
//
// Series are computed literally from lattice points; closed forms are sums of
// rational functions over cones. The two are kept independent so that each can
// check the other.

#include "stackyfan/arcspace.hpp"
#include "stackyfan/qseries.hpp"
#include "stackyfan/stacky.hpp"

#include <map>
#include <vector>

namespace stackyfan {

struct EhrhartData {
  /// f_Q(0), ..., f_Q(k)
  std::vector<Integer> counts;
};

/// Lattice points v of the support with psi(v) <= m.
Integer count_lattice_points(const StackyFan &sfan, long long m);
EhrhartData ehrhart_data(const StackyFan &sfan, long long max_m);
/// delta_Q(t) from f_Q(0..d) by the binomial transform.
FracPoly ehrhart_delta(const StackyFan &sfan);

/// Largest level m whose terms can reach exponent `cutoff`: a level-m term has
/// exponent > m (1 - c) - 1 with c = max(0, -min lambda(b_i)).
Integer series_level_bound(const PiecewiseQLinear &lam, const Rational &cutoff);

/// The defining series of delta^lambda summed over levels 1..max_level and
/// truncated at `cutoff`. Throws LambdaNotKLT.
TruncatedSeries weighted_delta_series(const StackyFan &sfan, const PiecewiseQLinear &lam,
                                      const Rational &cutoff, const Integer &max_level);
/// As above with max_level = series_level_bound(lam, cutoff).
TruncatedSeries weighted_delta_series(const StackyFan &sfan, const PiecewiseQLinear &lam,
                                      const Rational &cutoff);

/// Throws LambdaNotKLT.
FracRational h_tau_lambda(const StackyFan &sfan, const Cone &tau, const PiecewiseQLinear &lam);
/// Sum over cones and box elements of the weighted delta-vector. Throws LambdaNotKLT.
FracRational weighted_delta_closed(const StackyFan &sfan, const PiecewiseQLinear &lam);
/// delta(t) = t^d delta(1/t). Throws NotComplete, LambdaNotKLT.
bool check_symmetry(const StackyFan &sfan, const PiecewiseQLinear &lam);

/// Defining series of delta_Q(t; mu) truncated at `cutoff`. Throws NegativeMu.
TruncatedSeries delta_mu_series(const StackyFan &sfan, const PiecewiseQLinear &mu, const Rational &cutoff);
/// Coefficient at integer i = sum of coefficients at exponents in (i - 1, i].
TruncatedSeries bucket_series(const TruncatedSeries &a);

FracPoly h_vector(const Fan &fan);
/// q^r h(1/q)
FracPoly hodge_polynomial_toric(const Fan &fan);

/// q^d delta^lambda(1/q) with lambda = divisor_to_pl(e). Throws NotKLT.
FracRational gamma(const StackyFan &sfan, const StackDivisor &e);
/// Coefficients of Gamma(X, 0), keyed by q-exponent.
std::map<Rational, Integer> orbifold_betti(const StackyFan &sfan);

} // namespace stackyfan
