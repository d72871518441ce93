#pragma once

// Test support: fixture loading, random stacky fans and brute-force oracles.
//
// The oracles enumerate a whole integer cube and locate points by solving one
// linear system per maximal cone, so they share nothing with the library's
// lattice scanner or its closed formulas.

#include "stackyfan/arcspace.hpp"
#include "stackyfan/deltainv.hpp"
#include "stackyfan/document.hpp"
#include "stackyfan/qseries.hpp"
#include "stackyfan/refine.hpp"
#include "stackyfan/stacky.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace stackyfan::testing {

std::string read_text(const std::string &path);
std::string data_path(const std::string &file);
std::string golden_path(const std::string &file);

/// "fan_a1", "fan_p1", "fan_p2", "fan_p12", "fan_p112", ...
FanDocument fixture_document(const std::string &name);
StackyFan fixture(const std::string &name);
const std::vector<std::string> &named_fixtures();

Rational r(long long p, long long q = 1);
FracPoly t(const Rational &e, const Rational &c = Rational(1));
LatticeVector lv(std::initializer_list<long long> coords);
PiecewiseQLinear functional(std::initializer_list<Rational> values);

// ---------------------------------------------------------------------------
// Oracles

struct Located {
  Cone cone;         // minimal cone
  RationalVector q;  // b-coordinates over the rays of `cone`
};

/// Minimal cone and b-coordinates by solving against every maximal cone.
std::optional<Located> oracle_locate(const StackyFan &sfan, const LatticeVector &v);
/// Every support point in the cube |v|_inf <= radius with psi(v) <= bound.
std::vector<std::pair<LatticeVector, Located>> oracle_points(const StackyFan &sfan, const Rational &bound);
long long oracle_count(const StackyFan &sfan, long long m);
/// BOX(tau) by cube scan, sorted lexicographically.
std::vector<LatticeVector> oracle_box(const StackyFan &sfan, const Cone &tau);
/// The defining series of delta^lambda with every level 1..levels written out.
TruncatedSeries oracle_weighted_delta(const StackyFan &sfan, const PiecewiseQLinear &lam, const Rational &cutoff,
                                      long long levels);
/// Closure order by searching non-negative integer combinations cone by cone.
bool oracle_closure(const StackyFan &sfan, const LatticeVector &v, const LatticeVector &w);

// ---------------------------------------------------------------------------
// Random data

enum class RandomKind { complete, convex };

struct RandomFan {
  StackyFan sfan;
  std::string description;
};

/// rank in 1..3. Fans whose group orders have lcm above `max_grid` are redrawn.
RandomFan random_stacky_fan(std::mt19937_64 &rng, int rank, RandomKind kind, long long max_grid = 12);
/// Complete rank-2 fan with weights in 1..3.
StackyFan random_complete_rank2(std::mt19937_64 &rng);
/// Values in (-1, 2] with denominators <= 4.
PiecewiseQLinear random_admissible_lambda(std::mt19937_64 &rng, int num_rays);
/// klt divisor: beta_i in [-1, 1) with denominators <= 4.
StackDivisor random_klt_divisor(std::mt19937_64 &rng, int num_rays);
/// Lattice point in the relative interior of a random cone of dimension >= 2, or
/// nullopt when the fan has none.
std::optional<LatticeVector> random_interior_point(std::mt19937_64 &rng, const StackyFan &sfan);

/// lcm of |N(sigma)| over maximal cones.
Integer group_order_lcm(const StackyFan &sfan);

} // namespace stackyfan::testing

namespace stackyfan::testing {

struct GoldenCase {
  std::string file;               // under tests/golden
  std::vector<std::string> args;  // program name first, data files resolved
};

/// Cases listed in tests/golden/cases.txt. Each line is "<file> <args...>";
/// an argument "@name" stands for tests/data/name.
std::vector<GoldenCase> golden_cases();
/// "[exit N]\n" followed by stdout and stderr.
std::string golden_text(const GoldenCase &c);

} // namespace stackyfan::testing
