#pragma once

// Exact linear algebra and simplicial fans.
//
// Scalars are GMP-backed multiprecision numbers; vectors and matrices are Eigen
// dense types over those scalars. Nothing in this library touches floating point.

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace stackyfan {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using LatticeVector = Vector<Integer>;
using RationalVector = Vector<Rational>;
using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

enum class ErrorKind {
  OutsideSupport,
  NotInSpan,
  NotMaximalCone,
  DivisionByZero,
  NoExpansionAtZero,
  NotKLT,
  LambdaNotKLT,
  NotComplete,
  NegativeMu,
  RankMismatch,
  NotInSupport,
  IntegralityFailure,
  NotARefinement,
  TransferNotKLT,
  InvalidArgument,
  Overflow,
  ParseError,
  ValidationError,
};

// Domain error carrying a machine-readable kind. The message is what the CLI
// prints after "error: ".
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

// ---------------------------------------------------------------------------
// Scalars

Integer floor_of(const Rational &x);
Integer ceil_of(const Rational &x);
bool is_integral(const Rational &x);
Integer gcd_of(const Integer &a, const Integer &b);
Integer lcm_of(const Integer &a, const Integer &b);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational &x);
/// Parses "p", "-p" or "p/q".
Rational parse_rational(const std::string &text);

// ---------------------------------------------------------------------------
// Vectors

LatticeVector lattice_vector(std::initializer_list<long long> coords);
RationalVector rational_vector(std::initializer_list<Rational> coords);
RationalVector to_rational(const LatticeVector &v);
/// Integer vector if every entry is integral.
std::optional<LatticeVector> to_lattice(const RationalVector &v);
bool lex_less(const LatticeVector &a, const LatticeVector &b);
Integer content(const LatticeVector &v);
bool is_primitive(const LatticeVector &v);
/// "(1,0,-2)"
std::string to_string(const LatticeVector &v);
std::string to_string(const RationalVector &v);

inline bool equal(const LatticeVector &a, const LatticeVector &b) {
  return a.size() == b.size() && a == b;
}

// ---------------------------------------------------------------------------
// Linear algebra

/// Row echelon form by fraction-free (Bareiss) elimination, in place.
/// Scalar must support exact division. Returns the pivot columns; the sign of
/// the determinant flips once per row swap, recorded in `swaps`.
template <typename Scalar>
std::vector<Eigen::Index> fraction_free_echelon(Matrix<Scalar> &m, int *swaps = nullptr) {
  std::vector<Eigen::Index> pivots;
  Scalar previous(1);
  Eigen::Index row = 0;
  int nswaps = 0;
  for (Eigen::Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Eigen::Index p = row;
    while (p < m.rows() && m(p, col) == 0)
      ++p;
    if (p == m.rows())
      continue;
    if (p != row) {
      m.row(p).swap(m.row(row));
      ++nswaps;
    }
    for (Eigen::Index r = row + 1; r < m.rows(); ++r) {
      for (Eigen::Index c = col + 1; c < m.cols(); ++c)
        m(r, c) = (m(row, col) * m(r, c) - m(r, col) * m(row, c)) / previous;
      m(r, col) = 0;
    }
    previous = m(row, col);
    pivots.push_back(col);
    ++row;
  }
  if (swaps)
    *swaps = nswaps;
  return pivots;
}

/// Determinant of a square matrix by Bareiss elimination.
template <typename Scalar>
Scalar bareiss_determinant(Matrix<Scalar> m) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::InvalidArgument, "determinant of a non-square matrix");
  if (m.rows() == 0)
    return Scalar(1);
  int swaps = 0;
  auto pivots = fraction_free_echelon(m, &swaps);
  if (static_cast<Eigen::Index>(pivots.size()) < m.rows())
    return Scalar(0);
  Scalar det = m(m.rows() - 1, m.cols() - 1);
  return swaps % 2 ? Scalar(-det) : det;
}

template <typename Scalar>
Eigen::Index rank_of(Matrix<Scalar> m) {
  return static_cast<Eigen::Index>(fraction_free_echelon(m).size());
}

/// Exact solution of matrix * x = rhs, or nullopt when inconsistent. Free
/// variables of an underdetermined system are set to zero.
std::optional<RationalVector> solve_rational_system(const RationalMatrix &matrix,
                                                    const RationalVector &rhs);

/// |det| of the square matrix whose columns are `vectors`.
Integer determinant_abs(std::span<const LatticeVector> vectors);
Integer determinant_abs(const IntegerMatrix &columns);

/// Columns of `vectors` as a matrix.
IntegerMatrix column_matrix(std::span<const LatticeVector> vectors);

/// Whether {x >= 0 : matrix * x = rhs} is nonempty (exact phase-one simplex).
bool has_nonnegative_solution(const RationalMatrix &matrix, const RationalVector &rhs);

/// Exact coordinates with respect to a linearly independent set of generators.
/// Coordinates are returned as integer numerators over a common positive
/// denominator, which keeps the lattice scans in integer arithmetic.
class ConeFrame {
public:
  /// Throws InvalidArgument when the columns are linearly dependent.
  explicit ConeFrame(IntegerMatrix generators);

  Eigen::Index rank() const { return generators_.rows(); }
  Eigen::Index size() const { return generators_.cols(); }
  const IntegerMatrix &generators() const { return generators_; }

  /// numerators() * v / denominator() is the coordinate vector of v whenever v
  /// lies in the span; rows are indexed by generator.
  const IntegerMatrix &numerators() const { return numerators_; }
  const Integer &denominator() const { return denominator_; }

  std::optional<RationalVector> coordinates(const RationalVector &v) const;
  /// Integer numerators of the coordinates of v, or nullopt if v is not in the span.
  std::optional<LatticeVector> scaled_coordinates(const LatticeVector &v) const;

private:
  IntegerMatrix generators_;
  IntegerMatrix numerators_;
  Integer denominator_;
};

// ---------------------------------------------------------------------------
// Cones and fans

/// A cone of a simplicial fan, named by its sorted ray indices. The empty index
/// set is the zero cone.
struct Cone {
  std::vector<int> rays;

  Cone() = default;
  explicit Cone(std::vector<int> indices);
  Cone(std::initializer_list<int> indices) : Cone(std::vector<int>(indices)) {}

  int dim() const { return static_cast<int>(rays.size()); }
  bool is_zero() const { return rays.empty(); }
  bool contains_ray(int i) const;
  bool is_face_of(const Cone &other) const;
  std::vector<Cone> faces() const;

  auto operator<=>(const Cone &) const = default;
  bool operator==(const Cone &) const = default;
};

/// "{0,2}"
std::string to_string(const Cone &cone);
/// Cone spanned by the union of the two ray sets.
Cone join(const Cone &a, const Cone &b);

enum class SupportKind { complete, convex, general };
std::string to_string(SupportKind kind);

class Fan {
public:
  /// Stores the cones as given (sorted, deduplicated); nothing is validated.
  Fan(int rank, std::vector<LatticeVector> rays, std::vector<Cone> cones, SupportKind support);

  /// Closes `maximal` under taking faces.
  static Fan generated_by(int rank, std::vector<LatticeVector> rays,
                          const std::vector<Cone> &maximal, SupportKind support);

  int rank() const { return rank_; }
  const std::vector<LatticeVector> &rays() const { return rays_; }
  const LatticeVector &ray(int i) const { return rays_[static_cast<std::size_t>(i)]; }
  int num_rays() const { return static_cast<int>(rays_.size()); }
  const std::vector<Cone> &cones() const { return cones_; }
  SupportKind support() const { return support_; }

  bool has_cone(const Cone &cone) const;
  /// Cones not properly contained in another cone, in canonical order.
  const std::vector<Cone> &maximal_cones() const { return maximal_; }
  std::vector<Cone> cones_of_dim(int dim) const;
  IntegerMatrix generators(const Cone &cone) const;
  /// Frame for the ray generators of a cone of the fan; nullptr when the cone is
  /// not simplicial.
  const ConeFrame *frame(const Cone &cone) const;

private:
  int rank_;
  std::vector<LatticeVector> rays_;
  std::vector<Cone> cones_;
  std::vector<Cone> maximal_;
  std::vector<std::optional<ConeFrame>> frames_;
  SupportKind support_;
};

struct Violation {
  enum class Kind {
    BadRank,
    BadRay,
    NotPrimitive,
    DuplicateRay,
    BadCone,
    NotSimplicial,
    MissingFace,
    ImproperIntersection,
    NotPure,
    NoFullCone,
    BoundaryFacet,
    NotConvex,
  };
  Kind kind;
  std::vector<int> indices;
  std::string message;
};
using ValidationReport = std::vector<Violation>;

/// Every violated fan invariant; empty iff the fan is valid.
ValidationReport validate_fan(const Fan &fan);

/// The cone containing v in its relative interior. Throws OutsideSupport.
Cone minimal_containing_cone(const Fan &fan, const RationalVector &v);
/// Coordinates of v with respect to the cone's ray generators. Throws NotInSpan.
RationalVector cone_coordinates(const Fan &fan, const Cone &cone, const RationalVector &v);

} // namespace stackyfan
