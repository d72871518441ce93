#pragma once

// Laurent polynomials, rational functions and truncated power series in one
// variable t whose exponents are rationals on a common 1/N grid.
//
// All algebra happens after the substitution s = t^(1/N), where it becomes
// ordinary univariate algebra over the rationals. Rational functions are kept
// in a canonical form so that equality is structural:
//
//   f = t^a * P(s) / Q(s),  P(0) != 0,  Q(0) > 0,  gcd(P, Q) = 1,
//
// with numerator and denominator scaled to integer coefficients of overall
// content 1. When Q is constant the denominator is 1 and the numerator keeps
// rational coefficients.

#include "stackyfan/core.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stackyfan {

class FracPoly {
public:
  using Terms = std::map<Rational, Rational>;

  FracPoly() = default;
  explicit FracPoly(const Rational &constant);
  static FracPoly monomial(const Rational &coefficient, const Rational &exponent);
  /// 1 - t^k
  static FracPoly one_minus_power(const Rational &k);

  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const Rational &exponent) const;
  /// Lowest and highest exponent; the polynomial must be nonzero.
  const Rational &min_exponent() const;
  const Rational &max_exponent() const;
  /// lcm of exponent denominators (1 for constants and zero).
  Integer grid() const;
  /// Integer non-negative exponents only.
  bool is_polynomial() const;

  void add_term(const Rational &coefficient, const Rational &exponent);

  /// this * t^e
  FracPoly shifted(const Rational &e) const;
  /// t -> t^{-1}
  FracPoly reciprocal_variable() const;
  FracPoly pow(unsigned n) const;
  /// Value at t = 1.
  Rational at_one() const;

  FracPoly &operator+=(const FracPoly &other);
  FracPoly &operator-=(const FracPoly &other);
  friend FracPoly operator+(FracPoly a, const FracPoly &b) { return a += b; }
  friend FracPoly operator-(FracPoly a, const FracPoly &b) { return a -= b; }
  friend FracPoly operator*(const FracPoly &a, const FracPoly &b);
  friend FracPoly operator*(FracPoly a, const Rational &c);
  FracPoly operator-() const;
  bool operator==(const FracPoly &other) const { return terms_ == other.terms_; }

private:
  Terms terms_;
};

FracPoly poly_add(const FracPoly &f, const FracPoly &g);
FracPoly poly_mul(const FracPoly &f, const FracPoly &g);
FracPoly poly_neg(const FracPoly &f);
FracPoly poly_scale(const FracPoly &f, const Rational &c);

class FracRational {
public:
  FracRational() : den_(Rational(1)) {}
  FracRational(const FracPoly &numerator); // NOLINT: polynomials are rational functions
  /// Throws DivisionByZero when the denominator is zero.
  FracRational(const FracPoly &numerator, const FracPoly &denominator);

  const FracPoly &numerator() const { return num_; }
  const FracPoly &denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const;
  Integer grid() const;

  bool operator==(const FracRational &other) const {
    return num_ == other.num_ && den_ == other.den_;
  }

private:
  struct Canonical {};
  FracRational(Canonical, FracPoly num, FracPoly den) : num_(std::move(num)), den_(std::move(den)) {}
  friend FracRational rat_add(const FracRational &, const FracRational &);
  friend FracRational rat_mul(const FracRational &, const FracRational &);

  FracPoly num_;
  FracPoly den_;
};

FracRational rat_add(const FracRational &f, const FracRational &g);
FracRational rat_sub(const FracRational &f, const FracRational &g);
FracRational rat_mul(const FracRational &f, const FracRational &g);
/// Throws DivisionByZero.
FracRational rat_div(const FracRational &f, const FracRational &g);
FracRational rat_neg(const FracRational &f);
/// f * t^e
FracRational rat_shift(const FracRational &f, const Rational &e);

inline FracRational operator+(const FracRational &a, const FracRational &b) { return rat_add(a, b); }
inline FracRational operator-(const FracRational &a, const FracRational &b) { return rat_sub(a, b); }
inline FracRational operator*(const FracRational &a, const FracRational &b) { return rat_mul(a, b); }
inline FracRational operator/(const FracRational &a, const FracRational &b) { return rat_div(a, b); }

/// f(1/t), canonical.
FracRational substitute_reciprocal(const FracRational &f);

/// Coefficients exact at every exponent <= cutoff; nothing above it is stored.
struct TruncatedSeries {
  std::map<Rational, Rational> terms;
  Rational cutoff;

  Rational coefficient(const Rational &exponent) const;
  void add_term(const Rational &coefficient, const Rational &exponent);
  /// Terms of f at exponents <= cutoff.
  static TruncatedSeries from_poly(const FracPoly &f, const Rational &cutoff);
  FracPoly to_poly() const;
};

/// Ascending Laurent expansion up to and including `cutoff`. The canonical
/// form always has a nonzero constant term in the denominator, so every
/// FracRational expands; NoExpansionAtZero is raised only for a zero
/// denominator polynomial handed to the two-argument overload.
TruncatedSeries expand_series(const FracRational &f, const Rational &cutoff);
TruncatedSeries expand_series(const FracPoly &numerator, const FracPoly &denominator,
                              const Rational &cutoff);

/// Exact agreement of all coefficients at exponents <= min(a.cutoff, b.cutoff).
bool series_equal(const TruncatedSeries &a, const TruncatedSeries &b);

/// series * f, truncated at the series cutoff. f must have non-negative
/// exponents, so every kept coefficient is exact.
TruncatedSeries truncated_product(const TruncatedSeries &series, const FracPoly &f);

/// Sum of terms numerator / prod_k (1 - t^k) over a shared denominator. Only the
/// final total is reduced, which keeps sums over many cones to one gcd.
class FactoredSum {
public:
  /// Every exponent in `denominator` must be positive.
  void add(const FracPoly &numerator, std::vector<Rational> denominator);
  FracRational total() const;

private:
  struct Term {
    FracPoly numerator;
    std::map<Rational, int> factors;
  };
  std::vector<Term> terms_;
};

/// Terms ascending by exponent: "1 - t^2 + 1/2*t^{3/2}". Exponents are written
/// with braces only when they are not integers. `var` = "uv" renders powers
/// as "(uv)^2".
std::string render(const FracPoly &f, std::string_view var = "t");
/// "(num)/(den)", or just the numerator when the denominator is 1.
std::string render(const FracRational &f, std::string_view var = "t");
/// "<terms> [exact through t^c]"
std::string render(const TruncatedSeries &s, std::string_view var = "t");
/// The power var^e on its own ("t^0" included), as used in coefficient tables.
std::string render_power(const Rational &e, std::string_view var = "t");

} // namespace stackyfan
