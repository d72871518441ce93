#include "stackyfan/qseries.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

namespace stackyfan {

namespace {

// Integer polynomial in s, coefficient k at index k.
using Dense = std::vector<Integer>;

void trim(Dense &p) {
  while (!p.empty() && p.back() == 0)
    p.pop_back();
}

int degree(const Dense &p) { return static_cast<int>(p.size()) - 1; }

Integer dense_content(const Dense &p) {
  Integer g(0);
  for (const auto &c : p) {
    g = gcd_of(g, c);
    if (g == 1)
      break;
  }
  return g;
}

void divide_content(Dense &p) {
  Integer g = dense_content(p);
  if (g > 1)
    for (auto &c : p)
      c /= g;
}

using Residues = std::vector<std::uint64_t>;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1u)
      r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1u;
  }
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37})
    if (n % q == 0)
      return n == q;
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1u) == 0) {
    d >>= 1u;
    ++r;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1)
      continue;
    bool composite = true;
    for (int i = 1; i < r && composite; ++i) {
      x = mulmod(x, x, n);
      composite = x != n - 1;
    }
    if (composite)
      return false;
  }
  return true;
}

std::uint64_t residue(const Integer &x, std::uint64_t p) {
  Integer r = x % Integer(p);
  if (r < 0)
    r += p;
  return r.convert_to<std::uint64_t>();
}

void trim(Residues &a) {
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

// Monic gcd over F_p.
Residues gcd_mod(Residues a, Residues b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    const std::uint64_t inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      const std::uint64_t f = mulmod(a.back(), inv, p);
      const std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i)
        a[i + shift] = (a[i + shift] + p - mulmod(f, b[i], p)) % p;
      trim(a);
      if (a.empty())
        break;
    }
    std::swap(a, b);
  }
  const std::uint64_t inv = powmod(a.back(), p - 2, p);
  for (auto &c : a)
    c = mulmod(c, inv, p);
  return a;
}

// Quotient a / b over Z, or nullopt when b does not divide a.
std::optional<Dense> divide_exactly(Dense a, const Dense &b) {
  const int db = degree(b);
  if (degree(a) < db)
    return std::nullopt;
  Dense q(static_cast<std::size_t>(degree(a) - db + 1));
  for (int k = degree(a) - db; k >= 0; --k) {
    const Integer &top = a[static_cast<std::size_t>(k + db)];
    if (top % b.back() != 0)
      return std::nullopt;
    Integer c = top / b.back();
    q[static_cast<std::size_t>(k)] = c;
    if (c != 0)
      for (int i = 0; i <= db; ++i)
        a[static_cast<std::size_t>(i + k)] -= c * b[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < db; ++i)
    if (a[static_cast<std::size_t>(i)] != 0)
      return std::nullopt;
  return q;
}

// gcd of primitive polynomials of positive degree, by reduction modulo word-size
// primes and Chinese remaindering, confirmed by exact division. Positive leading
// coefficient.
Dense dense_gcd(const Dense &a, const Dense &b) {
  const Integer lead = gcd_of(a.back(), b.back());
  std::uint64_t p = (std::uint64_t(1) << 62);
  Dense image;
  Integer modulus(0);
  int best = std::min(degree(a), degree(b)) + 1;
  Dense previous;
  while (true) {
    do
      --p;
    while (!is_prime(p));
    if (residue(a.back(), p) == 0 || residue(b.back(), p) == 0)
      continue;
    Residues ap(a.size()), bp(b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      ap[i] = residue(a[i], p);
    for (std::size_t i = 0; i < b.size(); ++i)
      bp[i] = residue(b[i], p);
    Residues g = gcd_mod(std::move(ap), std::move(bp), p);
    const int dg = static_cast<int>(g.size()) - 1;
    if (dg == 0)
      return Dense{Integer(1)};
    if (dg > best)
      continue;
    const std::uint64_t scale = residue(lead, p);
    for (auto &c : g)
      c = mulmod(c, scale, p);
    if (dg < best) {
      best = dg;
      image.assign(g.begin(), g.end());
      modulus = p;
      previous.clear();
    } else {
      const Integer P(p);
      const std::uint64_t inv = powmod(residue(modulus, p), p - 2, p);
      for (std::size_t i = 0; i < g.size(); ++i) {
        std::uint64_t diff = (g[i] + p - residue(image[i], p)) % p;
        image[i] += modulus * Integer(mulmod(diff, inv, p));
      }
      modulus *= P;
    }
    Dense lifted = image;
    const Integer half = modulus / 2;
    for (auto &c : lifted) {
      c %= modulus;
      if (c < 0)
        c += modulus;
      if (c > half)
        c -= modulus;
    }
    if (lifted != previous) {
      previous = std::move(lifted);
      continue;
    }
    Dense candidate = previous;
    divide_content(candidate);
    if (candidate.back() < 0)
      for (auto &c : candidate)
        c = -c;
    if (divide_exactly(a, candidate) && divide_exactly(b, candidate))
      return candidate;
  }
}

// f = t^base * (1/scale) * sum_k dense[k] s^k with s = t^(1/grid).
struct Expanded {
  Dense coeffs;
  Integer scale;
};

Expanded to_dense(const FracPoly &f, const Rational &base, const Integer &grid) {
  Integer scale(1);
  for (const auto &[e, c] : f.terms())
    scale = lcm_of(scale, denominator(c));
  const Rational g(grid);
  const Rational span = (f.max_exponent() - base) * g;
  Dense out(static_cast<std::size_t>(numerator(span).convert_to<long long>()) + 1, Integer(0));
  for (const auto &[e, c] : f.terms()) {
    const auto k = numerator((e - base) * g).convert_to<long long>();
    out[static_cast<std::size_t>(k)] = numerator(c * Rational(scale));
  }
  return {std::move(out), scale};
}

FracPoly from_dense(const Dense &p, const Rational &base, const Integer &grid, const Rational &factor) {
  FracPoly f;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != 0)
      f.add_term(Rational(p[k]) * factor, base + Rational(Integer(static_cast<long long>(k)), grid));
  return f;
}

std::string monomial(const Rational &e, std::string_view var) {
  if (e == 0)
    return "";
  if (e == 1)
    return std::string(var);
  return render_power(e, var);
}

} // namespace

// ---------------------------------------------------------------------------

FracPoly::FracPoly(const Rational &constant) {
  if (constant != 0)
    terms_.emplace(Rational(0), constant);
}

FracPoly FracPoly::monomial(const Rational &coefficient, const Rational &exponent) {
  FracPoly f;
  f.add_term(coefficient, exponent);
  return f;
}

FracPoly FracPoly::one_minus_power(const Rational &k) {
  FracPoly f(Rational(1));
  f.add_term(Rational(-1), k);
  return f;
}

Rational FracPoly::coefficient(const Rational &exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Rational(0) : it->second;
}

const Rational &FracPoly::min_exponent() const {
  if (terms_.empty())
    throw Error(ErrorKind::InvalidArgument, "zero polynomial has no exponents");
  return terms_.begin()->first;
}

const Rational &FracPoly::max_exponent() const {
  if (terms_.empty())
    throw Error(ErrorKind::InvalidArgument, "zero polynomial has no exponents");
  return terms_.rbegin()->first;
}

Integer FracPoly::grid() const {
  Integer g(1);
  for (const auto &[e, c] : terms_)
    g = lcm_of(g, denominator(e));
  return g;
}

bool FracPoly::is_polynomial() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto &t) { return is_integral(t.first) && t.first >= 0; });
}

void FracPoly::add_term(const Rational &coefficient, const Rational &exponent) {
  if (coefficient == 0)
    return;
  auto [it, inserted] = terms_.emplace(exponent, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0)
      terms_.erase(it);
  }
}

FracPoly FracPoly::shifted(const Rational &e) const {
  FracPoly out;
  for (const auto &[x, c] : terms_)
    out.terms_.emplace_hint(out.terms_.end(), x + e, c);
  return out;
}

FracPoly FracPoly::reciprocal_variable() const {
  FracPoly out;
  for (const auto &[x, c] : terms_)
    out.terms_.emplace(-x, c);
  return out;
}

FracPoly FracPoly::pow(unsigned n) const {
  FracPoly result(Rational(1));
  FracPoly base = *this;
  while (n) {
    if (n & 1u)
      result = result * base;
    n >>= 1u;
    if (n)
      base = base * base;
  }
  return result;
}

Rational FracPoly::at_one() const {
  Rational s(0);
  for (const auto &[e, c] : terms_)
    s += c;
  return s;
}

FracPoly &FracPoly::operator+=(const FracPoly &other) {
  for (const auto &[e, c] : other.terms_)
    add_term(c, e);
  return *this;
}

FracPoly &FracPoly::operator-=(const FracPoly &other) {
  for (const auto &[e, c] : other.terms_)
    add_term(-c, e);
  return *this;
}

FracPoly FracPoly::operator-() const {
  FracPoly out = *this;
  for (auto &[e, c] : out.terms_)
    c = -c;
  return out;
}

FracPoly operator*(const FracPoly &a, const FracPoly &b) {
  if (a.is_zero() || b.is_zero())
    return FracPoly{};
  const Integer grid = lcm_of(a.grid(), b.grid());
  const Rational g(grid);
  const Rational span =
      (a.max_exponent() - a.min_exponent() + b.max_exponent() - b.min_exponent()) * g;
  const auto dense_len = numerator(span).convert_to<long long>() + 1;
  const auto sparse_cost = static_cast<long long>(a.size() * b.size());
  if (sparse_cost * 4 < dense_len || a.size() == 1 || b.size() == 1) {
    FracPoly out;
    for (const auto &[ea, ca] : a.terms_)
      for (const auto &[eb, cb] : b.terms_)
        out.add_term(ca * cb, ea + eb);
    return out;
  }
  const Rational base_a = a.min_exponent();
  const Rational base_b = b.min_exponent();
  std::vector<std::pair<long long, const Rational *>> ta, tb;
  for (const auto &[e, c] : a.terms_)
    ta.emplace_back(numerator((e - base_a) * g).convert_to<long long>(), &c);
  for (const auto &[e, c] : b.terms_)
    tb.emplace_back(numerator((e - base_b) * g).convert_to<long long>(), &c);
  std::vector<Rational> acc(static_cast<std::size_t>(dense_len));
  for (const auto &[ka, ca] : ta)
    for (const auto &[kb, cb] : tb)
      acc[static_cast<std::size_t>(ka + kb)] += *ca * *cb;
  FracPoly out;
  const Rational base = base_a + base_b;
  for (std::size_t k = 0; k < acc.size(); ++k)
    if (acc[k] != 0)
      out.terms_.emplace_hint(out.terms_.end(),
                              base + Rational(Integer(static_cast<long long>(k)), grid), acc[k]);
  return out;
}

FracPoly operator*(FracPoly a, const Rational &c) {
  if (c == 0)
    return FracPoly{};
  for (auto &[e, x] : a.terms_)
    x *= c;
  return a;
}

FracPoly poly_add(const FracPoly &f, const FracPoly &g) { return f + g; }
FracPoly poly_mul(const FracPoly &f, const FracPoly &g) { return f * g; }
FracPoly poly_neg(const FracPoly &f) { return -f; }
FracPoly poly_scale(const FracPoly &f, const Rational &c) { return f * c; }

// ---------------------------------------------------------------------------

FracRational::FracRational(const FracPoly &numerator) : FracRational(numerator, FracPoly(Rational(1))) {}

FracRational::FracRational(const FracPoly &num, const FracPoly &den) {
  if (den.is_zero())
    throw Error(ErrorKind::DivisionByZero, "division by zero");
  if (num.is_zero()) {
    den_ = FracPoly(Rational(1));
    return;
  }
  const Integer grid = lcm_of(num.grid(), den.grid());
  const Rational shift = num.min_exponent() - den.min_exponent();
  auto [p, lp] = to_dense(num, num.min_exponent(), grid);
  auto [q, lq] = to_dense(den, den.min_exponent(), grid);
  Integer cp = dense_content(p);
  Integer cq = dense_content(q);
  for (auto &c : p)
    c /= cp;
  for (auto &c : q)
    c /= cq;
  Rational factor = Rational(cp, lp) / Rational(cq, lq);
  if (degree(q) > 0 && degree(p) > 0) {
    Dense g = dense_gcd(p, q);
    if (degree(g) > 0) {
      p = *divide_exactly(std::move(p), g);
      q = *divide_exactly(std::move(q), g);
    }
  }
  if (degree(q) == 0) {
    factor *= Rational(q[0]);
    num_ = from_dense(p, shift, grid, factor);
    den_ = FracPoly(Rational(1));
    return;
  }
  if (q[0] < 0) {
    for (auto &c : p)
      c = -c;
    for (auto &c : q)
      c = -c;
  }
  num_ = from_dense(p, shift, grid, Rational(boost::multiprecision::numerator(factor)));
  den_ = from_dense(q, Rational(0), grid, Rational(boost::multiprecision::denominator(factor)));
}

bool FracRational::is_polynomial() const { return den_ == FracPoly(Rational(1)); }

Integer FracRational::grid() const { return lcm_of(num_.grid(), den_.grid()); }

FracRational rat_add(const FracRational &f, const FracRational &g) {
  if (f.is_zero())
    return g;
  if (g.is_zero())
    return f;
  if (f.den_ == g.den_) {
    if (f.is_polynomial())
      return FracRational(FracRational::Canonical{}, f.num_ + g.num_, f.den_);
    return FracRational(f.num_ + g.num_, f.den_);
  }
  return FracRational(f.num_ * g.den_ + g.num_ * f.den_, f.den_ * g.den_);
}

FracRational rat_neg(const FracRational &f) { return FracRational(-f.numerator(), f.denominator()); }

FracRational rat_sub(const FracRational &f, const FracRational &g) { return rat_add(f, rat_neg(g)); }

FracRational rat_mul(const FracRational &f, const FracRational &g) {
  if (f.is_polynomial() && g.is_polynomial())
    return FracRational(FracRational::Canonical{}, f.num_ * g.num_, f.den_);
  return FracRational(f.num_ * g.num_, f.den_ * g.den_);
}

FracRational rat_div(const FracRational &f, const FracRational &g) {
  if (g.is_zero())
    throw Error(ErrorKind::DivisionByZero, "division by zero");
  return FracRational(f.numerator() * g.denominator(), f.denominator() * g.numerator());
}

FracRational rat_shift(const FracRational &f, const Rational &e) {
  return FracRational(f.numerator().shifted(e), f.denominator());
}

FracRational substitute_reciprocal(const FracRational &f) {
  return FracRational(f.numerator().reciprocal_variable(), f.denominator().reciprocal_variable());
}

// ---------------------------------------------------------------------------

Rational TruncatedSeries::coefficient(const Rational &exponent) const {
  auto it = terms.find(exponent);
  return it == terms.end() ? Rational(0) : it->second;
}

void TruncatedSeries::add_term(const Rational &c, const Rational &exponent) {
  if (c == 0 || exponent > cutoff)
    return;
  auto [it, inserted] = terms.emplace(exponent, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0)
      terms.erase(it);
  }
}

TruncatedSeries TruncatedSeries::from_poly(const FracPoly &f, const Rational &cutoff) {
  TruncatedSeries s{{}, cutoff};
  for (const auto &[e, c] : f.terms())
    if (e <= cutoff)
      s.terms.emplace(e, c);
  return s;
}

FracPoly TruncatedSeries::to_poly() const {
  FracPoly f;
  for (const auto &[e, c] : terms)
    f.add_term(c, e);
  return f;
}

TruncatedSeries expand_series(const FracPoly &num, const FracPoly &den, const Rational &cutoff) {
  if (den.is_zero())
    throw Error(ErrorKind::NoExpansionAtZero, "denominator vanishes identically");
  TruncatedSeries out{{}, cutoff};
  if (num.is_zero())
    return out;
  const Integer grid = lcm_of(num.grid(), den.grid());
  const Rational g(grid);
  const Rational base = num.min_exponent() - den.min_exponent();
  if (base > cutoff)
    return out;
  const auto last = floor_of((cutoff - base) * g).convert_to<long long>();
  std::vector<Rational> p(static_cast<std::size_t>(last) + 1);
  for (const auto &[e, c] : num.terms()) {
    auto k = numerator((e - num.min_exponent()) * g).convert_to<long long>();
    if (k <= last)
      p[static_cast<std::size_t>(k)] = c;
  }
  std::vector<std::pair<long long, Rational>> q;
  for (const auto &[e, c] : den.terms())
    q.emplace_back(numerator((e - den.min_exponent()) * g).convert_to<long long>(), c);
  const Rational q0 = q.front().second;
  std::vector<Rational> c(static_cast<std::size_t>(last) + 1);
  for (long long k = 0; k <= last; ++k) {
    Rational acc = p[static_cast<std::size_t>(k)];
    for (std::size_t j = 1; j < q.size() && q[j].first <= k; ++j)
      acc -= q[j].second * c[static_cast<std::size_t>(k - q[j].first)];
    c[static_cast<std::size_t>(k)] = acc / q0;
    if (c[static_cast<std::size_t>(k)] != 0)
      out.terms.emplace_hint(out.terms.end(), base + Rational(Integer(k), grid),
                             c[static_cast<std::size_t>(k)]);
  }
  return out;
}

TruncatedSeries expand_series(const FracRational &f, const Rational &cutoff) {
  return expand_series(f.numerator(), f.denominator(), cutoff);
}

bool series_equal(const TruncatedSeries &a, const TruncatedSeries &b) {
  const Rational limit = std::min(a.cutoff, b.cutoff);
  auto in_window = [&](const TruncatedSeries &s) {
    std::map<Rational, Rational> w;
    for (const auto &[e, c] : s.terms)
      if (e <= limit)
        w.emplace(e, c);
    return w;
  };
  return in_window(a) == in_window(b);
}

TruncatedSeries truncated_product(const TruncatedSeries &series, const FracPoly &f) {
  TruncatedSeries out{{}, series.cutoff};
  if (f.is_zero())
    return out;
  if (f.min_exponent() < 0)
    throw Error(ErrorKind::InvalidArgument, "truncated product needs non-negative exponents");
  for (const auto &[ef, cf] : f.terms())
    for (const auto &[es, cs] : series.terms) {
      if (es + ef > series.cutoff)
        break;
      out.add_term(cs * cf, es + ef);
    }
  return out;
}

// ---------------------------------------------------------------------------

void FactoredSum::add(const FracPoly &numerator, std::vector<Rational> denominator) {
  if (numerator.is_zero())
    return;
  Term t{numerator, {}};
  for (auto &k : denominator) {
    if (k <= 0)
      throw Error(ErrorKind::InvalidArgument, "factor exponents must be positive");
    ++t.factors[k];
  }
  terms_.push_back(std::move(t));
}

namespace {

// p * (1 - s^m) in place.
void times_one_minus_power(Dense &p, std::size_t m) {
  p.resize(p.size() + m, Integer(0));
  for (std::size_t i = p.size() - 1; i >= m; --i)
    p[i] -= p[i - m];
}

} // namespace

FracRational FactoredSum::total() const {
  if (terms_.empty())
    return FracRational{};
  std::map<Rational, int> common;
  Integer grid(1);
  Integer scale(1);
  Rational base = terms_.front().numerator.min_exponent();
  for (const auto &t : terms_) {
    for (const auto &[k, m] : t.factors)
      common[k] = std::max(common[k], m);
    grid = lcm_of(grid, t.numerator.grid());
    for (const auto &[e, c] : t.numerator.terms())
      scale = lcm_of(scale, denominator(c));
    base = std::min(base, t.numerator.min_exponent());
  }
  for (const auto &[k, m] : common)
    grid = lcm_of(grid, denominator(k));
  const Rational g(grid);
  auto steps = [&](const Rational &x) {
    return static_cast<std::size_t>(numerator(x * g).convert_to<long long>());
  };
  Dense acc;
  for (const auto &t : terms_) {
    const Rational &low = t.numerator.min_exponent();
    Dense part(steps(t.numerator.max_exponent() - low) + 1, Integer(0));
    for (const auto &[e, c] : t.numerator.terms())
      part[steps(e - low)] = numerator(c * Rational(scale));
    for (const auto &[k, m] : common) {
      auto it = t.factors.find(k);
      const int missing = m - (it == t.factors.end() ? 0 : it->second);
      for (int i = 0; i < missing; ++i)
        times_one_minus_power(part, steps(k));
    }
    const std::size_t offset = steps(low - base);
    if (acc.size() < offset + part.size())
      acc.resize(offset + part.size(), Integer(0));
    for (std::size_t i = 0; i < part.size(); ++i)
      acc[offset + i] += part[i];
  }
  Dense den{Integer(1)};
  for (const auto &[k, m] : common)
    for (int i = 0; i < m; ++i)
      times_one_minus_power(den, steps(k));
  return FracRational(from_dense(acc, base, grid, Rational(Integer(1), scale)),
                      from_dense(den, Rational(0), grid, Rational(1)));
}

// ---------------------------------------------------------------------------

std::string render_power(const Rational &e, std::string_view var) {
  std::string base = var == "uv" ? "(uv)" : std::string(var);
  if (is_integral(e))
    return base + "^" + to_string(e);
  return base + "^{" + to_string(e) + "}";
}

std::string render(const FracPoly &f, std::string_view var) {
  if (f.is_zero())
    return "0";
  std::string out;
  bool first = true;
  for (const auto &[e, c] : f.terms()) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string mono = monomial(e, var);
    if (mono.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += mono;
    else
      out += to_string(mag) + "*" + mono;
  }
  return out;
}

std::string render(const FracRational &f, std::string_view var) {
  if (f.is_polynomial())
    return render(f.numerator(), var);
  return "(" + render(f.numerator(), var) + ")/(" + render(f.denominator(), var) + ")";
}

std::string render(const TruncatedSeries &s, std::string_view var) {
  FracPoly f;
  for (const auto &[e, c] : s.terms)
    f.add_term(c, e);
  return render(f, var) + " [exact through " + render_power(s.cutoff, var) + "]";
}

} // namespace stackyfan
