#include "stackyfan/arcspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace stackyfan {

namespace {

void require_size(const StackyFan &sfan, std::size_t n, const char *what) {
  if (static_cast<int>(n) != sfan.num_rays())
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " has " + std::to_string(n) +
                                                " entries for " + std::to_string(sfan.num_rays()) + " rays");
}

void require_klt(const StackDivisor &e) {
  if (!e.is_klt())
    throw Error(ErrorKind::NotKLT, "divisor is not Kawamata log terminal");
}

} // namespace

OrbitLabel orbit_label(const StackyFan &sfan, const LatticeVector &w) {
  return OrbitLabel{w, fractional_decompose(sfan, w)};
}

bool StackDivisor::is_klt() const {
  return std::all_of(beta_.begin(), beta_.end(), [](const Rational &b) { return b < 1; });
}

StackDivisor pullback_divisor(const StackyFan &sfan, const std::vector<Rational> &alpha) {
  require_size(sfan, alpha.size(), "divisor");
  std::vector<Rational> beta;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    beta.push_back(alpha[i] * Rational(sfan.weights()[i]));
  return StackDivisor(std::move(beta));
}

PiecewiseQLinear divisor_to_pl(const StackDivisor &e) {
  std::vector<Rational> values;
  for (const auto &b : e.coefficients())
    values.push_back(-b);
  return PiecewiseQLinear(std::move(values));
}

Rational contact_order(const StackyFan &sfan, const StackDivisor &e, const OrbitLabel &w) {
  require_size(sfan, e.size(), "divisor");
  return -eval_pl(sfan, divisor_to_pl(e), w.w);
}

Rational shift_function(const StackyFan &sfan, const OrbitLabel &w) {
  const BoxElement &part = w.decomposition.box_part;
  const Rational value = Rational(part.cone.dim()) - age(part);
  if (value != age(iota(sfan, part)))
    throw std::logic_error("shift function formulas disagree at " + to_string(w.w));
  return value;
}

FracPoly orbit_measure(const StackyFan &sfan, const OrbitLabel &w) {
  const BoxElement &part = w.decomposition.box_part;
  const Rational exponent = -psi(sfan, w.w) + age(part) - Rational(part.cone.dim());
  FracPoly torus = (FracPoly::monomial(Rational(1), Rational(1)) - FracPoly(Rational(1)))
                       .pow(static_cast<unsigned>(sfan.rank()));
  return torus.shifted(exponent);
}

bool closure_leq(const StackyFan &sfan, const LatticeVector &v, const LatticeVector &w) {
  const RationalVector rv = to_rational(v), rw = to_rational(w);
  minimal_containing_cone(sfan.b_fan(), rv);
  minimal_containing_cone(sfan.b_fan(), rw);
  for (const auto &sigma : sfan.b_fan().maximal_cones()) {
    if (sigma.is_zero()) {
      if (rv.isZero() && rw.isZero())
        return true;
      continue;
    }
    const ConeFrame *frame = sfan.b_fan().frame(sigma);
    if (!frame)
      continue;
    auto qv = frame->coordinates(rv);
    auto qw = frame->coordinates(rw);
    if (!qv || !qw || qv->minCoeff() < 0 || qw->minCoeff() < 0)
      continue;
    RationalVector qd = *qw - *qv;
    bool ok = true;
    for (Eigen::Index i = 0; i < qd.size() && ok; ++i)
      ok = qd(i) >= 0 && is_integral(qd(i));
    if (ok)
      return true;
  }
  return false;
}

OrbitPoset orbit_poset(const StackyFan &sfan, const Rational &bound) {
  if (bound < 0)
    throw Error(ErrorKind::InvalidArgument, "bound must be non-negative");
  OrbitPoset poset;
  for (const auto &w : support_points(sfan, bound))
    poset.labels.push_back(orbit_label(sfan, w));
  const int n = static_cast<int>(poset.labels.size());
  std::vector<std::vector<char>> leq(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (closure_leq(sfan, poset.labels[static_cast<std::size_t>(i)].w, poset.labels[static_cast<std::size_t>(j)].w)) {
        leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
        poset.relations.emplace_back(i, j);
      }
  auto at = [&](int i, int j) { return leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0; };
  for (int i = 0; i < n; ++i) {
    if (!at(i, i))
      throw std::logic_error("closure order is not reflexive");
    for (int j = 0; j < n; ++j) {
      if (i != j && at(i, j) && at(j, i))
        throw std::logic_error("closure order is not antisymmetric");
      if (at(i, j))
        for (int k = 0; k < n; ++k)
          if (at(j, k) && !at(i, k))
            throw std::logic_error("closure order is not transitive");
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || !at(i, j))
        continue;
      bool cover = true;
      for (int k = 0; k < n && cover; ++k)
        cover = k == i || k == j || !(at(i, k) && at(k, j));
      if (cover)
        poset.covers.emplace_back(i, j);
    }
  return poset;
}

TruncatedSeries gamma_truncated_direct(const StackyFan &sfan, const StackDivisor &e, const Rational &bound) {
  require_size(sfan, e.size(), "divisor");
  require_klt(e);
  if (bound < 0)
    throw Error(ErrorKind::InvalidArgument, "bound must be non-negative");
  const PiecewiseQLinear lambda = divisor_to_pl(e);
  std::vector<Rational> costs;
  for (const auto &l : lambda.values_on_b())
    costs.push_back(Rational(1) + l);
  const int d = sfan.rank();
  // Sum of x^(psi + lambda) over the labels, exact through x^bound.
  TruncatedSeries sum{{}, bound};
  for_each_support_point(sfan, costs, bound, [&](const SupportPoint &p) {
    Rational value(0);
    for (int j = 0; j < p.cone.dim(); ++j)
      value += p.q(j) * (Rational(1) + lambda.at_b(p.cone.rays[static_cast<std::size_t>(j)]));
    const OrbitLabel label = orbit_label(sfan, p.point);
    const BoxElement &part = label.decomposition.box_part;
    const Rational measure_exponent = -p.q.sum() + age(part) - Rational(part.cone.dim());
    const Rational orbitwise = measure_exponent + shift_function(sfan, label) + contact_order(sfan, e, label);
    if (orbitwise != -value)
      throw std::logic_error("orbit-wise integrand disagrees at " + to_string(p.point));
    sum.add_term(Rational(1), value);
  });
  const FracPoly torus = FracPoly::one_minus_power(Rational(1)).pow(static_cast<unsigned>(d));
  TruncatedSeries product = truncated_product(sum, torus);
  TruncatedSeries out{{}, bound - Rational(d)};
  for (const auto &[x, c] : product.terms)
    out.terms.emplace(x - Rational(d), c);
  return out;
}

} // namespace stackyfan
