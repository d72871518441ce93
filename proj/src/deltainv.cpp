#include "stackyfan/deltainv.hpp"

#include <stdexcept>

namespace stackyfan {

namespace {

void require_functional(const StackyFan &sfan, const PiecewiseQLinear &lam) {
  if (static_cast<int>(lam.size()) != sfan.num_rays())
    throw Error(ErrorKind::InvalidArgument, "functional has " + std::to_string(lam.size()) +
                                                " values for " + std::to_string(sfan.num_rays()) + " rays");
}

void require_admissible(const StackyFan &sfan, const PiecewiseQLinear &lam) {
  require_functional(sfan, lam);
  for (int i = 0; i < sfan.num_rays(); ++i)
    if (lam.at_b(i) <= -1)
      throw Error(ErrorKind::LambdaNotKLT,
                  "functional value " + to_string(lam.at_b(i)) + " at b_" + std::to_string(i) + " is <= -1");
}

std::vector<Rational> unit_costs(const StackyFan &sfan) {
  return std::vector<Rational>(static_cast<std::size_t>(sfan.num_rays()), Rational(1));
}

Rational value_at(const PiecewiseQLinear &f, const Cone &cone, const RationalVector &q) {
  Rational v(0);
  for (int j = 0; j < cone.dim(); ++j)
    v += q(j) * f.at_b(cone.rays[static_cast<std::size_t>(j)]);
  return v;
}

FracPoly one_minus_t_power(int n) { return FracPoly::one_minus_power(Rational(1)).pow(static_cast<unsigned>(n)); }

Integer binomial(int n, int k) {
  Integer r(1);
  for (int i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

// Cones of the fan having tau as a face.
std::vector<Cone> star_of(const Fan &fan, const Cone &tau) {
  std::vector<Cone> out;
  for (const auto &sigma : fan.cones())
    if (tau.is_face_of(sigma))
      out.push_back(sigma);
  return out;
}

// Adds prefactor * sum over sigma >= tau of the h_tau^lambda summand for sigma,
// with every (1 - t) power collected in front and factors 1 - t^1 cancelled.
void add_star_terms(FactoredSum &sum, const StackyFan &sfan, const Cone &tau, const PiecewiseQLinear &lam,
                    const FracPoly &prefactor, bool include_tau_factors) {
  const int d = sfan.rank();
  for (const auto &sigma : star_of(sfan.fan(), tau)) {
    Rational exponent(sigma.dim() - tau.dim());
    int ones = d - sigma.dim();
    std::vector<Rational> den;
    for (int i : sigma.rays) {
      const bool in_tau = tau.contains_ray(i);
      if (in_tau && !include_tau_factors)
        continue;
      if (!in_tau)
        exponent += lam.at_b(i);
      const Rational k = lam.at_b(i) + 1;
      if (k == 1)
        continue;
      ++ones;
      den.push_back(k);
    }
    sum.add((prefactor * one_minus_t_power(ones)).shifted(exponent), std::move(den));
  }
}

} // namespace

Integer count_lattice_points(const StackyFan &sfan, long long m) {
  if (m < 0)
    throw Error(ErrorKind::InvalidArgument, "m must be non-negative");
  Integer n(0);
  for_each_support_point(sfan, unit_costs(sfan), Rational(m), [&](const SupportPoint &) { ++n; });
  return n;
}

EhrhartData ehrhart_data(const StackyFan &sfan, long long max_m) {
  if (max_m < 0)
    throw Error(ErrorKind::InvalidArgument, "m must be non-negative");
  std::vector<Integer> level(static_cast<std::size_t>(max_m) + 1, Integer(0));
  for_each_support_point(sfan, unit_costs(sfan), Rational(max_m), [&](const SupportPoint &p) {
    ++level[ceil_of(p.q.sum()).convert_to<std::size_t>()];
  });
  EhrhartData data;
  Integer running(0);
  for (const auto &n : level) {
    running += n;
    data.counts.push_back(running);
  }
  return data;
}

FracPoly ehrhart_delta(const StackyFan &sfan) {
  const int d = sfan.rank();
  const auto f = ehrhart_data(sfan, d).counts;
  FracPoly delta;
  for (int j = 0; j <= d; ++j) {
    Integer c(0);
    for (int k = 0; k <= j; ++k) {
      Integer term = binomial(d + 1, k) * f[static_cast<std::size_t>(j - k)];
      c += k % 2 ? Integer(-term) : term;
    }
    delta.add_term(Rational(c), Rational(j));
  }
  return delta;
}

Integer series_level_bound(const PiecewiseQLinear &lam, const Rational &cutoff) {
  Rational c(0);
  for (const auto &l : lam.values_on_b())
    c = std::max(c, Rational(-l));
  if (c >= 1)
    throw Error(ErrorKind::LambdaNotKLT, "functional value <= -1");
  return std::max(Integer(1), floor_of((cutoff + 1) / (Rational(1) - c)));
}

TruncatedSeries weighted_delta_series(const StackyFan &sfan, const PiecewiseQLinear &lam,
                                      const Rational &cutoff, const Integer &max_level) {
  require_admissible(sfan, lam);
  const Rational top(max_level);
  TruncatedSeries raw{{}, cutoff};
  raw.add_term(Rational(1), Rational(0));
  std::vector<Rational> costs;
  for (const auto &l : lam.values_on_b())
    costs.push_back(Rational(1) + l);
  // Every term from v has exponent >= psi(v) + lambda(v), so points above the
  // cutoff in that sense are skipped.
  for_each_support_point(sfan, costs, cutoff, [&](const SupportPoint &p) {
    const Rational psi_v = p.q.sum();
    if (psi_v > top)
      return;
    const Rational ceil_psi(ceil_of(psi_v));
    const Rational offset = psi_v - ceil_psi + value_at(lam, p.cone, p.q);
    for (Rational m = std::max(Rational(1), ceil_psi); m <= top; m += 1) {
      const Rational e = offset + m;
      if (e > cutoff)
        break;
      raw.add_term(Rational(1), e);
    }
  });
  return truncated_product(raw, one_minus_t_power(sfan.rank() + 1));
}

TruncatedSeries weighted_delta_series(const StackyFan &sfan, const PiecewiseQLinear &lam,
                                      const Rational &cutoff) {
  require_admissible(sfan, lam);
  return weighted_delta_series(sfan, lam, cutoff, series_level_bound(lam, cutoff));
}

FracRational h_tau_lambda(const StackyFan &sfan, const Cone &tau, const PiecewiseQLinear &lam) {
  require_admissible(sfan, lam);
  FactoredSum sum;
  add_star_terms(sum, sfan, tau, lam, FracPoly(Rational(1)), false);
  return sum.total();
}

FracRational weighted_delta_closed(const StackyFan &sfan, const PiecewiseQLinear &lam) {
  require_admissible(sfan, lam);
  FactoredSum sum;
  for (const auto &tau : sfan.fan().cones()) {
    FracPoly box_sum;
    for (const auto &e : box_elements(sfan, tau))
      box_sum.add_term(Rational(1), age(e) + value_at(lam, e.cone, e.q));
    add_star_terms(sum, sfan, tau, lam, box_sum, true);
  }
  return sum.total();
}

bool check_symmetry(const StackyFan &sfan, const PiecewiseQLinear &lam) {
  if (sfan.fan().support() != SupportKind::complete)
    throw Error(ErrorKind::NotComplete, "fan support is not complete");
  const FracRational delta = weighted_delta_closed(sfan, lam);
  return delta == rat_shift(substitute_reciprocal(delta), Rational(sfan.rank()));
}

TruncatedSeries delta_mu_series(const StackyFan &sfan, const PiecewiseQLinear &mu, const Rational &cutoff) {
  require_functional(sfan, mu);
  for (int i = 0; i < sfan.num_rays(); ++i)
    if (mu.at_b(i) < 0)
      throw Error(ErrorKind::NegativeMu, "mu is negative at b_" + std::to_string(i));
  for (const auto &e : box_all(sfan))
    if (value_at(mu, e.cone, e.q) < 0)
      throw Error(ErrorKind::NegativeMu, "mu is negative at " + to_string(e.point));
  TruncatedSeries raw{{}, cutoff};
  raw.add_term(Rational(1), Rational(0));
  const Rational top(floor_of(cutoff));
  // Level-m terms have exponent >= m, so v with psi(v) > cutoff never contribute.
  for_each_support_point(sfan, unit_costs(sfan), top, [&](const SupportPoint &p) {
    const Rational mu_v = value_at(mu, p.cone, p.q);
    for (Rational m = std::max(Rational(1), Rational(ceil_of(p.q.sum()))); m <= top; m += 1) {
      if (mu_v + m > cutoff)
        break;
      raw.add_term(Rational(1), mu_v + m);
    }
  });
  return truncated_product(raw, one_minus_t_power(sfan.rank() + 1));
}

TruncatedSeries bucket_series(const TruncatedSeries &a) {
  TruncatedSeries out{{}, Rational(floor_of(a.cutoff))};
  for (const auto &[e, c] : a.terms)
    out.add_term(c, Rational(ceil_of(e)));
  return out;
}

FracPoly h_vector(const Fan &fan) {
  FracPoly h;
  for (const auto &tau : fan.cones())
    h += one_minus_t_power(fan.rank() - tau.dim()).shifted(Rational(tau.dim()));
  return h;
}

FracPoly hodge_polynomial_toric(const Fan &fan) {
  return h_vector(fan).reciprocal_variable().shifted(Rational(fan.rank()));
}

FracRational gamma(const StackyFan &sfan, const StackDivisor &e) {
  if (static_cast<int>(e.size()) != sfan.num_rays())
    throw Error(ErrorKind::InvalidArgument, "divisor has " + std::to_string(e.size()) + " coefficients for " +
                                                std::to_string(sfan.num_rays()) + " rays");
  if (!e.is_klt())
    throw Error(ErrorKind::NotKLT, "divisor is not Kawamata log terminal");
  const FracRational delta = weighted_delta_closed(sfan, divisor_to_pl(e));
  return rat_shift(substitute_reciprocal(delta), Rational(sfan.rank()));
}

std::map<Rational, Integer> orbifold_betti(const StackyFan &sfan) {
  const StackDivisor zero(std::vector<Rational>(static_cast<std::size_t>(sfan.num_rays()), Rational(0)));
  const FracRational g = gamma(sfan, zero);
  if (!g.is_polynomial())
    throw std::logic_error("Gamma(X, 0) is not a polynomial");
  std::map<Rational, Integer> betti;
  for (const auto &[e, c] : g.numerator().terms()) {
    if (!is_integral(c) || c < 0)
      throw std::logic_error("orbifold Betti number " + to_string(c) + " is not a non-negative integer");
    betti.emplace(e, numerator(c));
  }
  return betti;
}

} // namespace stackyfan
