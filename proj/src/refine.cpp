#include "stackyfan/refine.hpp"

#include <stdexcept>

namespace stackyfan {

namespace {

bool in_support(const Fan &fan, const RationalVector &v) {
  try {
    minimal_containing_cone(fan, v);
    return true;
  } catch (const Error &e) {
    if (e.kind() != ErrorKind::OutsideSupport)
      throw;
    return false;
  }
}

// Every lattice point of `from` with psi <= bound lies in the support of `to`.
bool support_inside(const StackyFan &from, const StackyFan &to, const Rational &bound) {
  bool inside = true;
  for_each_support_point(from, std::vector<Rational>(static_cast<std::size_t>(from.num_rays()), Rational(1)),
                         bound, [&](const SupportPoint &p) {
                           if (inside && !in_support(to.fan(), to_rational(p.point)))
                             inside = false;
                         });
  return inside;
}

std::optional<IntegralityCertificate> certificate(const StackyFan &coarse, const LatticeVector &b) {
  const Cone cone = minimal_containing_cone(coarse.b_fan(), to_rational(b));
  const RationalVector q = b_coordinates(coarse, cone, to_rational(b));
  IntegralityCertificate cert{cone, {}};
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    if (!is_integral(q(j)))
      return std::nullopt;
    cert.coefficients.push_back(numerator(q(j)));
  }
  return cert;
}

} // namespace

std::optional<RefinementWitness> is_stacky_refinement(const StackyFan &fine, const StackyFan &coarse) {
  if (fine.rank() != coarse.rank())
    throw Error(ErrorKind::RankMismatch, "fans have ranks " + std::to_string(fine.rank()) + " and " +
                                             std::to_string(coarse.rank()));
  RefinementWitness witness;
  const auto &coarse_max = coarse.fan().maximal_cones();
  for (const auto &cone : fine.fan().maximal_cones()) {
    int found = -1;
    for (std::size_t m = 0; m < coarse_max.size() && found < 0; ++m) {
      const ConeFrame *frame = coarse.fan().frame(coarse_max[m]);
      bool contains = true;
      for (int i : cone.rays) {
        if (!contains)
          break;
        if (!frame) {
          contains = false;
          break;
        }
        auto q = frame->coordinates(to_rational(fine.fan().ray(i)));
        contains = q && (q->size() == 0 || q->minCoeff() >= 0);
      }
      if (contains)
        found = static_cast<int>(m);
    }
    if (found < 0)
      return std::nullopt;
    witness.cone_map.push_back(found);
  }
  const Rational bound(fine.rank() + 1);
  if (!support_inside(coarse, fine, bound) || !support_inside(fine, coarse, bound))
    return std::nullopt;
  for (int i = 0; i < fine.num_rays(); ++i) {
    auto cert = certificate(coarse, fine.b(i));
    if (!cert)
      return std::nullopt;
    witness.certificates.push_back(std::move(*cert));
  }
  return witness;
}

StackyFan stellar_subdivide(const StackyFan &sfan, const LatticeVector &w, const Integer &multiplicity) {
  if (multiplicity < 1)
    throw Error(ErrorKind::InvalidArgument, "multiplicity must be positive");
  if (w.size() != sfan.rank())
    throw Error(ErrorKind::RankMismatch, "point has the wrong length");
  if (w.isZero())
    throw Error(ErrorKind::InvalidArgument, "cannot subdivide at the origin");
  if (!in_support(sfan.fan(), to_rational(w)))
    throw Error(ErrorKind::NotInSupport, "point " + to_string(w) + " is not in the fan support");
  const LatticeVector primitive = w / content(w);
  const LatticeVector b = primitive * multiplicity;
  if (!certificate(sfan, b))
    throw Error(ErrorKind::IntegralityFailure,
                "b = " + to_string(b) + " is not an integer combination of the b_j of its cone");

  for (int i = 0; i < sfan.num_rays(); ++i)
    if (sfan.fan().ray(i) == primitive) {
      if (sfan.weights()[static_cast<std::size_t>(i)] == multiplicity)
        return sfan;
      auto weights = sfan.weights();
      weights[static_cast<std::size_t>(i)] = multiplicity;
      return StackyFan(sfan.fan(), std::move(weights));
    }

  const Cone tau = minimal_containing_cone(sfan.fan(), to_rational(primitive));
  const int added = sfan.num_rays();
  std::vector<Cone> cones;
  for (const auto &c : sfan.fan().cones()) {
    if (tau.is_face_of(c))
      continue;
    cones.push_back(c);
    if (sfan.fan().has_cone(join(c, tau))) {
      auto rays = c.rays;
      rays.push_back(added);
      cones.emplace_back(std::move(rays));
    }
  }
  auto rays = sfan.fan().rays();
  rays.push_back(primitive);
  Fan fan(sfan.rank(), std::move(rays), std::move(cones), sfan.fan().support());
  auto report = validate_fan(fan);
  if (!report.empty())
    throw std::logic_error("stellar subdivision produced an invalid fan: " + report.front().message);
  auto weights = sfan.weights();
  weights.push_back(multiplicity);
  return StackyFan(std::move(fan), std::move(weights));
}

PiecewiseQLinear transfer_lambda(const StackyFan &coarse, const PiecewiseQLinear &lam, const StackyFan &fine) {
  if (static_cast<int>(lam.size()) != coarse.num_rays())
    throw Error(ErrorKind::InvalidArgument, "functional does not match the coarse fan");
  for (int i = 0; i < coarse.num_rays(); ++i)
    if (lam.at_b(i) <= -1)
      throw Error(ErrorKind::LambdaNotKLT, "functional value at b_" + std::to_string(i) + " is <= -1");
  if (!is_stacky_refinement(fine, coarse))
    throw Error(ErrorKind::NotARefinement, "fan is not a stacky refinement");
  std::vector<Rational> values;
  for (int i = 0; i < fine.num_rays(); ++i) {
    Rational v = eval_pl(coarse, lam, fine.b(i)) + psi(coarse, fine.b(i)) - 1;
    if (v <= -1)
      throw Error(ErrorKind::TransferNotKLT, "transferred value " + to_string(v) + " at b_" +
                                                 std::to_string(i) + " is <= -1");
    values.push_back(std::move(v));
  }
  return PiecewiseQLinear(std::move(values));
}

bool check_invariance(const StackyFan &coarse, const PiecewiseQLinear &lam, const StackyFan &fine) {
  const PiecewiseQLinear transferred = transfer_lambda(coarse, lam, fine);
  return weighted_delta_closed(coarse, lam) == weighted_delta_closed(fine, transferred);
}

} // namespace stackyfan
