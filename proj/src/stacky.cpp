#include "stackyfan/stacky.hpp"

#include <algorithm>
#include <limits>

namespace stackyfan {

namespace {

using Wide = __int128;

constexpr long long kMagnitude = 1LL << 40;

long long narrow(const Integer &x) {
  if (x > kMagnitude || x < -kMagnitude)
    throw Error(ErrorKind::Overflow, "lattice scan entry " + x.str() + " exceeds the machine-word range");
  return x.convert_to<long long>();
}

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

Wide ceil_div(Wide a, Wide b) { return -floor_div(-a, b); }

// Coordinates s = A v with q = s / D, and v = G s / D, in machine integers.
struct WordFrame {
  int d = 0;
  int k = 0;
  std::vector<long long> a; // k x d, row major
  std::vector<long long> g; // d x k, row major
  long long den = 1;

  explicit WordFrame(const ConeFrame &frame)
      : d(static_cast<int>(frame.rank())), k(static_cast<int>(frame.size())) {
    a.resize(static_cast<std::size_t>(k * d));
    g.resize(static_cast<std::size_t>(d * k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < d; ++j) {
        a[static_cast<std::size_t>(i * d + j)] = narrow(frame.numerators()(i, j));
        g[static_cast<std::size_t>(j * k + i)] = narrow(frame.generators()(j, i));
      }
    den = narrow(frame.denominator());
  }

  long long A(int i, int j) const { return a[static_cast<std::size_t>(i * d + j)]; }
  long long G(int j, int i) const { return g[static_cast<std::size_t>(j * k + i)]; }
};

// Integer points v with lo_i <= s_i <= hi_i and sum cost_i s_i <= budget, where
// s = A v are the scaled coordinates; lower-dimensional frames also require v
// in the span.
struct Region {
  std::vector<Wide> lo, hi, cost;
  Wide budget = 0;
  bool has_budget = false;
};

template <typename Visit>
void scan(const WordFrame &f, const Region &r, Visit &&visit) {
  const int d = f.d, k = f.k;
  std::vector<Wide> hi = r.hi;
  if (r.has_budget)
    for (int i = 0; i < k; ++i)
      hi[static_cast<std::size_t>(i)] =
          std::min(hi[static_cast<std::size_t>(i)], floor_div(r.budget, r.cost[static_cast<std::size_t>(i)]));
  for (int i = 0; i < k; ++i)
    if (hi[static_cast<std::size_t>(i)] < r.lo[static_cast<std::size_t>(i)])
      return;
  std::vector<Wide> vmin(static_cast<std::size_t>(d)), vmax(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    Wide lo_sum = 0, hi_sum = 0;
    for (int i = 0; i < k; ++i) {
      Wide x = Wide(f.G(j, i)) * r.lo[static_cast<std::size_t>(i)];
      Wide y = Wide(f.G(j, i)) * hi[static_cast<std::size_t>(i)];
      lo_sum += std::min(x, y);
      hi_sum += std::max(x, y);
    }
    vmin[static_cast<std::size_t>(j)] = floor_div(lo_sum, f.den);
    vmax[static_cast<std::size_t>(j)] = ceil_div(hi_sum, f.den);
  }

  std::vector<long long> v(static_cast<std::size_t>(d));
  std::vector<Wide> s(static_cast<std::size_t>(k));
  auto admissible = [&]() {
    Wide total = 0;
    for (int i = 0; i < k; ++i) {
      const Wide si = s[static_cast<std::size_t>(i)];
      if (si < r.lo[static_cast<std::size_t>(i)] || si > r.hi[static_cast<std::size_t>(i)])
        return false;
      if (r.has_budget)
        total += r.cost[static_cast<std::size_t>(i)] * si;
    }
    return !r.has_budget || total <= r.budget;
  };
  auto compute_s = [&]() {
    for (int i = 0; i < k; ++i) {
      Wide acc = 0;
      for (int j = 0; j < d; ++j)
        acc += Wide(f.A(i, j)) * v[static_cast<std::size_t>(j)];
      s[static_cast<std::size_t>(i)] = acc;
    }
  };
  auto in_span = [&]() {
    for (int j = 0; j < d; ++j) {
      Wide acc = 0;
      for (int i = 0; i < k; ++i)
        acc += Wide(f.G(j, i)) * s[static_cast<std::size_t>(i)];
      if (acc != Wide(f.den) * v[static_cast<std::size_t>(j)])
        return false;
    }
    return true;
  };

  const bool full = k == d;
  const int free_coords = full ? d - 1 : d;
  std::function<void(int)> loop = [&](int j) {
    if (j == free_coords) {
      if (!full) {
        compute_s();
        if (in_span() && admissible())
          visit(v, s);
        return;
      }
      // Solve for the interval of the last coordinate.
      const int last = d - 1;
      Wide low = vmin[static_cast<std::size_t>(last)], high = vmax[static_cast<std::size_t>(last)];
      std::vector<Wide> base(static_cast<std::size_t>(k));
      Wide cost_base = 0, cost_slope = 0;
      for (int i = 0; i < k && low <= high; ++i) {
        Wide c = 0;
        for (int jj = 0; jj < last; ++jj)
          c += Wide(f.A(i, jj)) * v[static_cast<std::size_t>(jj)];
        base[static_cast<std::size_t>(i)] = c;
        const Wide slope = f.A(i, last);
        const Wide lo_i = r.lo[static_cast<std::size_t>(i)], hi_i = hi[static_cast<std::size_t>(i)];
        if (slope > 0) {
          low = std::max(low, ceil_div(lo_i - c, slope));
          high = std::min(high, floor_div(hi_i - c, slope));
        } else if (slope < 0) {
          low = std::max(low, ceil_div(c - hi_i, -slope));
          high = std::min(high, floor_div(c - lo_i, -slope));
        } else if (c < lo_i || c > hi_i) {
          return;
        }
        if (r.has_budget) {
          cost_base += r.cost[static_cast<std::size_t>(i)] * c;
          cost_slope += r.cost[static_cast<std::size_t>(i)] * slope;
        }
      }
      if (r.has_budget) {
        if (cost_slope > 0)
          high = std::min(high, floor_div(r.budget - cost_base, cost_slope));
        else if (cost_slope < 0)
          low = std::max(low, ceil_div(cost_base - r.budget, -cost_slope));
        else if (cost_base > r.budget)
          return;
      }
      for (Wide x = low; x <= high; ++x) {
        v[static_cast<std::size_t>(last)] = static_cast<long long>(x);
        for (int i = 0; i < k; ++i)
          s[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + Wide(f.A(i, last)) * x;
        visit(v, s);
      }
      return;
    }
    for (Wide x = vmin[static_cast<std::size_t>(j)]; x <= vmax[static_cast<std::size_t>(j)]; ++x) {
      v[static_cast<std::size_t>(j)] = static_cast<long long>(x);
      loop(j + 1);
    }
  };
  loop(0);
}

LatticeVector to_lattice_vector(const std::vector<long long> &v) {
  LatticeVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j)
    out(static_cast<Eigen::Index>(j)) = Integer(v[j]);
  return out;
}

Integer wide_to_integer(Wide x) {
  return Integer(static_cast<long long>(x));
}

const ConeFrame &b_frame(const StackyFan &sfan, const Cone &cone) {
  const ConeFrame *frame = sfan.b_fan().frame(cone);
  if (!frame)
    throw Error(ErrorKind::InvalidArgument, "cone " + to_string(cone) + " is not a simplicial cone of the fan");
  return *frame;
}

Integer order_of(const RationalVector &q) {
  Integer l(1);
  for (Eigen::Index i = 0; i < q.size(); ++i)
    l = lcm_of(l, denominator(q(i)));
  return l;
}

LatticeVector combine(const StackyFan &sfan, const Cone &cone, const RationalVector &q) {
  RationalVector sum = RationalVector::Zero(sfan.rank());
  for (int j = 0; j < cone.dim(); ++j)
    sum += to_rational(sfan.b(cone.rays[static_cast<std::size_t>(j)])) * q(j);
  auto lattice = to_lattice(sum);
  if (!lattice)
    throw Error(ErrorKind::InvalidArgument, "combination is not a lattice point");
  return *lattice;
}

std::vector<LatticeVector> parallelepiped_points(const StackyFan &sfan, const Cone &tau, Wide lo_num,
                                                 Wide hi_num, bool scale_hi) {
  const WordFrame f(b_frame(sfan, tau));
  Region r;
  r.lo.assign(static_cast<std::size_t>(f.k), lo_num);
  r.hi.assign(static_cast<std::size_t>(f.k), scale_hi ? hi_num * f.den : Wide(f.den) - 1);
  std::vector<LatticeVector> out;
  scan(f, r, [&](const std::vector<long long> &v, const std::vector<Wide> &) {
    out.push_back(to_lattice_vector(v));
  });
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

} // namespace

StackyFan::StackyFan(Fan fan, std::vector<Integer> weights)
    : fan_(std::move(fan)), weights_(std::move(weights)),
      b_fan_(fan_.rank(), {}, {}, fan_.support()) {
  if (static_cast<int>(weights_.size()) != fan_.num_rays())
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(fan_.num_rays()) +
                                                " weights, got " + std::to_string(weights_.size()));
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] < 1)
      throw Error(ErrorKind::InvalidArgument, "weight " + std::to_string(i) + " is not positive");
    b_.push_back(fan_.ray(static_cast<int>(i)) * weights_[i]);
  }
  b_fan_ = Fan(fan_.rank(), b_, fan_.cones(), fan_.support());
}

PiecewiseQLinear psi_functional(const StackyFan &sfan) {
  return PiecewiseQLinear::constant_on_b(sfan.num_rays(), Rational(1));
}

BoxElement zero_box_element(int rank) {
  return BoxElement{LatticeVector::Zero(rank), Cone{}, RationalVector(0), Integer(1)};
}

RationalVector b_coordinates(const StackyFan &sfan, const Cone &cone, const RationalVector &v) {
  return cone_coordinates(sfan.b_fan(), cone, v);
}

Rational psi(const StackyFan &sfan, const RationalVector &v) {
  return eval_pl(sfan, psi_functional(sfan), v);
}

Rational psi(const StackyFan &sfan, const LatticeVector &v) { return psi(sfan, to_rational(v)); }

Rational eval_pl(const StackyFan &sfan, const PiecewiseQLinear &f, const RationalVector &v) {
  if (static_cast<int>(f.size()) != sfan.num_rays())
    throw Error(ErrorKind::InvalidArgument, "functional has " + std::to_string(f.size()) +
                                                " values for " + std::to_string(sfan.num_rays()) + " rays");
  const Cone cone = minimal_containing_cone(sfan.b_fan(), v);
  const RationalVector q = b_coordinates(sfan, cone, v);
  Rational value(0);
  for (int j = 0; j < cone.dim(); ++j)
    value += q(j) * f.at_b(cone.rays[static_cast<std::size_t>(j)]);
  return value;
}

Rational eval_pl(const StackyFan &sfan, const PiecewiseQLinear &f, const LatticeVector &v) {
  return eval_pl(sfan, f, to_rational(v));
}

std::vector<BoxElement> box_elements(const StackyFan &sfan, const Cone &tau) {
  if (tau.is_zero())
    return {zero_box_element(sfan.rank())};
  std::vector<BoxElement> out;
  for (auto &v : parallelepiped_points(sfan, tau, 1, 0, false)) {
    RationalVector q = b_coordinates(sfan, tau, to_rational(v));
    Integer order = order_of(q);
    out.push_back(BoxElement{std::move(v), tau, std::move(q), std::move(order)});
  }
  return out;
}

std::vector<BoxElement> box_all(const StackyFan &sfan) {
  std::vector<BoxElement> out;
  for (const auto &cone : sfan.fan().cones())
    for (auto &e : box_elements(sfan, cone))
      out.push_back(std::move(e));
  return out;
}

BoxElement iota(const StackyFan &sfan, const BoxElement &e) {
  if (e.is_zero())
    return e;
  RationalVector q = RationalVector::Constant(e.q.size(), Rational(1)) - e.q;
  return BoxElement{combine(sfan, e.cone, q), e.cone, q, order_of(q)};
}

Rational age(const BoxElement &e) { return e.q.sum(); }

Integer element_order(const BoxElement &e) { return order_of(e.q); }

Integer group_order(const StackyFan &sfan, const Cone &sigma) {
  if (sigma.dim() != sfan.rank() || !sfan.fan().has_cone(sigma))
    throw Error(ErrorKind::NotMaximalCone, "cone " + to_string(sigma) + " is not a " +
                                               std::to_string(sfan.rank()) + "-dimensional cone of the fan");
  return determinant_abs(sfan.b_fan().generators(sigma));
}

FractionalDecomposition fractional_decompose(const StackyFan &sfan, const LatticeVector &w) {
  const Cone cone = minimal_containing_cone(sfan.b_fan(), to_rational(w));
  const RationalVector q = b_coordinates(sfan, cone, to_rational(w));
  std::vector<Integer> shifts;
  std::vector<int> box_rays;
  std::vector<Rational> fractions;
  LatticeVector rest = w;
  for (int j = 0; j < cone.dim(); ++j) {
    const int ray = cone.rays[static_cast<std::size_t>(j)];
    Integer n = floor_of(q(j));
    shifts.push_back(n);
    rest -= sfan.b(ray) * n;
    Rational frac = q(j) - Rational(n);
    if (frac != 0) {
      box_rays.push_back(ray);
      fractions.push_back(frac);
    }
  }
  BoxElement part = zero_box_element(sfan.rank());
  if (!box_rays.empty()) {
    RationalVector bq(static_cast<Eigen::Index>(fractions.size()));
    for (std::size_t i = 0; i < fractions.size(); ++i)
      bq(static_cast<Eigen::Index>(i)) = fractions[i];
    part = BoxElement{rest, Cone(box_rays), bq, order_of(bq)};
  }
  return FractionalDecomposition{w, cone, std::move(part), std::move(shifts)};
}

std::vector<LatticeVector> box_bar_n(const StackyFan &sfan, const Cone &tau, long long n) {
  if (n < 1)
    throw Error(ErrorKind::InvalidArgument, "n must be positive");
  if (tau.is_zero())
    return {LatticeVector::Zero(sfan.rank())};
  return parallelepiped_points(sfan, tau, 1, n, true);
}

void for_each_support_point(const StackyFan &sfan, const std::vector<Rational> &costs,
                            const Rational &bound,
                            const std::function<void(const SupportPoint &)> &visit) {
  if (static_cast<int>(costs.size()) != sfan.num_rays())
    throw Error(ErrorKind::InvalidArgument, "one cost per ray expected");
  Integer scale(1);
  for (const auto &c : costs) {
    if (c <= 0)
      throw Error(ErrorKind::InvalidArgument, "scan costs must be positive");
    scale = lcm_of(scale, denominator(c));
  }
  const Fan &fan = sfan.b_fan();
  const auto &maximal = fan.maximal_cones();
  // Each cone is reported from the first maximal cone containing it.
  std::vector<int> owner(fan.cones().size(), -1);
  for (std::size_t c = 0; c < fan.cones().size(); ++c)
    for (std::size_t m = 0; m < maximal.size(); ++m)
      if (fan.cones()[c].is_face_of(maximal[m])) {
        owner[c] = static_cast<int>(m);
        break;
      }
  if (bound < 0)
    return;
  for (std::size_t m = 0; m < maximal.size(); ++m) {
    const Cone &sigma = maximal[m];
    if (sigma.is_zero()) {
      LatticeVector zero = LatticeVector::Zero(sfan.rank());
      RationalVector q(0);
      visit(SupportPoint{zero, sigma, q});
      continue;
    }
    const WordFrame f(b_frame(sfan, sigma));
    Region r;
    r.lo.assign(static_cast<std::size_t>(f.k), 0);
    r.hi.assign(static_cast<std::size_t>(f.k), std::numeric_limits<long long>::max());
    for (int i : sigma.rays)
      r.cost.push_back(narrow(numerator(costs[static_cast<std::size_t>(i)] * Rational(scale))));
    r.budget = narrow(floor_of(bound * Rational(scale) * Rational(f.den)));
    r.has_budget = true;
    std::vector<int> face;
    scan(f, r, [&](const std::vector<long long> &v, const std::vector<Wide> &s) {
      face.clear();
      for (int i = 0; i < f.k; ++i)
        if (s[static_cast<std::size_t>(i)] > 0)
          face.push_back(sigma.rays[static_cast<std::size_t>(i)]);
      Cone cone(face);
      auto it = std::lower_bound(fan.cones().begin(), fan.cones().end(), cone);
      if (owner[static_cast<std::size_t>(it - fan.cones().begin())] != static_cast<int>(m))
        return;
      RationalVector q(cone.dim());
      Eigen::Index j = 0;
      for (int i = 0; i < f.k; ++i)
        if (s[static_cast<std::size_t>(i)] > 0)
          q(j++) = Rational(wide_to_integer(s[static_cast<std::size_t>(i)]), Integer(f.den));
      LatticeVector point = to_lattice_vector(v);
      visit(SupportPoint{point, cone, q});
    });
  }
}

std::vector<LatticeVector> support_points(const StackyFan &sfan, const Rational &bound) {
  std::vector<std::pair<Rational, LatticeVector>> found;
  for_each_support_point(sfan, std::vector<Rational>(static_cast<std::size_t>(sfan.num_rays()), Rational(1)),
                         bound, [&](const SupportPoint &p) { found.emplace_back(p.q.sum(), p.point); });
  std::sort(found.begin(), found.end(), [](const auto &x, const auto &y) {
    if (x.first != y.first)
      return x.first < y.first;
    return lex_less(x.second, y.second);
  });
  std::vector<LatticeVector> out;
  out.reserve(found.size());
  for (auto &p : found)
    out.push_back(std::move(p.second));
  return out;
}

} // namespace stackyfan
