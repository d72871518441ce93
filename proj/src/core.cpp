#include "stackyfan/core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace stackyfan {

Integer floor_of(const Rational &x) {
  Integer n = numerator(x);
  Integer d = denominator(x);
  Integer q = n / d;
  if (n % d != 0 && n < 0)
    q -= 1;
  return q;
}

Integer ceil_of(const Rational &x) { return -floor_of(-x); }

bool is_integral(const Rational &x) { return denominator(x) == 1; }

Integer gcd_of(const Integer &a, const Integer &b) { return boost::multiprecision::gcd(a, b); }

Integer lcm_of(const Integer &a, const Integer &b) {
  if (a == 0 || b == 0)
    return Integer(0);
  return abs(a / gcd_of(a, b) * b);
}

std::string to_string(const Rational &x) {
  if (denominator(x) == 1)
    return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

Rational parse_rational(const std::string &text) {
  auto bad = [&] { return Error(ErrorKind::ParseError, "malformed rational '" + text + "'"); };
  auto slash = text.find('/');
  auto parse_int = [&](const std::string &s, bool allow_sign) {
    if (s.empty())
      throw bad();
    std::size_t start = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+'))
      start = 1;
    if (start == s.size())
      throw bad();
    for (std::size_t i = start; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9')
        throw bad();
    return Integer(s[0] == '+' ? s.substr(1) : s);
  };
  if (slash == std::string::npos)
    return Rational(parse_int(text, true));
  Integer num = parse_int(text.substr(0, slash), true);
  Integer den = parse_int(text.substr(slash + 1), false);
  if (den == 0)
    throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
  return Rational(num, den);
}

LatticeVector lattice_vector(std::initializer_list<long long> coords) {
  LatticeVector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (long long c : coords)
    v(i++) = Integer(c);
  return v;
}

RationalVector rational_vector(std::initializer_list<Rational> coords) {
  RationalVector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (const auto &c : coords)
    v(i++) = c;
  return v;
}

RationalVector to_rational(const LatticeVector &v) {
  RationalVector r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    r(i) = Rational(v(i));
  return r;
}

std::optional<LatticeVector> to_lattice(const RationalVector &v) {
  LatticeVector r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!is_integral(v(i)))
      return std::nullopt;
    r(i) = numerator(v(i));
  }
  return r;
}

bool lex_less(const LatticeVector &a, const LatticeVector &b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

Integer content(const LatticeVector &v) {
  Integer g(0);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    g = gcd_of(g, v(i));
  return g;
}

bool is_primitive(const LatticeVector &v) { return content(v) == 1; }

std::string to_string(const LatticeVector &v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i)
      s += ",";
    s += v(i).str();
  }
  return s + ")";
}

std::string to_string(const RationalVector &v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i)
      s += ",";
    s += to_string(v(i));
  }
  return s + ")";
}

// ---------------------------------------------------------------------------

namespace {

// Integer augmented matrix with the same solution set: each row is scaled by
// the lcm of its denominators.
IntegerMatrix clear_denominators(const RationalMatrix &a, const RationalVector &b) {
  IntegerMatrix m(a.rows(), a.cols() + 1);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Integer scale(1);
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      scale = lcm_of(scale, denominator(a(r, c)));
    scale = lcm_of(scale, denominator(b(r)));
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      m(r, c) = numerator(a(r, c) * Rational(scale));
    m(r, a.cols()) = numerator(b(r) * Rational(scale));
  }
  return m;
}

} // namespace

std::optional<RationalVector> solve_rational_system(const RationalMatrix &matrix,
                                                    const RationalVector &rhs) {
  if (matrix.rows() != rhs.size())
    throw Error(ErrorKind::InvalidArgument, "system dimensions disagree");
  const Eigen::Index k = matrix.cols();
  IntegerMatrix m = clear_denominators(matrix, rhs);
  auto pivots = fraction_free_echelon(m);
  if (!pivots.empty() && pivots.back() == k)
    return std::nullopt;
  RationalVector x = RationalVector::Zero(k);
  for (auto p = static_cast<Eigen::Index>(pivots.size()) - 1; p >= 0; --p) {
    Eigen::Index col = pivots[static_cast<std::size_t>(p)];
    Rational acc(m(p, k));
    for (Eigen::Index c = col + 1; c < k; ++c)
      acc -= Rational(m(p, c)) * x(c);
    x(col) = acc / Rational(m(p, col));
  }
  return x;
}

IntegerMatrix column_matrix(std::span<const LatticeVector> vectors) {
  const Eigen::Index rows = vectors.empty() ? 0 : vectors.front().size();
  IntegerMatrix m(rows, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != rows)
      throw Error(ErrorKind::InvalidArgument, "vectors of unequal length");
    m.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return m;
}

Integer determinant_abs(const IntegerMatrix &columns) {
  return abs(bareiss_determinant<Integer>(columns));
}

Integer determinant_abs(std::span<const LatticeVector> vectors) {
  return determinant_abs(column_matrix(vectors));
}

bool has_nonnegative_solution(const RationalMatrix &a, const RationalVector &b) {
  // Phase one of the tableau simplex method with Bland's rule: minimise the sum
  // of artificial variables.
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  RationalMatrix t = RationalMatrix::Zero(m + 1, n + m + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) {
    Rational sign = b(r) < 0 ? Rational(-1) : Rational(1);
    for (Eigen::Index c = 0; c < n; ++c)
      t(r, c) = sign * a(r, c);
    t(r, n + r) = 1;
    t(r, n + m) = sign * b(r);
    basis[static_cast<std::size_t>(r)] = n + r;
  }
  // Objective row holds reduced costs of the artificial sum.
  for (Eigen::Index c = 0; c <= n + m; ++c) {
    if (c >= n && c < n + m)
      continue;
    Rational s(0);
    for (Eigen::Index r = 0; r < m; ++r)
      s += t(r, c);
    t(m, c) = -s;
  }
  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index c = 0; c < n + m; ++c)
      if (t(m, c) < 0) {
        enter = c;
        break;
      }
    if (enter < 0)
      break;
    Eigen::Index leave = -1;
    Rational best;
    for (Eigen::Index r = 0; r < m; ++r) {
      if (t(r, enter) <= 0)
        continue;
      Rational ratio = t(r, n + m) / t(r, enter);
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0)
      break; // unbounded cannot happen for a sum of non-negative variables
    Rational pivot = t(leave, enter);
    for (Eigen::Index c = 0; c <= n + m; ++c)
      t(leave, c) /= pivot;
    for (Eigen::Index r = 0; r <= m; ++r) {
      if (r == leave || t(r, enter) == 0)
        continue;
      Rational f = t(r, enter);
      for (Eigen::Index c = 0; c <= n + m; ++c)
        t(r, c) -= f * t(leave, c);
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
  return t(m, n + m) == 0;
}

// ---------------------------------------------------------------------------

ConeFrame::ConeFrame(IntegerMatrix generators) : generators_(std::move(generators)) {
  const Eigen::Index d = generators_.rows();
  const Eigen::Index k = generators_.cols();
  // Pick k independent rows: pivot columns of the transpose.
  IntegerMatrix transposed = generators_.transpose();
  auto rows = fraction_free_echelon(transposed);
  if (static_cast<Eigen::Index>(rows.size()) != k)
    throw Error(ErrorKind::InvalidArgument, "generators are linearly dependent");
  IntegerMatrix square(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    square.row(i) = generators_.row(rows[static_cast<std::size_t>(i)]);
  Integer det = bareiss_determinant<Integer>(square);
  // adj(square) = det * inverse(square), solved column by column.
  RationalMatrix sq = square.cast<Rational>();
  numerators_ = IntegerMatrix::Zero(k, d);
  for (Eigen::Index j = 0; j < k; ++j) {
    RationalVector e = RationalVector::Zero(k);
    e(j) = 1;
    auto col = solve_rational_system(sq, e);
    for (Eigen::Index i = 0; i < k; ++i)
      numerators_(i, rows[static_cast<std::size_t>(j)]) = numerator((*col)(i) * Rational(det));
  }
  denominator_ = det;
  if (denominator_ < 0) {
    denominator_ = -denominator_;
    numerators_ = -numerators_;
  }
}

std::optional<LatticeVector> ConeFrame::scaled_coordinates(const LatticeVector &v) const {
  if (v.size() != rank())
    throw Error(ErrorKind::InvalidArgument, "vector has wrong length");
  LatticeVector q = numerators_ * v;
  if (size() < rank()) {
    LatticeVector back = generators_ * q;
    if (back != v * denominator_)
      return std::nullopt;
  }
  return q;
}

std::optional<RationalVector> ConeFrame::coordinates(const RationalVector &v) const {
  if (v.size() != rank())
    throw Error(ErrorKind::InvalidArgument, "vector has wrong length");
  RationalVector q = numerators_.cast<Rational>() * v / Rational(denominator_);
  if (size() < rank()) {
    RationalVector back = generators_.cast<Rational>() * q;
    if (back != v)
      return std::nullopt;
  }
  return q;
}

// ---------------------------------------------------------------------------

Cone::Cone(std::vector<int> indices) : rays(std::move(indices)) {
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
}

bool Cone::contains_ray(int i) const { return std::binary_search(rays.begin(), rays.end(), i); }

bool Cone::is_face_of(const Cone &other) const {
  return std::includes(other.rays.begin(), other.rays.end(), rays.begin(), rays.end());
}

std::vector<Cone> Cone::faces() const {
  std::vector<Cone> out;
  const std::size_t k = rays.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<int> sub;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i))
        sub.push_back(rays[i]);
    out.emplace_back(std::move(sub));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const Cone &cone) {
  std::string s = "{";
  for (std::size_t i = 0; i < cone.rays.size(); ++i) {
    if (i)
      s += ",";
    s += std::to_string(cone.rays[i]);
  }
  return s + "}";
}

Cone join(const Cone &a, const Cone &b) {
  std::vector<int> all = a.rays;
  all.insert(all.end(), b.rays.begin(), b.rays.end());
  return Cone(std::move(all));
}

std::string to_string(SupportKind kind) {
  switch (kind) {
  case SupportKind::complete:
    return "complete";
  case SupportKind::convex:
    return "convex";
  case SupportKind::general:
    return "general";
  }
  return "general";
}

Fan::Fan(int rank, std::vector<LatticeVector> rays, std::vector<Cone> cones, SupportKind support)
    : rank_(rank), rays_(std::move(rays)), cones_(std::move(cones)), support_(support) {
  cones_.push_back(Cone{});
  std::sort(cones_.begin(), cones_.end());
  cones_.erase(std::unique(cones_.begin(), cones_.end()), cones_.end());
  for (const auto &c : cones_) {
    bool maximal = true;
    for (const auto &other : cones_)
      if (other.dim() > c.dim() && c.is_face_of(other)) {
        maximal = false;
        break;
      }
    if (maximal)
      maximal_.push_back(c);
  }
  frames_.reserve(cones_.size());
  for (const auto &c : cones_) {
    std::optional<ConeFrame> frame;
    bool in_range = std::all_of(c.rays.begin(), c.rays.end(),
                                [&](int i) { return i >= 0 && i < num_rays(); });
    bool lengths_ok = in_range && std::all_of(c.rays.begin(), c.rays.end(), [&](int i) {
                        return ray(i).size() == rank_;
                      });
    if (lengths_ok && rank_ > 0) {
      try {
        frame.emplace(generators(c));
      } catch (const Error &) {
      }
    }
    frames_.push_back(std::move(frame));
  }
}

Fan Fan::generated_by(int rank, std::vector<LatticeVector> rays, const std::vector<Cone> &maximal,
                      SupportKind support) {
  std::set<Cone> all;
  for (const auto &c : maximal)
    for (auto &f : c.faces())
      all.insert(std::move(f));
  return Fan(rank, std::move(rays), std::vector<Cone>(all.begin(), all.end()), support);
}

bool Fan::has_cone(const Cone &cone) const {
  return std::binary_search(cones_.begin(), cones_.end(), cone);
}

std::vector<Cone> Fan::cones_of_dim(int dim) const {
  std::vector<Cone> out;
  for (const auto &c : cones_)
    if (c.dim() == dim)
      out.push_back(c);
  return out;
}

IntegerMatrix Fan::generators(const Cone &cone) const {
  IntegerMatrix m(rank_, cone.dim());
  for (int j = 0; j < cone.dim(); ++j)
    m.col(j) = ray(cone.rays[static_cast<std::size_t>(j)]);
  return m;
}

const ConeFrame *Fan::frame(const Cone &cone) const {
  auto it = std::lower_bound(cones_.begin(), cones_.end(), cone);
  if (it == cones_.end() || *it != cone)
    return nullptr;
  const auto &f = frames_[static_cast<std::size_t>(it - cones_.begin())];
  return f ? &*f : nullptr;
}

// ---------------------------------------------------------------------------

namespace {

std::string cone_label(const Fan &fan, const Cone &cone) {
  std::string s = "<";
  for (std::size_t i = 0; i < cone.rays.size(); ++i) {
    if (i)
      s += ",";
    s += to_string(fan.ray(cone.rays[i]));
  }
  return s + ">";
}

// Two simplicial cones meet in their common face iff no point of both has a
// positive coordinate on a non-shared ray.
bool intersect_properly(const Fan &fan, const Cone &a, const Cone &b) {
  const int d = fan.rank();
  const int n = a.dim() + b.dim();
  RationalMatrix m = RationalMatrix::Zero(d + 1, n);
  RationalVector rhs = RationalVector::Zero(d + 1);
  int col = 0;
  bool any_private = false;
  for (int i : a.rays) {
    m.block(0, col, d, 1) = fan.ray(i).cast<Rational>();
    if (!b.contains_ray(i)) {
      m(d, col) = 1;
      any_private = true;
    }
    ++col;
  }
  for (int i : b.rays) {
    m.block(0, col, d, 1) = -fan.ray(i).cast<Rational>();
    if (!a.contains_ray(i)) {
      m(d, col) = 1;
      any_private = true;
    }
    ++col;
  }
  if (!any_private)
    return true;
  rhs(d) = 1;
  return !has_nonnegative_solution(m, rhs);
}

// Integer normal of the hyperplane spanned by d-1 independent vectors.
LatticeVector hyperplane_normal(const IntegerMatrix &gens) {
  const Eigen::Index d = gens.rows();
  LatticeVector normal(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    IntegerMatrix minor(d - 1, d - 1);
    Eigen::Index r = 0;
    for (Eigen::Index row = 0; row < d; ++row) {
      if (row == i)
        continue;
      minor.row(r++) = gens.row(row);
    }
    Integer det = bareiss_determinant<Integer>(minor);
    normal(i) = (i % 2 == 0) ? det : Integer(-det);
  }
  return normal;
}

} // namespace

ValidationReport validate_fan(const Fan &fan) {
  ValidationReport report;
  using K = Violation::Kind;
  auto add = [&](K kind, std::vector<int> idx, std::string msg) {
    report.push_back(Violation{kind, std::move(idx), std::move(msg)});
  };
  const int d = fan.rank();
  if (d < 1) {
    add(K::BadRank, {}, "rank must be positive");
    return report;
  }
  bool rays_ok = true;
  for (int i = 0; i < fan.num_rays(); ++i) {
    const auto &r = fan.ray(i);
    if (r.size() != d) {
      add(K::BadRay, {i}, "ray " + std::to_string(i) + " has length " + std::to_string(r.size()) +
                              ", expected " + std::to_string(d));
      rays_ok = false;
    } else if (content(r) == 0) {
      add(K::BadRay, {i}, "ray " + std::to_string(i) + " is zero");
      rays_ok = false;
    } else if (!is_primitive(r)) {
      add(K::NotPrimitive, {i}, "ray " + std::to_string(i) + " not primitive");
    }
  }
  if (!rays_ok)
    return report;
  for (int i = 0; i < fan.num_rays(); ++i)
    for (int j = i + 1; j < fan.num_rays(); ++j)
      if (fan.ray(i) == fan.ray(j))
        add(K::DuplicateRay, {i, j},
            "rays " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

  bool cones_ok = true;
  for (const auto &c : fan.cones()) {
    bool in_range = std::all_of(c.rays.begin(), c.rays.end(),
                                [&](int i) { return i >= 0 && i < fan.num_rays(); });
    if (!in_range) {
      add(K::BadCone, c.rays, "cone " + to_string(c) + " references a missing ray");
      cones_ok = false;
      continue;
    }
    if (!fan.frame(c)) {
      add(K::NotSimplicial, c.rays, "cone " + to_string(c) + " not simplicial");
      cones_ok = false;
    }
  }
  if (!cones_ok)
    return report;
  for (const auto &c : fan.cones())
    for (const auto &f : c.faces())
      if (!fan.has_cone(f))
        add(K::MissingFace, f.rays, "face " + to_string(f) + " of cone " + to_string(c) + " missing");

  const auto &maximal = fan.maximal_cones();
  for (std::size_t i = 0; i < maximal.size(); ++i)
    for (std::size_t j = i + 1; j < maximal.size(); ++j)
      if (!intersect_properly(fan, maximal[i], maximal[j])) {
        std::vector<int> idx = maximal[i].rays;
        idx.insert(idx.end(), maximal[j].rays.begin(), maximal[j].rays.end());
        add(K::ImproperIntersection, idx,
            "cones " + to_string(maximal[i]) + " and " + to_string(maximal[j]) +
                " intersect outside a common face");
      }

  if (fan.support() == SupportKind::general)
    return report;

  auto full = fan.cones_of_dim(d);
  if (full.empty()) {
    add(K::NoFullCone, {}, "no " + std::to_string(d) + "-dimensional cone");
    return report;
  }
  for (const auto &c : maximal)
    if (c.dim() != d)
      add(K::NotPure, c.rays, "maximal cone " + to_string(c) + " is not full-dimensional");

  for (const auto &facet : fan.cones_of_dim(d - 1)) {
    std::vector<const Cone *> owners;
    for (const auto &c : full)
      if (facet.is_face_of(c))
        owners.push_back(&c);
    if (owners.size() == 2)
      continue;
    if (fan.support() == SupportKind::complete || owners.size() > 2) {
      add(K::BoundaryFacet, facet.rays,
          "facet " + cone_label(fan, facet) + " on " + std::to_string(owners.size()) +
              " maximal cone" + (owners.size() == 1 ? "" : "s"));
      continue;
    }
    if (owners.empty())
      continue;
    // Boundary facet of a convex fan: every ray lies on the closed side of the
    // facet's hyperplane that contains the owning cone.
    LatticeVector normal = hyperplane_normal(fan.generators(facet));
    int apex = -1;
    for (int r : owners.front()->rays)
      if (!facet.contains_ray(r))
        apex = r;
    Integer side = normal.dot(fan.ray(apex));
    if (side < 0)
      normal = -normal;
    for (int r = 0; r < fan.num_rays(); ++r)
      if (normal.dot(fan.ray(r)) < 0) {
        add(K::NotConvex, facet.rays, "support not convex at facet " + cone_label(fan, facet));
        break;
      }
  }
  return report;
}

Cone minimal_containing_cone(const Fan &fan, const RationalVector &v) {
  if (v.size() != fan.rank())
    throw Error(ErrorKind::InvalidArgument, "vector has wrong length");
  if (v.isZero())
    return Cone{};
  for (const auto &c : fan.maximal_cones()) {
    const ConeFrame *frame = fan.frame(c);
    if (!frame)
      continue;
    auto q = frame->coordinates(v);
    if (!q)
      continue;
    if (q->minCoeff() < 0)
      continue;
    std::vector<int> support;
    for (int j = 0; j < c.dim(); ++j)
      if ((*q)(j) > 0)
        support.push_back(c.rays[static_cast<std::size_t>(j)]);
    return Cone(std::move(support));
  }
  throw Error(ErrorKind::OutsideSupport, "point " + to_string(v) + " lies outside the fan support");
}

RationalVector cone_coordinates(const Fan &fan, const Cone &cone, const RationalVector &v) {
  if (cone.is_zero()) {
    if (!v.isZero())
      throw Error(ErrorKind::NotInSpan, "point " + to_string(v) + " is not in the span of the zero cone");
    return RationalVector(0);
  }
  const ConeFrame *frame = fan.frame(cone);
  std::optional<ConeFrame> local;
  if (!frame) {
    local.emplace(fan.generators(cone));
    frame = &*local;
  }
  auto q = frame->coordinates(v);
  if (!q)
    throw Error(ErrorKind::NotInSpan,
                "point " + to_string(v) + " is not in the span of cone " + to_string(cone));
  return *q;
}

} // namespace stackyfan
