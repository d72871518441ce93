#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace stackyfan;
using namespace stackyfan::testing;

namespace {

StackyFan wedge() {
  return StackyFan(Fan::generated_by(2, {lv({1, 0}), lv({1, 2})}, {Cone{0, 1}}, SupportKind::convex), {1, 1});
}

std::vector<LatticeVector> points_of(const std::vector<BoxElement> &elements) {
  std::vector<LatticeVector> out;
  for (const auto &e : elements)
    out.push_back(e.point);
  return out;
}

std::vector<StackyFan> small_fans() {
  std::vector<StackyFan> fans;
  for (const auto &name : named_fixtures())
    fans.push_back(fixture(name));
  fans.push_back(fixture("fan_p2_blowup"));
  fans.push_back(wedge());
  std::mt19937_64 rng(101);
  for (int i = 0; i < 12; ++i)
    fans.push_back(random_stacky_fan(rng, 1 + i % 2, i % 3 ? RandomKind::complete : RandomKind::convex).sfan);
  return fans;
}

} // namespace

TEST_CASE("stacky fan data") {
  const StackyFan p12 = fixture("fan_p12");
  CHECK(p12.b(1) == lv({-2}));
  CHECK(p12.b_fan().ray(1) == lv({-2}));
  CHECK_THROWS_AS(StackyFan(fixture("fan_p2").fan(), {1, 1}), Error);
  CHECK_THROWS_AS(StackyFan(fixture("fan_p1").fan(), {1, 0}), Error);
}

TEST_CASE("psi") {
  const StackyFan p12 = fixture("fan_p12");
  CHECK(psi(p12, lv({-2})) == 1);
  CHECK(psi(p12, lv({-3})) == r(3, 2));
  CHECK(psi(p12, lv({0})) == 0);
  CHECK(psi(p12, lv({4})) == 4);
  CHECK(psi(fixture("fan_p2"), lv({-2, 1})) == 5);
  CHECK_THROWS_AS(psi(fixture("fan_a1"), lv({-1})), Error);
}

TEST_CASE("piecewise linear evaluation") {
  const StackyFan p1 = fixture("fan_p1");
  const auto f = functional({r(1), r(0)});
  CHECK(eval_pl(p1, f, lv({3})) == 3);
  CHECK(eval_pl(p1, f, lv({-2})) == 0);
  CHECK_THROWS_AS(eval_pl(p1, functional({r(1)}), lv({1})), Error);
  const StackyFan p2 = fixture("fan_p2");
  CHECK(eval_pl(p2, functional({r(1, 2), r(0), r(-1, 3)}), lv({-1, -2})) == r(-1, 6));
}

TEST_CASE("psi is homogeneous and matches the constant functional") {
  for (const auto &sfan : small_fans()) {
    const auto one = PiecewiseQLinear::constant_on_b(sfan.num_rays(), Rational(1));
    CHECK(psi_functional(sfan) == one);
    for (const auto &[v, loc] : oracle_points(sfan, Rational(2))) {
      const Rational p = psi(sfan, v);
      CHECK(p == eval_pl(sfan, one, v));
      CHECK(psi(sfan, RationalVector(to_rational(v) * Rational(5, 3))) == p * Rational(5, 3));
      CHECK(psi(sfan, LatticeVector(v * Integer(3))) == 3 * p);
    }
  }
}

TEST_CASE("box elements of named cones") {
  const StackyFan w = wedge();
  auto box = box_elements(w, Cone{0, 1});
  REQUIRE(box.size() == 1);
  CHECK(box[0].point == lv({1, 1}));
  CHECK(box[0].q == rational_vector({r(1, 2), r(1, 2)}));
  CHECK(box[0].order == 2);
  CHECK(group_order(w, Cone{0, 1}) == 2);

  const StackyFan p112 = fixture("fan_p112");
  auto b02 = box_elements(p112, Cone{0, 2});
  REQUIRE(b02.size() == 1);
  CHECK(b02[0].point == lv({0, -1}));
  CHECK(age(b02[0]) == 1);
  CHECK(box_elements(p112, Cone{0}).empty());
  CHECK(points_of(box_all(p112)) == std::vector<LatticeVector>{lv({0, 0}), lv({0, -1})});

  const StackyFan p12 = fixture("fan_p12");
  auto all = box_all(p12);
  REQUIRE(all.size() == 2);
  CHECK(all[0].is_zero());
  CHECK(all[1].point == lv({-1}));
  CHECK(all[1].q == rational_vector({r(1, 2)}));
  CHECK(age(all[1]) == r(1, 2));
  CHECK(iota(p12, all[1]).point == lv({-1}));
  CHECK(group_order(p12, Cone{1}) == 2);

  const auto p2 = box_all(fixture("fan_p2"));
  REQUIRE(p2.size() == 1);
  CHECK(p2[0].is_zero());
  const StackyFan p2fan = fixture("fan_p2");
  for (const auto &sigma : p2fan.fan().maximal_cones())
    CHECK(group_order(p2fan, sigma) == 1);

  const BoxElement zero = zero_box_element(2);
  CHECK(age(zero) == 0);
  CHECK(element_order(zero) == 1);
  CHECK(iota(p112, zero).is_zero());
  CHECK(iota(w, box[0]).point == lv({1, 1}));

  try {
    group_order(p112, Cone{0});
    FAIL("expected NotMaximalCone");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::NotMaximalCone);
  }
}

TEST_CASE("element order") {
  BoxElement e;
  e.cone = Cone{0, 1};
  e.q = rational_vector({r(1, 2), r(2, 3)});
  CHECK(element_order(e) == 6);
  e.q = rational_vector({r(1, 2), r(1, 2)});
  CHECK(element_order(e) == 2);
}

TEST_CASE("box elements agree with the cube oracle") {
  for (const auto &sfan : small_fans())
    for (const auto &tau : sfan.fan().cones()) {
      CAPTURE(to_string(tau));
      CHECK(points_of(box_elements(sfan, tau)) == oracle_box(sfan, tau));
    }
}

TEST_CASE("box and group order bijection, involution and ages") {
  for (const auto &sfan : small_fans()) {
    for (const auto &sigma : sfan.fan().maximal_cones()) {
      if (sigma.dim() != sfan.rank())
        continue;
      std::size_t total = 0;
      for (const auto &tau : sigma.faces())
        total += box_elements(sfan, tau).size();
      CHECK(Integer(static_cast<long long>(total)) == group_order(sfan, sigma));
    }
    for (const auto &e : box_all(sfan)) {
      const BoxElement dual = iota(sfan, e);
      CHECK(iota(sfan, dual).point == e.point);
      CHECK(dual.cone == e.cone);
      CHECK(age(e) + age(dual) == e.cone.dim());
      CHECK(element_order(e) == e.order);
      CHECK(age(e) == psi(sfan, e.point));
    }
  }
}

TEST_CASE("fractional decomposition") {
  const auto a1 = fractional_decompose(fixture("fan_a1"), lv({2}));
  CHECK(a1.box_part.is_zero());
  CHECK(a1.shifts == std::vector<Integer>{2});

  const auto p12 = fractional_decompose(fixture("fan_p12"), lv({-3}));
  CHECK(p12.box_part.point == lv({-1}));
  CHECK(p12.cone == Cone{1});
  CHECK(p12.shifts == std::vector<Integer>{1});

  const StackyFan p112 = fixture("fan_p112");
  const auto d = fractional_decompose(p112, lv({-1, -3}));
  CHECK(d.cone == Cone{0, 2});
  CHECK(d.box_part.point == lv({0, -1}));
  CHECK(d.shifts == std::vector<Integer>{0, 1});

  for (const auto &sfan : small_fans()) {
    for (int j = 0; j < sfan.num_rays(); ++j) {
      const auto unit = fractional_decompose(sfan, sfan.b(j));
      CHECK(unit.box_part.is_zero());
      CHECK(unit.shifts == std::vector<Integer>{1});
    }
    for (const auto &[v, loc] : oracle_points(sfan, Rational(3))) {
      const auto fd = fractional_decompose(sfan, v);
      CHECK(fd.cone == loc.cone);
      LatticeVector back = fd.box_part.point;
      for (int k = 0; k < fd.cone.dim(); ++k)
        back += sfan.b(fd.cone.rays[static_cast<std::size_t>(k)]) * fd.shifts[static_cast<std::size_t>(k)];
      CHECK(back == v);
      CHECK(fd.box_part.cone.is_face_of(fd.cone));
    }
  }
  CHECK_THROWS_AS(fractional_decompose(fixture("fan_a1"), lv({-1})), Error);
}

TEST_CASE("closed parallelepipeds") {
  CHECK(box_bar_n(fixture("fan_a1"), Cone{0}, 2) == std::vector<LatticeVector>{lv({1}), lv({2})});
  CHECK(box_bar_n(fixture("fan_p12"), Cone{1}, 1) == std::vector<LatticeVector>{lv({-2}), lv({-1})});
  CHECK(box_bar_n(wedge(), Cone{0, 1}, 1) == std::vector<LatticeVector>{lv({1, 1}), lv({2, 2})});
  CHECK(box_bar_n(wedge(), Cone{0, 1}, 2).size() == 8);
  CHECK_THROWS_AS(box_bar_n(wedge(), Cone{0, 1}, 0), Error);

  for (const auto &sfan : small_fans())
    for (const auto &tau : sfan.fan().cones()) {
      if (tau.is_zero())
        continue;
      std::vector<LatticeVector> strict;
      for (const auto &v : box_bar_n(sfan, tau, 1)) {
        const auto loc = oracle_locate(sfan, v);
        REQUIRE(loc);
        bool open = loc->cone == tau;
        for (Eigen::Index i = 0; i < loc->q.size(); ++i)
          open = open && loc->q(i) < 1;
        if (open)
          strict.push_back(v);
      }
      CHECK(strict == points_of(box_elements(sfan, tau)));
    }
}

TEST_CASE("support points agree with the cube oracle") {
  for (const auto &sfan : small_fans()) {
    for (const Rational &bound : {Rational(0), r(3, 2), Rational(3)}) {
      auto oracle = oracle_points(sfan, bound);
      std::vector<LatticeVector> expected;
      for (const auto &[v, loc] : oracle)
        expected.push_back(v);
      std::sort(expected.begin(), expected.end(), [&](const LatticeVector &a, const LatticeVector &b) {
        const Rational pa = psi(sfan, a), pb = psi(sfan, b);
        return pa != pb ? pa < pb : lex_less(a, b);
      });
      CHECK(support_points(sfan, bound) == expected);
    }
  }
}

TEST_CASE("support scan with weighted costs") {
  std::mt19937_64 rng(7);
  for (const auto &sfan : small_fans()) {
    std::vector<Rational> costs;
    for (int i = 0; i < sfan.num_rays(); ++i)
      costs.push_back(Rational(std::uniform_int_distribution<int>(1, 8)(rng)) / Rational(4));
    std::size_t visited = 0;
    bool coordinates_match = true;
    for_each_support_point(sfan, costs, Rational(2), [&](const SupportPoint &p) {
      ++visited;
      const auto loc = oracle_locate(sfan, p.point);
      coordinates_match = coordinates_match && loc && loc->cone == p.cone && loc->q == p.q;
    });
    CHECK(coordinates_match);
    // Points with cost <= 2 all have psi <= 2 / min cost.
    const Rational min_cost = *std::min_element(costs.begin(), costs.end());
    std::size_t expected = 0;
    for (const auto &[v, loc] : oracle_points(sfan, Rational(2) / min_cost)) {
      Rational c(0);
      for (int k = 0; k < loc.cone.dim(); ++k)
        c += costs[static_cast<std::size_t>(loc.cone.rays[static_cast<std::size_t>(k)])] * loc.q(k);
      if (c <= 2)
        ++expected;
    }
    CHECK(visited == expected);
  }
  CHECK_THROWS_AS(for_each_support_point(wedge(), {Rational(1), Rational(0)}, Rational(1), [](const SupportPoint &) {}),
                  Error);
}

TEST_CASE("oversized coordinates are rejected") {
  const StackyFan huge(Fan::generated_by(1, {lv({1})}, {Cone{0}}, SupportKind::convex),
                       {Integer(1) << 50});
  try {
    support_points(huge, Rational(2));
    FAIL("expected Overflow");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}
