// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace stackyfan;
using namespace stackyfan::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5)
        failures.push_back(what);
    }
  }
};

struct SuiteEntry {
  RandomFan fan;
  std::vector<PiecewiseQLinear> lambdas;
  bool complete;
};

PiecewiseQLinear zero(const StackyFan &sfan) { return PiecewiseQLinear::constant_on_b(sfan.num_rays(), Rational(0)); }

StackDivisor zero_divisor(const StackyFan &sfan) {
  return StackDivisor(std::vector<Rational>(static_cast<std::size_t>(sfan.num_rays()), Rational(0)));
}

std::string describe(const PiecewiseQLinear &lam) {
  std::string s = "lambda";
  for (const auto &v : lam.values_on_b())
    s += " " + to_string(v);
  return s;
}

const std::vector<SuiteEntry> &random_suite() {
  static const std::vector<SuiteEntry> suite = [] {
    std::mt19937_64 rng(20240611);
    std::vector<SuiteEntry> out;
    const struct {
      int rank;
      RandomKind kind;
      int count;
    } plan[] = {{1, RandomKind::complete, 3}, {1, RandomKind::convex, 3},  {2, RandomKind::complete, 12},
                {2, RandomKind::convex, 12},  {3, RandomKind::complete, 10}, {3, RandomKind::convex, 10}};
    for (const auto &p : plan)
      for (int i = 0; i < p.count; ++i) {
        SuiteEntry e{random_stacky_fan(rng, p.rank, p.kind), {}, p.kind == RandomKind::complete};
        for (int k = 0; k < 3; ++k)
          e.lambdas.push_back(random_admissible_lambda(rng, e.fan.sfan.num_rays()));
        out.push_back(std::move(e));
      }
    return out;
  }();
  return suite;
}

std::vector<std::pair<std::string, StackyFan>> all_test_fans() {
  std::vector<std::pair<std::string, StackyFan>> fans;
  for (const auto &name : named_fixtures())
    fans.emplace_back(name, fixture(name));
  fans.emplace_back("fan_p2_blowup", fixture("fan_p2_blowup"));
  for (const auto &e : random_suite())
    fans.emplace_back(e.fan.description, e.fan.sfan);
  return fans;
}

// Binomial transform of oracle counts: delta = (1 - t)^{d+1} sum f(m) t^m, truncated at degree d.
FracPoly oracle_ehrhart_delta(const StackyFan &sfan) {
  FracPoly series;
  for (long long m = 0; m <= sfan.rank(); ++m)
    series.add_term(Rational(oracle_count(sfan, m)), Rational(m));
  FracPoly product = series * FracPoly::one_minus_power(Rational(1)).pow(static_cast<unsigned>(sfan.rank() + 1));
  FracPoly out;
  for (const auto &[e, c] : product.terms())
    if (e <= sfan.rank())
      out.add_term(c, e);
  return out;
}

Outcome criterion1() {
  Outcome o;
  const FracPoly one(Rational(1));
  const auto tp = [](long long p, long long q = 1) { return t(r(p, q)); };
  struct Named {
    const char *name;
    FracPoly delta;
    FracPoly gamma;
  };
  const Named named[] = {
      {"fan_a1", one, tp(1)},
      {"fan_p1", one + tp(1), tp(1) + one},
      {"fan_p2", one + tp(1) + tp(2), tp(2) + tp(1) + one},
      {"fan_p12", one + tp(1, 2) + tp(1), tp(1) + tp(1, 2) + one},
      {"fan_p112", one + t(1, 2) + tp(2), tp(2) + t(1, 2) + one},
  };
  for (const auto &n : named) {
    const StackyFan sfan = fixture(n.name);
    const std::string name = n.name;
    const Rational cutoff(sfan.rank() + 2);
    const long long levels = series_level_bound(zero(sfan), cutoff).convert_to<long long>();
    // The frozen value must agree with the brute-force oracle first.
    o.require(series_equal(oracle_weighted_delta(sfan, zero(sfan), cutoff, levels),
                           TruncatedSeries::from_poly(n.delta, cutoff)),
              name + ": frozen delta^0 disagrees with the oracle");
    const FracRational closed = weighted_delta_closed(sfan, zero(sfan));
    o.require(closed == FracRational(n.delta), name + ": delta^0 = " + render(closed));
    if (name == "fan_a1" || name == "fan_p1" || name == "fan_p2") {
      o.require(oracle_ehrhart_delta(sfan) == n.delta, name + ": oracle delta_Q");
      o.require(ehrhart_delta(sfan) == n.delta, name + ": delta_Q = " + render(ehrhart_delta(sfan)));
    }
    const FracRational g = gamma(sfan, zero_divisor(sfan));
    o.require(g == FracRational(n.gamma), name + ": Gamma = " + render(g, "q"));
  }
  o.detail = "5 named fans";
  return o;
}

Outcome criterion2() {
  Outcome o;
  int fans = 0, cases = 0;
  for (const auto &e : random_suite()) {
    ++fans;
    const StackyFan &sfan = e.fan.sfan;
    const Rational cutoff(sfan.rank() + 2);
    for (const auto &lam : e.lambdas) {
      ++cases;
      const TruncatedSeries closed = expand_series(weighted_delta_closed(sfan, lam), cutoff);
      const TruncatedSeries series = weighted_delta_series(sfan, lam, cutoff);
      o.require(series_equal(closed, series), e.fan.description + " " + describe(lam));
    }
  }
  o.detail = std::to_string(fans) + " fans, " + std::to_string(cases) + " functionals, cutoff d+2";
  return o;
}

Outcome criterion3() {
  Outcome o;
  int cases = 0;
  for (const auto &e : random_suite()) {
    if (!e.complete)
      continue;
    const StackyFan &sfan = e.fan.sfan;
    for (const auto &lam : e.lambdas) {
      ++cases;
      o.require(check_symmetry(sfan, lam), e.fan.description + " " + describe(lam));
      const FracRational d = weighted_delta_closed(sfan, lam);
      o.require(rat_shift(substitute_reciprocal(d), Rational(sfan.rank())) == d,
                "canonical form: " + e.fan.description + " " + describe(lam));
    }
  }
  o.detail = std::to_string(cases) + " complete cases";
  return o;
}

Outcome criterion4() {
  Outcome o;
  int cones = 0, elements = 0;
  for (const auto &[name, sfan] : all_test_fans()) {
    for (const auto &sigma : sfan.fan().maximal_cones()) {
      if (sigma.dim() != sfan.rank())
        continue;
      ++cones;
      std::size_t total = 0;
      for (const auto &tau : sigma.faces())
        total += box_elements(sfan, tau).size();
      o.require(Integer(static_cast<long long>(total)) == group_order(sfan, sigma),
                name + " cone " + to_string(sigma));
    }
    for (const auto &e : box_all(sfan)) {
      ++elements;
      const BoxElement dual = iota(sfan, e);
      o.require(iota(sfan, dual).point == e.point, name + " involution at " + to_string(e.point));
      o.require(age(e) + age(dual) == e.cone.dim(), name + " ages at " + to_string(e.point));
    }
  }
  o.detail = std::to_string(cones) + " maximal cones, " + std::to_string(elements) + " box elements";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5150);
  int cases = 0;
  for (const auto &[name, sfan] : all_test_fans()) {
    std::vector<StackDivisor> divisors{zero_divisor(sfan)};
    for (int k = 0; k < 2; ++k)
      divisors.push_back(random_klt_divisor(rng, sfan.num_rays()));
    const Rational bound(sfan.rank() + 2);
    for (const auto &e : divisors) {
      ++cases;
      const TruncatedSeries direct = gamma_truncated_direct(sfan, e, bound);
      const TruncatedSeries closed = expand_series(substitute_reciprocal(gamma(sfan, e)), direct.cutoff);
      std::string what = name + " beta";
      for (const auto &b : e.coefficients())
        what += " " + to_string(b);
      o.require(direct.cutoff == bound - sfan.rank() && series_equal(direct, closed), what);
    }
  }
  o.detail = std::to_string(cases) + " divisors, bound d+2";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(6006);
  int chains = 0, steps = 0;
  for (int i = 0; i < 30; ++i) {
    const StackyFan coarse = random_complete_rank2(rng);
    const auto lam = random_admissible_lambda(rng, coarse.num_rays());
    StackyFan fine = coarse;
    const int length = 1 + i % 3;
    for (int s = 0; s < length; ++s) {
      const auto w = random_interior_point(rng, fine);
      fine = stellar_subdivide(fine, *w, content(*w) * Integer(1 + static_cast<int>(rng() % 2)));
      ++steps;
    }
    ++chains;
    o.require(check_invariance(coarse, lam, fine), "chain " + std::to_string(i));
  }
  o.detail = std::to_string(chains) + " chains, " + std::to_string(steps) + " subdivisions";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(7007);
  int fans = 0;
  for (const auto &[name, sfan] : all_test_fans()) {
    ++fans;
    const FracPoly d = ehrhart_delta(sfan);
    Integer volume(0);
    for (const auto &sigma : sfan.fan().maximal_cones())
      if (sigma.dim() == sfan.rank())
        volume += group_order(sfan, sigma);
    o.require(d.at_one() == Rational(volume), name + ": delta(1) = " + to_string(d.at_one()));
    for (const auto &[e, c] : d.terms())
      o.require(is_integral(e) && e >= 0 && is_integral(c) && c >= 0, name + ": coefficient " + to_string(c));

    // lambda >= 0, integral on lattice points.
    const Rational step(group_order_lcm(sfan));
    std::vector<Rational> values;
    for (int i = 0; i < sfan.num_rays(); ++i)
      values.push_back(step * Rational(static_cast<int>(rng() % 2)));
    const PiecewiseQLinear lam(values);
    const Rational cutoff(sfan.rank() + 2);
    o.require(series_equal(bucket_series(weighted_delta_series(sfan, lam, cutoff)), delta_mu_series(sfan, lam, cutoff)),
              name + ": bucketing with " + describe(lam));
  }
  o.detail = std::to_string(fans) + " fans";
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (const auto &[name, file] : {std::pair<std::string, std::string>{"fan_a1", "poset_a1_bound2.txt"},
                                   {"fan_p12", "poset_p12_bound2.txt"}}) {
    const StackyFan sfan = fixture(name);
    const OrbitPoset poset = orbit_poset(sfan, Rational(2));
    std::set<std::pair<std::string, std::string>> frozen, library, oracle;
    std::istringstream in(read_text(data_path(file)));
    std::string a, b;
    while (in >> a >> b)
      frozen.emplace(a, b);
    for (const auto &[i, j] : poset.relations)
      library.emplace(to_string(poset.labels[static_cast<std::size_t>(i)].w),
                      to_string(poset.labels[static_cast<std::size_t>(j)].w));
    for (const auto &v : poset.labels)
      for (const auto &w : poset.labels)
        if (oracle_closure(sfan, v.w, w.w))
          oracle.emplace(to_string(v.w), to_string(w.w));
    o.require(library == frozen, name + ": relations differ from the fixture");
    o.require(oracle == frozen, name + ": fixture differs from the brute-force oracle");

    const int n = static_cast<int>(poset.labels.size());
    std::set<std::pair<int, int>> rel(poset.relations.begin(), poset.relations.end());
    for (int i = 0; i < n; ++i)
      o.require(rel.count({i, i}) == 1, name + ": reflexivity");
    for (const auto &[i, j] : rel) {
      if (i == j)
        continue;
      o.require(rel.count({j, i}) == 0, name + ": antisymmetry");
      o.require(psi(sfan, poset.labels[static_cast<std::size_t>(i)].w) <
                    psi(sfan, poset.labels[static_cast<std::size_t>(j)].w),
                name + ": psi monotonicity");
      for (int k = 0; k < n; ++k)
        if (rel.count({j, k}))
          o.require(rel.count({i, k}) == 1, name + ": transitivity");
    }
  }
  o.detail = "fan_a1 and fan_p12, bound 2";
  return o;
}

Outcome criterion9() {
  Outcome o;
  int files = 0;
  for (const auto &c : golden_cases()) {
    ++files;
    const std::string first = golden_text(c);
    o.require(first == read_text(golden_path(c.file)), "golden " + c.file);
    o.require(first == golden_text(c), "rerun " + c.file);
  }
  std::vector<std::string> names = named_fixtures();
  names.push_back("fan_p2_blowup");
  for (const auto &name : names) {
    const FanDocument doc = fixture_document(name);
    o.require(parse_fan_document(render_fan_document(doc)) == doc, "round trip " + name);
  }
  o.detail = std::to_string(files) + " golden files, " + std::to_string(names.size()) + " round trips";
  return o;
}

} // namespace

int main() {
  const std::pair<const char *, std::function<Outcome()>> criteria[] = {
      {"named-fan exact values", criterion1},
      {"closed form equals the defining series", criterion2},
      {"symmetry of complete fans", criterion3},
      {"box and group-order consistency", criterion4},
      {"motivic integral against direct orbit sums", criterion5},
      {"invariance under stellar refinement chains", criterion6},
      {"Ehrhart structure and bucketing", criterion7},
      {"orbit poset fixtures", criterion8},
      {"CLI golden files and round trip", criterion9},
  };
  bool all = true;
  int index = 0;
  for (const auto &[title, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::ostringstream line;
    line << (o.pass ? "PASS" : "FAIL") << " criterion " << index << ": " << title;
    if (!o.detail.empty())
      line << " (" << o.detail << ")";
    line.precision(2);
    line << std::fixed << " [" << seconds << "s]";
    std::cout << line.str() << std::endl;
    for (const auto &f : o.failures)
      std::cout << "    " << f << std::endl;
  }
  return all ? 0 : 1;
}
