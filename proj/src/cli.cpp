#include "stackyfan/cli.hpp"

#include "stackyfan/arcspace.hpp"
#include "stackyfan/deltainv.hpp"
#include "stackyfan/document.hpp"
#include "stackyfan/refine.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <sstream>

namespace stackyfan {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Rational rational_option(const std::string &text, const std::string &flag) {
  try {
    return parse_rational(text);
  } catch (const Error &) {
    throw UsageError(flag + " expects a rational, got '" + text + "'");
  }
}

PiecewiseQLinear functional_named(const FanDocument &doc, const StackyFan &sfan, const std::string &name) {
  if (auto it = doc.functionals.find(name); it != doc.functionals.end())
    return PiecewiseQLinear(it->second);
  if (name == "zero")
    return PiecewiseQLinear::constant_on_b(sfan.num_rays(), Rational(0));
  if (name == "psi")
    return psi_functional(sfan);
  throw UsageError("unknown functional '" + name + "'");
}

StackDivisor divisor_named(const FanDocument &doc, const StackyFan &sfan, const std::string &name) {
  if (auto it = doc.divisors.find(name); it != doc.divisors.end())
    return StackDivisor(it->second);
  const auto n = static_cast<std::size_t>(sfan.num_rays());
  if (name == "zero")
    return StackDivisor(std::vector<Rational>(n, Rational(0)));
  if (name == "canonical")
    return StackDivisor(std::vector<Rational>(n, Rational(-1)));
  throw UsageError("unknown divisor '" + name + "'");
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Series in x = 1/q rewritten as a Laurent polynomial in q.
FracPoly in_q(const TruncatedSeries &s) {
  FracPoly f;
  for (const auto &[e, c] : s.terms)
    f.add_term(c, -e);
  return f;
}

struct Options {
  bool uv = false;
  std::string file;
  std::string name;
  std::string cutoff;
  std::string bound;
  std::string direct;
  std::string fine;
  std::string at;
  long long weight = 1;
  long long max_m = -1;
  bool dot = false;
  bool json = false;
};

std::string run(const std::string &command, const Options &o, int &exit_code) {
  FanDocument doc = parse_fan_document(read_file(o.file), command != "validate");
  const std::string var = o.uv ? "uv" : "q";
  std::ostringstream out;

  if (command == "validate") {
    const auto report = validate_fan(doc.fan());
    if (report.empty()) {
      doc.stacky_fan();
      out << "valid\n";
    } else {
      for (const auto &v : report)
        out << v.message << "\n";
      exit_code = 1;
    }
    return out.str();
  }

  const StackyFan sfan = doc.stacky_fan();
  const int d = sfan.rank();

  if (command == "box") {
    for (const auto &e : box_all(sfan))
      out << to_string(e.point) << " cone " << to_string(e.cone) << " q " << to_string(e.q) << " age "
          << to_string(age(e)) << " order " << e.order.str() << "\n";
  } else if (command == "ages") {
    for (const auto &e : box_all(sfan))
      out << to_string(e.point) << ": " << to_string(age(e)) << "\n";
  } else if (command == "ehrhart") {
    const long long k = o.max_m < 0 ? d : o.max_m;
    const auto data = ehrhart_data(sfan, k);
    for (std::size_t m = 0; m < data.counts.size(); ++m)
      out << "f(" << m << ") = " << data.counts[m].str() << "\n";
  } else if (command == "delta") {
    out << render(ehrhart_delta(sfan)) << "\n";
  } else if (command == "weighted-delta") {
    const auto lam = functional_named(doc, sfan, o.name);
    const FracRational closed = weighted_delta_closed(sfan, lam);
    out << render(closed) << "\n";
    if (!o.cutoff.empty()) {
      const Rational c = rational_option(o.cutoff, "--series-cutoff");
      const TruncatedSeries series = weighted_delta_series(sfan, lam, c);
      const TruncatedSeries expansion = expand_series(closed, c);
      out << "series: " << render(series) << "\n";
      out << "expansion: " << render(expansion) << "\n";
      out << "agree: " << yes_no(series_equal(series, expansion)) << "\n";
    }
  } else if (command == "gamma") {
    const auto e = divisor_named(doc, sfan, o.name);
    const FracRational g = gamma(sfan, e);
    out << render(g, var) << "\n";
    if (!o.direct.empty()) {
      const Rational b = rational_option(o.direct, "--check-direct");
      const TruncatedSeries direct = gamma_truncated_direct(sfan, e, b);
      const TruncatedSeries expansion = expand_series(substitute_reciprocal(g), b - Rational(d));
      const std::string window = " [exact down to " + render_power(Rational(d) - b, var) + "]";
      out << "direct: " << render(in_q(direct), var) << window << "\n";
      out << "expansion: " << render(in_q(expansion), var) << window << "\n";
      out << "agree: " << yes_no(series_equal(direct, expansion)) << "\n";
    }
  } else if (command == "betti") {
    for (const auto &[j, c] : orbifold_betti(sfan))
      out << render_power(j, var) << ": " << c.str() << "\n";
  } else if (command == "symmetry") {
    out << (check_symmetry(sfan, functional_named(doc, sfan, o.name)) ? "symmetric" : "not symmetric") << "\n";
  } else if (command == "orbit-poset") {
    const OrbitPoset poset = orbit_poset(sfan, rational_option(o.bound, "--bound"));
    if (o.json) {
      nlohmann::ordered_json j;
      j["nodes"] = nlohmann::ordered_json::array();
      for (const auto &l : poset.labels) {
        nlohmann::ordered_json v = nlohmann::ordered_json::array();
        for (Eigen::Index i = 0; i < l.w.size(); ++i)
          v.push_back(l.w(i).convert_to<long long>());
        j["nodes"].push_back(std::move(v));
      }
      j["edges"] = nlohmann::ordered_json::array();
      for (const auto &[a, b] : poset.covers)
        j["edges"].push_back({a, b});
      out << j.dump() << "\n";
    } else if (o.dot) {
      out << "digraph orbits {\n";
      for (std::size_t i = 0; i < poset.labels.size(); ++i)
        out << "  n" << i << " [label=\"" << to_string(poset.labels[i].w) << "\"];\n";
      for (const auto &[a, b] : poset.covers)
        out << "  n" << a << " -> n" << b << ";\n";
      out << "}\n";
    } else {
      out << "labels:\n";
      for (const auto &l : poset.labels)
        out << "  " << to_string(l.w) << " psi " << to_string(psi(sfan, l.w)) << "\n";
      out << "covers:\n";
      for (const auto &[a, b] : poset.covers)
        out << "  " << to_string(poset.labels[static_cast<std::size_t>(a)].w) << " -> "
            << to_string(poset.labels[static_cast<std::size_t>(b)].w) << "\n";
    }
  } else if (command == "refine-check") {
    const FanDocument fine_doc = parse_fan_document(read_file(o.fine));
    const StackyFan fine = fine_doc.stacky_fan();
    const auto witness = is_stacky_refinement(fine, sfan);
    if (!witness)
      throw Error(ErrorKind::NotARefinement, "fan is not a stacky refinement");
    out << "refinement: yes\n";
    for (int i = 0; i < fine.num_rays(); ++i) {
      const auto &cert = witness->certificates[static_cast<std::size_t>(i)];
      out << "b" << i << " " << to_string(fine.b(i)) << " =";
      if (cert.coarse_cone.is_zero())
        out << " 0";
      for (int j = 0; j < cert.coarse_cone.dim(); ++j)
        out << (j ? " + " : " ") << cert.coefficients[static_cast<std::size_t>(j)].str() << "*b"
            << cert.coarse_cone.rays[static_cast<std::size_t>(j)];
      out << "\n";
    }
    if (!o.name.empty()) {
      const auto lam = functional_named(doc, sfan, o.name);
      const auto transferred = transfer_lambda(sfan, lam, fine);
      out << "transferred:";
      for (const auto &v : transferred.values_on_b())
        out << " " << to_string(v);
      out << "\n";
      out << "invariance: " << yes_no(check_invariance(sfan, lam, fine)) << "\n";
    }
  } else if (command == "subdivide") {
    std::vector<long long> coords;
    std::stringstream s(o.at);
    std::string part;
    while (std::getline(s, part, ',')) {
      try {
        std::size_t used = 0;
        coords.push_back(std::stoll(part, &used));
        if (used != part.size())
          throw std::invalid_argument(part);
      } catch (const std::exception &) {
        throw UsageError("--at expects comma-separated integers, got '" + o.at + "'");
      }
    }
    if (static_cast<int>(coords.size()) != d)
      throw UsageError("--at expects " + std::to_string(d) + " coordinates");
    LatticeVector w(d);
    for (int j = 0; j < d; ++j)
      w(j) = Integer(coords[static_cast<std::size_t>(j)]);
    out << render_fan_document(document_from(stellar_subdivide(sfan, w, Integer(o.weight))));
  }
  return out.str();
}

} // namespace

CommandResult run_command(const std::vector<std::string> &args) {
  CommandResult result;
  Options o;
  CLI::App app{"Invariants of toric stacks given by stacky fans", "stackyfan"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--uv", o.uv, "Write q as uv");

  auto command = [&](const std::string &name, const std::string &description) {
    CLI::App *sub = app.add_subcommand(name, description);
    sub->add_option("file", o.file, "Fan document (JSON)")->required();
    return sub;
  };
  command("validate", "Check the fan invariants");
  command("box", "List box elements with coordinates, ages and orders");
  command("ages", "List the age of every box element");
  command("ehrhart", "Ehrhart counts f(0..K)")->add_option("--max-m", o.max_m, "Largest m (default: rank)");
  command("delta", "Ehrhart delta-polynomial");
  {
    auto *sub = command("weighted-delta", "Weighted delta-vector");
    sub->add_option("--lambda", o.name, "Functional name")->required();
    sub->add_option("--series-cutoff", o.cutoff, "Also compare with the defining series up to this exponent");
  }
  {
    auto *sub = command("gamma", "Motivic integral Gamma(X, E)");
    sub->add_option("--divisor", o.name, "Divisor name")->required();
    sub->add_option("--check-direct", o.direct, "Also sum orbit by orbit up to this bound");
  }
  command("betti", "Orbifold Betti numbers");
  command("symmetry", "Check delta(t) = t^d delta(1/t)")
      ->add_option("--lambda", o.name, "Functional name")
      ->required();
  {
    auto *sub = command("orbit-poset", "Closure order of arc orbits with psi <= bound");
    sub->add_option("--bound", o.bound, "Bound on psi")->required();
    auto *dot = sub->add_flag("--dot", o.dot, "Graphviz output");
    auto *json = sub->add_flag("--json", o.json, "JSON output");
    dot->excludes(json);
  }
  {
    auto *sub = command("refine-check", "Check that --fine refines FILE");
    sub->add_option("--fine", o.fine, "Finer fan document")->required();
    sub->add_option("--lambda", o.name, "Also transfer this functional and compare delta-vectors");
  }
  {
    auto *sub = command("subdivide", "Stellar subdivision at a lattice point");
    sub->add_option("--at", o.at, "Comma-separated coordinates")->required();
    sub->add_option("--weight", o.weight, "Weight of the new ray")->required()->check(CLI::PositiveNumber);
  }

  std::ostringstream out, err;
  if (args.size() > 1 && !args[1].empty() && args[1][0] != '-' && app.get_subcommand_no_throw(args[1]) == nullptr) {
    result.exit_code = 2;
    result.err = "error: unknown subcommand '" + args[1] + "'\nRun with --help for more information.\n";
    return result;
  }
  try {
    std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(reversed.begin(), reversed.end());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    result.exit_code = code == 0 ? 0 : 2;
    result.out = out.str();
    result.err = err.str();
    return result;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    result.out = run(name, o, result.exit_code);
  } catch (const UsageError &e) {
    result.exit_code = 2;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const Error &e) {
    result.exit_code = e.kind() == ErrorKind::ParseError ? 2 : 1;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const std::exception &e) {
    result.exit_code = 1;
    result.err = std::string("error: internal: ") + e.what() + "\n";
  }
  return result;
}

} // namespace stackyfan
