#include "doctest.h"
#include "oracles.hpp"

#include "stackyfan/cli.hpp"

#include <cstdlib>
#include <fstream>

using namespace stackyfan;
using namespace stackyfan::testing;

namespace {

CommandResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "stackyfan");
  return run_command(args);
}

template <typename F>
ErrorKind error_kind(F &&f) {
  try {
    f();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

} // namespace

TEST_CASE("document parsing") {
  const FanDocument p12 = parse_fan_document(
      R"({"rank": 1, "rays": [[1], [-1]], "weights": [1, 2], "cones": [[0], [1]], "support": "complete"})");
  CHECK(p12.stacky_fan().b(1) == lv({-2}));
  CHECK(p12.fan().cones() == fixture("fan_p12").fan().cones());
  CHECK(fixture_document("fan_p12").functionals.at("perturbed") == std::vector<Rational>{r(1, 2), r(-1, 2)});

  CHECK(error_kind([] { parse_fan_document(read_text(data_path("bad_weights.json"))); }) == ErrorKind::ParseError);
  CHECK(error_kind([] { parse_fan_document(read_text(data_path("bad_not_primitive.json"))); }) ==
        ErrorKind::ValidationError);
  try {
    parse_fan_document(read_text(data_path("bad_not_primitive.json")));
  } catch (const Error &e) {
    CHECK(std::string(e.what()) == "ray 0 not primitive");
  }
  CHECK_NOTHROW(parse_fan_document(read_text(data_path("bad_not_primitive.json")), false));

  const char *bad[] = {
      "{",
      "[]",
      R"({"rank": 1, "rays": [[1]], "weights": [1], "cones": [[0]], "support": "convex", "extra": 1})",
      R"({"rank": 1, "rays": [[1]], "weights": [1], "cones": [[0]]})",
      R"({"rank": 1, "rays": [[1, 0]], "weights": [1], "cones": [[0]], "support": "convex"})",
      R"({"rank": 1, "rays": [[1]], "weights": [0], "cones": [[0]], "support": "convex"})",
      R"({"rank": 1, "rays": [[1]], "weights": [1], "cones": [[3]], "support": "convex"})",
      R"({"rank": 1, "rays": [[1]], "weights": [1], "cones": [[0]], "support": "round"})",
      R"({"rank": 1, "rays": [[1]], "weights": [1], "cones": [[0]], "support": "convex", "divisors": {"d": ["1/0"]}})",
      R"({"rank": 1, "rays": [[1]], "weights": [1], "cones": [[0]], "support": "convex", "divisors": {"d": [1, 2]}})",
      R"({"rank": 1, "rays": [[1.5]], "weights": [1], "cones": [[0]], "support": "convex"})",
  };
  for (const char *text : bad) {
    CAPTURE(text);
    CHECK(error_kind([&] { parse_fan_document(text); }) == ErrorKind::ParseError);
  }
  try {
    parse_fan_document(bad[4]);
  } catch (const Error &e) {
    CHECK(std::string(e.what()).rfind("field 'rays[0]'", 0) == 0);
  }
}

TEST_CASE("document round trip") {
  std::vector<std::string> names = named_fixtures();
  names.push_back("fan_p2_blowup");
  for (const auto &name : names) {
    const FanDocument doc = fixture_document(name);
    const std::string text = render_fan_document(doc);
    const FanDocument again = parse_fan_document(text);
    CHECK(again == doc);
    CHECK(render_fan_document(again) == text);
  }
  const FanDocument blown = document_from(stellar_subdivide(fixture("fan_p2"), lv({1, 1}), Integer(1)));
  CHECK(parse_fan_document(render_fan_document(blown)) == blown);
}

TEST_CASE("command examples") {
  const auto delta = run({"delta", data_path("fan_p2.json")});
  CHECK(delta.exit_code == 0);
  CHECK(delta.out == "1 + t + t^2\n");
  const auto betti = run({"betti", data_path("fan_p12.json")});
  CHECK(betti.out == "q^0: 1\nq^{1/2}: 1\nq^1: 1\n");
  const auto sym = run({"symmetry", data_path("fan_a1.json"), "--lambda", "zero"});
  CHECK(sym.exit_code == 1);
  CHECK(sym.err == "error: fan support is not complete\n");
  CHECK(run({}).exit_code == 2);
  CHECK(run({"delta"}).exit_code == 2);
  CHECK(run({"delta", data_path("missing.json")}).exit_code == 2);
  CHECK(run({"weighted-delta", data_path("fan_p2.json"), "--lambda", "nosuch"}).exit_code == 2);
  CHECK(run({"delta", data_path("bad_weights.json")}).exit_code == 2);
  CHECK(run({"delta", data_path("bad_not_primitive.json")}).exit_code == 1);
  CHECK(run({"validate", data_path("bad_not_primitive.json")}).exit_code == 1);
  CHECK(run({"--help"}).exit_code == 0);
}

TEST_CASE("golden files") {
  const bool update = std::getenv("STACKYFAN_UPDATE_GOLDEN") != nullptr;
  const auto cases = golden_cases();
  CHECK(cases.size() > 100);
  for (const auto &c : cases) {
    CAPTURE(c.file);
    const std::string actual = golden_text(c);
    CHECK(golden_text(c) == actual);
    if (update) {
      std::ofstream(golden_path(c.file), std::ios::binary) << actual;
      continue;
    }
    CHECK(read_text(golden_path(c.file)) == actual);
  }
}
