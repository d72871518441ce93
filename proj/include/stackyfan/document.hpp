#pragma once

// JSON file format for stacky fans:
//
//   {
//     "rank": 1,
//     "rays": [[1], [-1]],
//     "weights": [1, 2],
//     "cones": [[0], [1]],
//     "support": "complete",
//     "divisors": {"half": [0, "1/2"]},
//     "functionals": {"shifted": ["1/2", 0]}
//   }
//
// "cones" lists the maximal cones; faces are implied. "divisors" and
// "functionals" are optional maps to one rational per ray (integers or "p/q").

#include "stackyfan/stacky.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stackyfan {

struct FanDocument {
  int rank = 0;
  std::vector<LatticeVector> rays;
  std::vector<Integer> weights;
  std::vector<Cone> cones;
  SupportKind support = SupportKind::general;
  std::map<std::string, std::vector<Rational>> divisors;
  std::map<std::string, std::vector<Rational>> functionals;

  Fan fan() const;
  StackyFan stacky_fan() const;
  bool operator==(const FanDocument &other) const;
};

/// Strict parse. Throws ParseError for malformed or unknown content and, when
/// `validate` is set, ValidationError listing every fan violation.
FanDocument parse_fan_document(std::string_view text, bool validate = true);
/// Canonical rendering; parse_fan_document(render_fan_document(d)) == d.
std::string render_fan_document(const FanDocument &doc);
/// Document for a stacky fan, listing its maximal cones and no named data.
FanDocument document_from(const StackyFan &sfan);

} // namespace stackyfan
