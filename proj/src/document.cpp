#include "stackyfan/document.hpp"

#include "json.hpp"

#include <set>

namespace stackyfan {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string &path, const std::string &what) {
  throw Error(ErrorKind::ParseError, "field '" + path + "': " + what);
}

const Json &array_at(const Json &j, const std::string &path) {
  if (!j.is_array())
    fail(path, "expected an array");
  return j;
}

long long integer_at(const Json &j, const std::string &path) {
  if (!j.is_number_integer())
    fail(path, "expected an integer");
  return j.get<long long>();
}

Rational rational_at(const Json &j, const std::string &path) {
  if (j.is_number_integer())
    return Rational(j.get<long long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error &) {
      fail(path, "malformed rational '" + j.get<std::string>() + "'");
    }
  }
  fail(path, "expected an integer or a \"p/q\" string");
}

std::map<std::string, std::vector<Rational>> named_data(const Json &j, const std::string &path,
                                                        std::size_t expected) {
  if (!j.is_object())
    fail(path, "expected an object");
  std::map<std::string, std::vector<Rational>> out;
  for (const auto &[name, values] : j.items()) {
    const std::string sub = path + "." + name;
    array_at(values, sub);
    if (values.size() != expected)
      fail(sub, "expected " + std::to_string(expected) + " values, got " + std::to_string(values.size()));
    std::vector<Rational> list;
    for (std::size_t i = 0; i < values.size(); ++i)
      list.push_back(rational_at(values[i], sub + "[" + std::to_string(i) + "]"));
    out.emplace(name, std::move(list));
  }
  return out;
}

Json rational_json(const Rational &x) {
  if (is_integral(x))
    return Json(numerator(x).convert_to<long long>());
  return Json(to_string(x));
}

Json named_json(const std::map<std::string, std::vector<Rational>> &data) {
  Json out = Json::object();
  for (const auto &[name, values] : data) {
    Json list = Json::array();
    for (const auto &v : values)
      list.push_back(rational_json(v));
    out[name] = std::move(list);
  }
  return out;
}

} // namespace

Fan FanDocument::fan() const { return Fan::generated_by(rank, rays, cones, support); }

StackyFan FanDocument::stacky_fan() const { return StackyFan(fan(), weights); }

bool FanDocument::operator==(const FanDocument &other) const {
  return rank == other.rank && rays == other.rays && weights == other.weights && cones == other.cones &&
         support == other.support && divisors == other.divisors && functionals == other.functionals;
}

FanDocument parse_fan_document(std::string_view text, bool validate) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object())
    throw Error(ErrorKind::ParseError, "document must be a JSON object");
  static const std::set<std::string> known{"rank", "rays", "weights", "cones", "support", "divisors", "functionals"};
  for (const auto &[key, value] : root.items())
    if (!known.count(key))
      fail(key, "unknown field");
  for (const char *key : {"rank", "rays", "weights", "cones", "support"})
    if (!root.contains(key))
      fail(key, "missing");

  FanDocument doc;
  const long long rank = integer_at(root["rank"], "rank");
  if (rank < 1 || rank > 16)
    fail("rank", "expected a rank between 1 and 16");
  doc.rank = static_cast<int>(rank);

  const Json &rays = array_at(root["rays"], "rays");
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const std::string path = "rays[" + std::to_string(i) + "]";
    array_at(rays[i], path);
    if (rays[i].size() != static_cast<std::size_t>(doc.rank))
      fail(path, "expected " + std::to_string(doc.rank) + " coordinates");
    LatticeVector v(doc.rank);
    for (int j = 0; j < doc.rank; ++j)
      v(j) = Integer(integer_at(rays[i][static_cast<std::size_t>(j)], path + "[" + std::to_string(j) + "]"));
    doc.rays.push_back(std::move(v));
  }

  const Json &weights = array_at(root["weights"], "weights");
  if (weights.size() != doc.rays.size())
    fail("weights", "expected " + std::to_string(doc.rays.size()) + " weights, got " +
                        std::to_string(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long long a = integer_at(weights[i], "weights[" + std::to_string(i) + "]");
    if (a < 1)
      fail("weights[" + std::to_string(i) + "]", "weights must be positive");
    doc.weights.emplace_back(a);
  }

  const Json &cones = array_at(root["cones"], "cones");
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const std::string path = "cones[" + std::to_string(i) + "]";
    array_at(cones[i], path);
    std::vector<int> indices;
    for (std::size_t j = 0; j < cones[i].size(); ++j) {
      const long long r = integer_at(cones[i][j], path + "[" + std::to_string(j) + "]");
      if (r < 0 || r >= static_cast<long long>(doc.rays.size()))
        fail(path, "ray index " + std::to_string(r) + " out of range");
      indices.push_back(static_cast<int>(r));
    }
    Cone cone(indices);
    if (cone.dim() != static_cast<int>(indices.size()))
      fail(path, "repeated ray index");
    doc.cones.push_back(std::move(cone));
  }

  const Json &support = root["support"];
  if (!support.is_string())
    fail("support", "expected a string");
  const std::string kind = support.get<std::string>();
  if (kind == "complete")
    doc.support = SupportKind::complete;
  else if (kind == "convex")
    doc.support = SupportKind::convex;
  else if (kind == "general")
    doc.support = SupportKind::general;
  else
    fail("support", "expected \"complete\", \"convex\" or \"general\"");

  if (root.contains("divisors"))
    doc.divisors = named_data(root["divisors"], "divisors", doc.rays.size());
  if (root.contains("functionals"))
    doc.functionals = named_data(root["functionals"], "functionals", doc.rays.size());

  if (validate) {
    const auto report = validate_fan(doc.fan());
    if (!report.empty()) {
      std::string message;
      for (const auto &v : report)
        message += (message.empty() ? "" : "; ") + v.message;
      throw Error(ErrorKind::ValidationError, message);
    }
  }
  return doc;
}

std::string render_fan_document(const FanDocument &doc) {
  Json rays = Json::array();
  for (const auto &r : doc.rays) {
    Json v = Json::array();
    for (Eigen::Index j = 0; j < r.size(); ++j)
      v.push_back(r(j).convert_to<long long>());
    rays.push_back(std::move(v));
  }
  Json weights = Json::array();
  for (const auto &a : doc.weights)
    weights.push_back(a.convert_to<long long>());
  Json cones = Json::array();
  for (const auto &c : doc.cones)
    cones.push_back(c.rays);
  std::vector<std::pair<std::string, Json>> fields{
      {"rank", doc.rank}, {"rays", rays}, {"weights", weights}, {"cones", cones}, {"support", to_string(doc.support)}};
  if (!doc.divisors.empty())
    fields.emplace_back("divisors", named_json(doc.divisors));
  if (!doc.functionals.empty())
    fields.emplace_back("functionals", named_json(doc.functionals));
  std::string out = "{\n";
  for (std::size_t i = 0; i < fields.size(); ++i)
    out += "  " + Json(fields[i].first).dump() + ": " + fields[i].second.dump() +
           (i + 1 < fields.size() ? ",\n" : "\n");
  out += "}\n";
  return out;
}

FanDocument document_from(const StackyFan &sfan) {
  FanDocument doc;
  doc.rank = sfan.rank();
  doc.rays = sfan.fan().rays();
  doc.weights = sfan.weights();
  for (const auto &c : sfan.fan().maximal_cones())
    if (!c.is_zero())
      doc.cones.push_back(c);
  doc.support = sfan.fan().support();
  return doc;
}

} // namespace stackyfan
