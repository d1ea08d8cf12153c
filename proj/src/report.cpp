#include "relucert/report.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "relucert/errors.hpp"

namespace relucert {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kUnconstrained = "unconstrained";

Json number_or_sentinel(double v) {
  if (v == std::numeric_limits<double>::infinity()) return kUnconstrained;
  return v;
}

double from_number_or_sentinel(const Json& j) {
  if (j.is_string() && j.get<std::string>() == kUnconstrained) {
    return std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(number_or_sentinel(x));
  return arr;
}

Vector vector_from(const Json& arr) {
  Vector out;
  for (const auto& j : arr) out.push_back(from_number_or_sentinel(j));
  return out;
}

Json index_json(const IndexSet& s) { return Json(s.values()); }

IndexSet index_from(const Json& j) { return IndexSet(j.get<std::vector<std::size_t>>()); }

bool same_bits(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

bool same_vector(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool operator==(const Report& a, const Report& b) {
  const auto same_stab = [](const auto& x, const auto& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (same_bits(x->A0, y->A0) && same_bits(x->B0, y->B0) &&
                  same_bits(x->image_radius, y->image_radius));
  };
  return a.schema == b.schema && a.tool_version == b.tool_version &&
         a.input_fingerprint == b.input_fingerprint && a.m == b.m && a.n == b.n &&
         a.domain == b.domain && same_bits(a.radius, b.radius) &&
         a.omnidirectional == b.omnidirectional &&
         a.nonneg_omnidirectional == b.nonneg_omnidirectional && a.facets == b.facets &&
         a.positive_facets == b.positive_facets && same_vector(a.alpha_X, b.alpha_X) &&
         a.alpha_S == b.alpha_S && same_vector(a.alpha_B, b.alpha_B) &&
         same_vector(a.alpha_scaled, b.alpha_scaled) && same_stab(a.stability, b.stability) &&
         a.certificate == b.certificate && a.tolerances == b.tolerances;
}

std::string serialize_report(const Report& r) {
  Json doc;
  doc["schema"] = r.schema;
  doc["tool_version"] = r.tool_version;
  doc["input_fingerprint"] = r.input_fingerprint;
  doc["index_base"] = 0;
  doc["m"] = r.m;
  doc["n"] = r.n;
  doc["domain"] = to_string(r.domain);
  doc["radius"] = r.radius;
  doc["omnidirectional"] = r.omnidirectional;
  doc["nonneg_omnidirectional"] =
      r.nonneg_omnidirectional ? Json(*r.nonneg_omnidirectional) : Json(nullptr);
  Json facets = Json::array();
  for (const auto& f : r.facets) facets.push_back(index_json(f));
  doc["facets"] = std::move(facets);
  doc["positive_facets"] = r.positive_facets ? index_json(*r.positive_facets) : Json(nullptr);
  doc["alpha_X"] = vector_json(r.alpha_X);
  Json alpha_s = Json::array();
  for (std::size_t i = 0; i < r.alpha_S.size(); ++i) {
    if (r.alpha_S[i]) {
      alpha_s.push_back(*r.alpha_S[i]);
    } else if (i < r.alpha_B.size() && std::isinf(r.alpha_B[i])) {
      alpha_s.push_back(kUnconstrained);
    } else {
      alpha_s.push_back(nullptr);
    }
  }
  doc["alpha_S"] = std::move(alpha_s);
  doc["alpha_B"] = vector_json(r.alpha_B);
  doc["alpha_scaled"] = vector_json(r.alpha_scaled);
  if (r.stability) {
    doc["stability"] = Json{{"A0", r.stability->A0},
                            {"A0_kind", "certified lower bound"},
                            {"B0", r.stability->B0},
                            {"image_radius", r.stability->image_radius}};
  } else {
    doc["stability"] = nullptr;
  }
  if (r.certificate) {
    doc["certificate"] = Json{{"injective", r.certificate->injective},
                              {"margins", vector_json(r.certificate->margins)},
                              {"failing_indices", index_json(r.certificate->failing)}};
  } else {
    doc["certificate"] = nullptr;
  }
  Json tol;
  for (const auto& [name, value] : r.tolerances) tol[name] = value;
  doc["tolerances"] = tol.is_null() ? Json::object() : tol;
  return doc.dump(2) + "\n";
}

Report parse_report(std::string_view text) {
  try {
    const Json doc = Json::parse(text);
    Report r;
    r.schema = doc.at("schema").get<std::string>();
    if (r.schema != Report::kSchema) throw Error(ErrorKind::Parse, "unknown schema '" + r.schema + "'");
    r.tool_version = doc.at("tool_version").get<std::string>();
    r.input_fingerprint = doc.at("input_fingerprint").get<std::string>();
    r.m = doc.at("m").get<std::size_t>();
    r.n = doc.at("n").get<std::size_t>();
    const auto domain = doc.at("domain").get<std::string>();
    if (domain == "ball") {
      r.domain = Domain::Ball;
    } else if (domain == "ball+") {
      r.domain = Domain::BallPositive;
    } else {
      throw Error(ErrorKind::Parse, "unknown domain '" + domain + "'");
    }
    r.radius = doc.at("radius").get<double>();
    r.omnidirectional = doc.at("omnidirectional").get<bool>();
    if (!doc.at("nonneg_omnidirectional").is_null()) {
      r.nonneg_omnidirectional = doc.at("nonneg_omnidirectional").get<bool>();
    }
    for (const auto& f : doc.at("facets")) r.facets.push_back(index_from(f));
    if (!doc.at("positive_facets").is_null()) r.positive_facets = index_from(doc.at("positive_facets"));
    r.alpha_X = vector_from(doc.at("alpha_X"));
    for (const auto& j : doc.at("alpha_S")) {
      if (j.is_number()) {
        r.alpha_S.emplace_back(j.get<double>());
      } else {
        r.alpha_S.emplace_back(std::nullopt);
      }
    }
    r.alpha_B = vector_from(doc.at("alpha_B"));
    r.alpha_scaled = vector_from(doc.at("alpha_scaled"));
    if (const auto& s = doc.at("stability"); !s.is_null()) {
      r.stability = StabilityReport{s.at("A0").get<double>(), s.at("B0").get<double>(),
                                    s.at("image_radius").get<double>()};
    }
    if (const auto& c = doc.at("certificate"); !c.is_null()) {
      r.certificate = ReportCertificate{c.at("injective").get<bool>(), vector_from(c.at("margins")),
                                        index_from(c.at("failing_indices"))};
    }
    for (const auto& [name, value] : doc.at("tolerances").items()) {
      r.tolerances.emplace_back(name, value.get<double>());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed report: ") + e.what());
  }
}

}  // namespace relucert
