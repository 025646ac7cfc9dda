#include "qosbroker/document.hpp"

#include <cmath>
#include <initializer_list>

#include "qosbroker/error.hpp"

namespace qosbroker {

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(Errc::MalformedDocument, where, where + ": " + what);
}

void require_object(const Json& doc, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  if (!doc.is_object()) malformed(where, "expected an object");
  for (const auto& [key, _] : doc.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw Error(Errc::UnknownField, key, where + ": unknown field '" + key + "'");
  }
}

const Json& required(const Json& doc, const char* key, const std::string& where) {
  auto it = doc.find(key);
  if (it == doc.end()) malformed(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const Json& v, const std::string& where) {
  if (!v.is_string()) malformed(where, "expected a string");
  return v.get<std::string>();
}

double number_field(const Json& v, const std::string& where) {
  if (!v.is_number()) malformed(where, "expected a number");
  return v.get<double>();
}

std::set<std::string> tags_field(const Json& v, const std::string& where) {
  if (!v.is_array()) malformed(where, "expected an array of strings");
  std::set<std::string> out;
  for (const auto& t : v) out.insert(string_field(t, where));
  return out;
}

std::map<std::string, double, std::less<>> number_map(const Json& v, const std::string& where) {
  if (!v.is_object()) malformed(where, "expected an object of numbers");
  std::map<std::string, double, std::less<>> out;
  for (const auto& [k, x] : v.items()) out.emplace(k, number_field(x, where + "." + k));
  return out;
}

Json number_map_to_json(const std::map<std::string, double, std::less<>>& m) {
  Json out = Json::object();
  for (const auto& [k, v] : m) out[k] = v;
  return out;
}

Json contributions_to_json(const std::vector<DimensionContribution>& cs) {
  Json out = Json::array();
  for (const auto& c : cs) {
    out.push_back({{"property", c.property},
                   {"request", c.request_norm},
                   {"service", c.service_norm},
                   {"weight", c.weight},
                   {"contribution", c.contribution}});
  }
  return out;
}

Json matrix_to_json(const NormalizedMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(Json(std::vector<double>(row.begin(), row.end())));
  }
  Json stats = Json::array();
  for (const auto& s : m.stats())
    stats.push_back({{"property", s.property}, {"min", s.min}, {"max", s.max},
                     {"degenerate", s.degenerate}});
  return {{"schema", schema_to_json(m.schema())},
          {"services", m.service_ids()},
          {"values", rows},
          {"stats", stats}};
}

NormalizedMatrix matrix_from_json(const Json& doc) {
  const std::string where = "matrix";
  require_object(doc, where, {"schema", "services", "values", "stats"});
  QosSchema schema = schema_from_json(required(doc, "schema", where));
  std::vector<std::string> ids;
  const auto& services = required(doc, "services", where);
  if (!services.is_array()) malformed(where, "services must be an array");
  for (const auto& s : services) ids.push_back(string_field(s, where + ".services"));
  std::vector<double> values;
  const auto& rows = required(doc, "values", where);
  if (!rows.is_array()) malformed(where, "values must be an array");
  for (const auto& row : rows) {
    if (!row.is_array()) malformed(where, "each row must be an array");
    for (const auto& v : row) values.push_back(number_field(v, where + ".values"));
  }
  std::vector<ColumnStats> stats;
  const auto& st = required(doc, "stats", where);
  if (!st.is_array()) malformed(where, "stats must be an array");
  for (const auto& s : st) {
    require_object(s, where + ".stats", {"property", "min", "max", "degenerate"});
    const auto& deg = required(s, "degenerate", where);
    if (!deg.is_boolean()) malformed(where, "degenerate must be a boolean");
    stats.push_back({string_field(required(s, "property", where), where),
                     number_field(required(s, "min", where), where),
                     number_field(required(s, "max", where), where), deg.get<bool>()});
  }
  try {
    return NormalizedMatrix(std::move(schema), std::move(ids), std::move(values), std::move(stats));
  } catch (const Error& e) {
    malformed(where, e.what());
  }
}

}  // namespace

double round4(double x) { return std::round(x * 1e4) / 1e4; }

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    malformed("document", e.what());
  }
}

Json schema_to_json(const QosSchema& schema) {
  Json out = Json::array();
  for (const auto& d : schema.properties())
    out.push_back({{"name", d.name}, {"direction", to_string(d.direction)}, {"unit", d.unit}});
  return out;
}

QosSchema schema_from_json(const Json& doc) {
  if (!doc.is_array()) malformed("schema", "expected an array of property definitions");
  std::vector<QosPropertyDef> defs;
  for (const auto& p : doc) {
    require_object(p, "schema", {"name", "direction", "unit"});
    QosPropertyDef d;
    d.name = string_field(required(p, "name", "schema"), "schema.name");
    const auto dir = string_field(required(p, "direction", "schema"), "schema.direction");
    if (dir == "min") d.direction = Direction::Minimize;
    else if (dir == "max") d.direction = Direction::Maximize;
    else malformed("schema.direction", "direction must be \"min\" or \"max\", got \"" + dir + "\"");
    if (auto it = p.find("unit"); it != p.end()) d.unit = string_field(*it, "schema.unit");
    defs.push_back(std::move(d));
  }
  return QosSchema(std::move(defs));
}

Json record_to_json(const ServiceRecord& record) {
  Json profiles = Json::object();
  for (const auto& [mode, p] : record.profiles) profiles[mode] = number_map_to_json(p.values);
  return {{"id", record.id},
          {"name", record.display_name},
          {"tags", record.functional_tags},
          {"profiles", profiles}};
}

ServiceRecord record_from_json(const Json& doc) {
  const std::string where = "service";
  require_object(doc, where, {"id", "name", "tags", "profiles"});
  ServiceRecord r;
  r.id = string_field(required(doc, "id", where), where + ".id");
  if (auto it = doc.find("name"); it != doc.end()) r.display_name = string_field(*it, where + ".name");
  if (auto it = doc.find("tags"); it != doc.end()) r.functional_tags = tags_field(*it, where + ".tags");
  const auto& profiles = required(doc, "profiles", where);
  if (!profiles.is_object()) malformed(where + ".profiles", "expected an object keyed by mode");
  for (const auto& [mode, p] : profiles.items())
    r.profiles.emplace(mode, QosProfile{number_map(p, where + ".profiles." + mode)});
  return r;
}

Json request_to_json(const MatchRequest& request) {
  return {{"tags", request.functional_tags},
          {"mode", request.mode},
          {"requirements", number_map_to_json(request.requirements.values)},
          {"weights", number_map_to_json(request.weights)},
          {"top_k", request.top_k}};
}

MatchRequest request_from_json(const Json& doc) {
  const std::string where = "request";
  require_object(doc, where, {"tags", "mode", "requirements", "weights", "top_k"});
  MatchRequest req;
  if (auto it = doc.find("tags"); it != doc.end()) req.functional_tags = tags_field(*it, where + ".tags");
  if (auto it = doc.find("mode"); it != doc.end()) req.mode = string_field(*it, where + ".mode");
  if (auto it = doc.find("requirements"); it != doc.end())
    req.requirements.values = number_map(*it, where + ".requirements");
  if (auto it = doc.find("weights"); it != doc.end()) req.weights = number_map(*it, where + ".weights");
  if (auto it = doc.find("top_k"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 1)
      throw Error(Errc::InvalidTopK, "top_k", "top_k must be a positive integer");
    req.top_k = it->get<std::size_t>();
  }
  return req;
}

Json result_to_json(const MatchResult& result, const std::optional<std::string>& feedback) {
  Json ranking = Json::array();
  for (const auto& r : result.ranking) {
    ranking.push_back({{"id", r.id},
                       {"distance", round4(r.distance)},
                       {"distance_raw", r.distance},
                       {"contributions", contributions_to_json(r.contributions)}});
  }
  Json out = {{"ranked", result.ranked}, {"ranking", ranking}};
  if (feedback) out["feedback"] = *feedback;
  if (result.matrix_echo) out["matrix"] = matrix_to_json(*result.matrix_echo);
  return out;
}

MatchResult result_from_json(const Json& doc) {
  const std::string where = "result";
  require_object(doc, where, {"ranked", "ranking", "feedback", "matrix"});
  MatchResult out;
  const auto& ranked = required(doc, "ranked", where);
  if (!ranked.is_boolean()) malformed(where + ".ranked", "expected a boolean");
  out.ranked = ranked.get<bool>();
  const auto& ranking = required(doc, "ranking", where);
  if (!ranking.is_array()) malformed(where + ".ranking", "expected an array");
  for (const auto& e : ranking) {
    require_object(e, where + ".ranking", {"id", "distance", "distance_raw", "contributions"});
    RankedService r;
    r.id = string_field(required(e, "id", where), where + ".id");
    r.distance = number_field(required(e, "distance_raw", where), where + ".distance_raw");
    const auto& cs = required(e, "contributions", where);
    if (!cs.is_array()) malformed(where + ".contributions", "expected an array");
    for (const auto& c : cs) {
      const std::string cw = where + ".contributions";
      require_object(c, cw, {"property", "request", "service", "weight", "contribution"});
      r.contributions.push_back({string_field(required(c, "property", cw), cw),
                                 number_field(required(c, "request", cw), cw),
                                 number_field(required(c, "service", cw), cw),
                                 number_field(required(c, "weight", cw), cw),
                                 number_field(required(c, "contribution", cw), cw)});
    }
    out.ranking.push_back(std::move(r));
  }
  if (auto it = doc.find("matrix"); it != doc.end()) out.matrix_echo = matrix_from_json(*it);
  return out;
}

Json store_to_json(const RegistryStore& store) {
  Json services = Json::array();
  for (const auto& r : store.services()) services.push_back(record_to_json(r));
  return {{"version", kStoreVersion},
          {"revision", store.revision()},
          {"schema", schema_to_json(store.schema())},
          {"services", services}};
}

RegistryStore store_from_json(const Json& doc) {
  const std::string where = "store";
  require_object(doc, where, {"version", "revision", "schema", "services"});
  const auto& version = required(doc, "version", where);
  if (!version.is_string() || version.get<std::string>() != kStoreVersion)
    malformed(where + ".version", "unsupported version " + version.dump());
  std::uint64_t revision = 0;
  if (auto it = doc.find("revision"); it != doc.end()) {
    if (!it->is_number_unsigned()) malformed(where + ".revision", "expected a non-negative integer");
    revision = it->get<std::uint64_t>();
  }
  QosSchema schema = schema_from_json(required(doc, "schema", where));
  const auto& services = required(doc, "services", where);
  if (!services.is_array()) malformed(where + ".services", "expected an array");
  std::vector<ServiceRecord> records;
  for (const auto& s : services) records.push_back(record_from_json(s));
  return RegistryStore::restore(std::move(schema), std::move(records), revision);
}

std::vector<WeightScheme> schemes_from_json(const Json& doc) {
  const std::string where = "schemes";
  require_object(doc, where, {"schemes"});
  const auto& list = required(doc, "schemes", where);
  if (!list.is_array()) malformed(where, "expected an array");
  std::vector<WeightScheme> out;
  for (const auto& s : list) {
    require_object(s, where, {"name", "weights"});
    out.push_back({string_field(required(s, "name", where), where + ".name"),
                   number_map(required(s, "weights", where), where + ".weights")});
  }
  return out;
}

}  // namespace qosbroker
