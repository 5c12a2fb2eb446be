#include "wffd/spec_json.hpp"

#include <stdexcept>

#include <json.hpp>

namespace wffd {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& family,
                      const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw std::invalid_argument("distribution spec: family '" + family +
                                "' needs numeric field '" + key + "'");
  return j[key].get<double>();
}

}  // namespace

DistSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("distribution spec: bad JSON: ") +
                                e.what());
  }
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw std::invalid_argument("distribution spec: missing string field 'family'");
  DistSpec spec;
  spec.family = j["family"].get<std::string>();

  if (spec.family == "antipodal") {
  } else if (spec.family == "geometric") {
    spec.scalars["q"] = require_number(j, spec.family, "q");
  } else if (spec.family == "strong_set" || spec.family == "fat_tail") {
    spec.scalars["c"] = require_number(j, spec.family, "c");
    spec.scalars["M"] = require_number(j, spec.family, "M");
  } else if (spec.family == "point_mass") {
    spec.scalars["m"] = require_number(j, spec.family, "m");
  } else if (spec.family == "truncated_gaussian") {
    for (const char* k : {"center", "halfwidth", "sigma"})
      spec.scalars[k] = require_number(j, spec.family, k);
  } else if (spec.family == "log_uniform" || spec.family == "uniform") {
    spec.scalars["lo"] = require_number(j, spec.family, "lo");
    spec.scalars["hi"] = require_number(j, spec.family, "hi");
  } else if (spec.family == "discrete") {
    if (!j.contains("points") || !j["points"].is_array() || j["points"].empty())
      throw std::invalid_argument(
          "distribution spec: family 'discrete' needs nonempty field 'points'");
    for (const auto& row : j["points"]) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
          !row[1].is_number())
        throw std::invalid_argument(
            "distribution spec: 'points' entries must be [value, prob] pairs");
      spec.points.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  } else {
    throw std::invalid_argument("distribution spec: unknown family '" +
                                spec.family + "'");
  }
  return spec;
}

std::string render_spec(const DistSpec& spec) {
  json j;
  j["family"] = spec.family;
  for (const auto& [k, v] : spec.scalars) j[k] = v;
  if (spec.family == "discrete") {
    json pts = json::array();
    for (const auto& [v, p] : spec.points) pts.push_back(json::array({v, p}));
    j["points"] = pts;
  }
  return j.dump();
}

FadingDistribution build_distribution(const DistSpec& spec) {
  const auto& s = spec.scalars;
  if (spec.family == "antipodal") return make_antipodal();
  if (spec.family == "geometric") return make_geometric(s.at("q"));
  if (spec.family == "strong_set")
    return make_strong_set(s.at("c"), static_cast<int>(s.at("M")));
  if (spec.family == "fat_tail")
    return make_fat_tail(s.at("c"), static_cast<int>(s.at("M")));
  if (spec.family == "point_mass") return make_point_mass(s.at("m"));
  if (spec.family == "truncated_gaussian")
    return make_truncated_gaussian(s.at("center"), s.at("halfwidth"),
                                   s.at("sigma"));
  if (spec.family == "log_uniform")
    return make_log_uniform(s.at("lo"), s.at("hi"));
  if (spec.family == "uniform") return make_uniform_density(s.at("lo"), s.at("hi"));
  if (spec.family == "discrete") {
    std::vector<double> values, probs;
    for (const auto& [v, p] : spec.points) {
      values.push_back(v);
      probs.push_back(p);
    }
    return make_discrete(values, probs);
  }
  throw std::invalid_argument("distribution spec: unknown family '" +
                              spec.family + "'");
}

FadingDistribution parse_distribution_spec(const std::string& json_text) {
  return build_distribution(parse_spec(json_text));
}

}  // namespace wffd
