#pragma once

// Space definition files:
//   { "s": 3, "omega": 0.5,
//     "a": [1, 2, 3]                                  explicit list
//        | {"family": "constant", "value": 1}
//        | {"family": "linear", "slope": 1}
//        | {"family": "exponential", "delta": 1, "scale": 1}        scale e^{delta j}
//        | {"family": "power", "kappa": 2, "scale": 1}              scale j^kappa
//        | {"family": "super_exponential", "delta": 1, "scale": 1}  scale e^{delta j^2}
//     "b": same forms }
// "s" may be omitted when the CLI supplies --s.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "korobov/errors.hpp"
#include "korobov/sequence.hpp"
#include "korobov/space.hpp"

namespace korobov::io {

using json = nlohmann::json;

/// Malformed space file or unsupported field.
class parse_error : public precondition_error {
 public:
  using precondition_error::precondition_error;
};

inline double number(const json& j, const char* key, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw parse_error(std::string("missing field '") + key + "'");
  }
  if (!j.at(key).is_number()) throw parse_error(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline SequenceFamily parse_family(const json& j) {
  if (j.is_array()) {
    std::vector<double> values;
    for (const auto& v : j) {
      if (!v.is_number()) throw parse_error("explicit sequences must contain numbers");
      values.push_back(v.get<double>());
    }
    return SequenceFamily::explicit_values(std::move(values));
  }
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw parse_error("sequence must be a list or an object with a 'family' name");
  const auto name = j.at("family").get<std::string>();
  if (name == "explicit") return parse_family(j.at("values"));
  if (name == "constant") return SequenceFamily::constant(number(j, "value"));
  if (name == "linear") return SequenceFamily::linear(number(j, "slope", 1.0));
  if (name == "exponential") return SequenceFamily::exponential(number(j, "delta"), number(j, "scale", 1.0));
  if (name == "power") return SequenceFamily::power(number(j, "kappa"), number(j, "scale", 1.0));
  if (name == "super_exponential")
    return SequenceFamily::super_exponential(number(j, "delta"), number(j, "scale", 1.0));
  throw parse_error("unknown sequence family '" + name + "'");
}

inline json family_to_json(const SequenceFamily& f) {
  using K = SequenceFamily::Kind;
  switch (f.kind()) {
    case K::explicit_list: return json(f.explicit_list());
    case K::constant: return {{"family", "constant"}, {"value", f.scale()}};
    case K::linear: return {{"family", "linear"}, {"slope", f.scale()}};
    case K::exponential: return {{"family", "exponential"}, {"delta", f.rate()}, {"scale", f.scale()}};
    case K::power: return {{"family", "power"}, {"kappa", f.rate()}, {"scale", f.scale()}};
    case K::super_exponential:
      return {{"family", "super_exponential"}, {"delta", f.rate()}, {"scale", f.scale()}};
  }
  return {};
}

struct SpaceSpec {
  std::optional<std::size_t> s;
  double omega = 0.0;
  SequenceFamily a = SequenceFamily::constant(1.0);
  SequenceFamily b = SequenceFamily::constant(1.0);

  WeightedSpace build(std::optional<std::size_t> dim = {}) const {
    const auto d = dim ? dim : s;
    if (!d) throw parse_error("dimension not given in the space file or on the command line");
    return {*d, omega, a, b};
  }
};

inline SpaceSpec parse_space(const json& j) {
  if (!j.is_object()) throw parse_error("space definition must be a JSON object");
  SpaceSpec spec;
  if (j.contains("s")) {
    if (!j.at("s").is_number_integer() || j.at("s").get<long long>() < 1)
      throw parse_error("'s' must be a positive integer");
    spec.s = j.at("s").get<std::size_t>();
  }
  spec.omega = number(j, "omega");
  if (!j.contains("a") || !j.contains("b")) throw parse_error("space needs both 'a' and 'b'");
  spec.a = parse_family(j.at("a"));
  spec.b = parse_family(j.at("b"));
  return spec;
}

inline SpaceSpec parse_space(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  return parse_space(j);
}

inline SpaceSpec parse_space(const char* text) { return parse_space(std::string(text)); }

inline SpaceSpec load_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open space file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_space(buf.str());
}

inline json space_to_json(const WeightedSpace& space) {
  return {{"s", space.dim()},
          {"omega", space.omega()},
          {"a", family_to_json(space.a_family())},
          {"b", family_to_json(space.b_family())}};
}

}  // namespace korobov::io
