#include "ratiokit/serialize.hpp"

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ratiokit/errors.hpp"

namespace ratiokit {

namespace {

using nlohmann::json;

json complex_array(const std::vector<Complex>& values) {
  json arr = json::array();
  for (const Complex& v : values) arr.push_back(json::array({v.real(), v.imag()}));
  return arr;
}

std::vector<Complex> parse_complex_array(const json& arr, const std::string& key) {
  if (!arr.is_array()) throw ValueError("field \"" + key + "\" must be an array");
  std::vector<Complex> values;
  for (const json& entry : arr) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number()) {
      throw ValueError("entries of \"" + key + "\" must be [re, im] number pairs");
    }
    values.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  return values;
}

int parse_count(const json& obj, const std::string& key) {
  if (!obj.contains(key)) throw ValueError("missing field \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ValueError("field \"" + key + "\" must be an integer");
  return v.get<int>();
}

json parse_object(const std::string& text, const std::set<std::string>& allowed) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ValueError(std::string("invalid JSON: ") + err.what());
  }
  if (!obj.is_object()) throw ValueError("parameter JSON must be an object");
  for (const auto& item : obj.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      throw ValueError("unexpected field \"" + item.key() + "\"");
    }
  }
  return obj;
}

}  // namespace

std::string params_to_json(const RawParams& raw, int indent) {
  json obj;
  obj["p"] = raw.p;
  obj["q"] = raw.q;
  obj["N"] = raw.N;
  obj["xs"] = complex_array(raw.xs);
  obj["ys"] = complex_array(raw.ys);
  return obj.dump(indent);
}

RawParams params_from_json(const std::string& text) {
  const json obj = parse_object(text, {"p", "q", "N", "xs", "ys"});
  RawParams raw;
  raw.p = parse_count(obj, "p");
  raw.q = parse_count(obj, "q");
  raw.N = parse_count(obj, "N");
  if (!obj.contains("xs") || !obj.contains("ys")) {
    throw ValueError("missing field \"xs\" or \"ys\"");
  }
  raw.xs = parse_complex_array(obj.at("xs"), "xs");
  raw.ys = parse_complex_array(obj.at("ys"), "ys");
  return raw;
}

std::string extended_params_to_json(const ExtendedRawParams& raw, int indent) {
  json obj;
  obj["p"] = raw.p;
  obj["q"] = raw.q;
  obj["pprime"] = raw.pprime;
  obj["qprime"] = raw.qprime;
  obj["N"] = raw.N;
  obj["xs"] = complex_array(raw.xs);
  obj["ys"] = complex_array(raw.ys);
  return obj.dump(indent);
}

ExtendedRawParams extended_params_from_json(const std::string& text) {
  const json obj = parse_object(text, {"p", "q", "pprime", "qprime", "N", "xs", "ys"});
  ExtendedRawParams raw;
  raw.p = parse_count(obj, "p");
  raw.q = parse_count(obj, "q");
  raw.pprime = parse_count(obj, "pprime");
  raw.qprime = parse_count(obj, "qprime");
  raw.N = parse_count(obj, "N");
  if (!obj.contains("xs") || !obj.contains("ys")) {
    throw ValueError("missing field \"xs\" or \"ys\"");
  }
  raw.xs = parse_complex_array(obj.at("xs"), "xs");
  raw.ys = parse_complex_array(obj.at("ys"), "ys");
  return raw;
}

}  // namespace ratiokit
