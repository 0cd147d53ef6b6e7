#pragma once

// JSON model files:
//
//   {
//     "states": 3,
//     "relations": {"a1": [[0, 1], [1, 1]]},
//     "valuation": {"p1": [0, 2]},
//     "star": [[0, 0, [1]]]
//   }
//
// "star" is optional and marks a model for PRSPDL. save_model writes a
// canonical layout (keys by numeric index, pairs sorted), so
// save_model(load_model(text)) == text for any text produced by save_model.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pdlkit/error.hpp"
#include "pdlkit/model.hpp"

namespace pdlkit {

namespace detail {

inline std::uint32_t parse_key(const std::string& key, char prefix) {
  if (key.size() < 2 || key[0] != prefix || key[1] == '0')
    throw ModelError("bad key '" + key + "' (expected " + std::string(1, prefix) + "<k> with k >= 1)");
  std::uint64_t v = 0;
  for (std::size_t i = 1; i < key.size(); ++i) {
    if (key[i] < '0' || key[i] > '9') throw ModelError("bad key '" + key + "'");
    v = v * 10 + static_cast<std::uint64_t>(key[i] - '0');
    if (v > 0xffffffffULL) throw ModelError("index too large in key '" + key + "'");
  }
  return static_cast<std::uint32_t>(v);
}

inline std::size_t as_state(const nlohmann::json& j, std::size_t n) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw ModelError("state must be a non-negative integer, got " + j.dump());
  auto s = j.get<std::uint64_t>();
  if (s >= n) throw ModelError("state " + std::to_string(s) + " out of range");
  return static_cast<std::size_t>(s);
}

inline void write_set(std::ostringstream& out, const StateSet& s) {
  out << '[';
  bool first = true;
  for (auto i = s.find_first(); i != StateSet::npos; i = s.find_next(i)) {
    if (!first) out << ", ";
    out << i;
    first = false;
  }
  out << ']';
}

}  // namespace detail

inline KripkeModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ModelError("model must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "states" && key != "relations" && key != "valuation" && key != "star")
      throw ModelError("unknown model field '" + key + "'");
  if (!j.contains("states") || !j["states"].is_number_integer() || j["states"].get<std::int64_t>() < 1)
    throw ModelError("'states' must be a positive integer");
  const auto n = static_cast<std::size_t>(j["states"].get<std::int64_t>());
  KripkeModel m(n);
  if (j.contains("relations")) {
    if (!j["relations"].is_object()) throw ModelError("'relations' must be an object");
    for (const auto& [key, pairs] : j["relations"].items()) {
      Relation& r = m.declare_relation(detail::parse_key(key, 'a'));
      if (!pairs.is_array()) throw ModelError("relation '" + key + "' must be a list of pairs");
      for (const auto& p : pairs) {
        if (!p.is_array() || p.size() != 2) throw ModelError("relation '" + key + "' holds a non-pair " + p.dump());
        r.insert(detail::as_state(p[0], n), detail::as_state(p[1], n));
      }
    }
  }
  if (j.contains("valuation")) {
    if (!j["valuation"].is_object()) throw ModelError("'valuation' must be an object");
    for (const auto& [key, states] : j["valuation"].items()) {
      StateSet& s = m.declare_variable(detail::parse_key(key, 'p'));
      if (!states.is_array()) throw ModelError("valuation '" + key + "' must be a list of states");
      for (const auto& x : states) s.set(detail::as_state(x, n));
    }
  }
  if (j.contains("star")) {
    if (!j["star"].is_array()) throw ModelError("'star' must be a list of [x, y, [results]] triples");
    m.enable_star();
    for (const auto& t : j["star"]) {
      if (!t.is_array() || t.size() != 3 || !t[2].is_array())
        throw ModelError("star entry must be [x, y, [results]], got " + t.dump());
      std::size_t x = detail::as_state(t[0], n);
      std::size_t y = detail::as_state(t[1], n);
      StateSet res = m.composition(x, y);
      for (const auto& z : t[2]) res.set(detail::as_state(z, n));
      m.set_star(x, y, std::move(res));
    }
  }
  return m;
}

inline KripkeModel load_model_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string("malformed model JSON: ") + e.what());
  }
  return model_from_json(j);
}

inline KripkeModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_model_string(buf.str());
}

inline std::string save_model_string(const KripkeModel& m) {
  std::ostringstream out;
  out << "{\n  \"states\": " << m.num_states() << ",\n  \"relations\": {";
  bool first = true;
  for (const auto& [atom, rel] : m.relations()) {
    out << (first ? "\n" : ",\n") << "    \"a" << atom << "\": [";
    bool first_pair = true;
    for (auto [s, t] : rel.pairs()) {
      out << (first_pair ? "" : ", ") << '[' << s << ", " << t << ']';
      first_pair = false;
    }
    out << ']';
    first = false;
  }
  out << (first ? "}" : "\n  }") << ",\n  \"valuation\": {";
  first = true;
  for (const auto& [var, states] : m.valuations()) {
    out << (first ? "\n" : ",\n") << "    \"p" << var << "\": ";
    detail::write_set(out, states);
    first = false;
  }
  out << (first ? "}" : "\n  }");
  if (m.has_star()) {
    out << ",\n  \"star\": [";
    first = true;
    for (const auto& [xy, res] : m.star()) {
      out << (first ? "\n" : ",\n") << "    [" << xy.first << ", " << xy.second << ", ";
      detail::write_set(out, res);
      out << ']';
      first = false;
    }
    out << (first ? "]" : "\n  ]");
  }
  out << "\n}\n";
  return out.str();
}

inline void save_model(const KripkeModel& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ModelError("cannot write model file '" + path + "'");
  out << save_model_string(m);
}

}  // namespace pdlkit
