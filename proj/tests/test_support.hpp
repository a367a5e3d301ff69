#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "specem/types.hpp"

namespace test_support {

// Random pmf on B bins of a length-T grid, floored like the library does.
inline specem::Spectrum random_pmf(std::size_t bins, std::size_t time_len, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  specem::Spectrum s;
  s.time_len = time_len;
  s.kind = specem::SpectrumKind::pmf;
  s.power.resize(bins);
  double total = 0.0;
  for (auto& v : s.power) {
    v = std::max(u(eng), 1e-12);
    total += v;
  }
  for (auto& v : s.power) v /= total;
  return s;
}

inline specem::TimeSeries random_series(std::size_t t_len, std::mt19937_64& eng) {
  std::normal_distribution<double> g(0.0, 1.0);
  specem::TimeSeries x;
  x.values.resize(t_len);
  for (auto& v : x.values) v = g(eng);
  return x;
}

// Adjusted Rand index from a truth/assignment pair.
inline double adjusted_rand_index(const std::vector<std::size_t>& truth,
                                  const std::vector<std::size_t>& assigned) {
  const std::size_t n = truth.size();
  std::size_t tmax = 0, amax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tmax = std::max(tmax, truth[i] + 1);
    amax = std::max(amax, assigned[i] + 1);
  }
  std::vector<std::vector<double>> m(tmax, std::vector<double>(amax, 0.0));
  for (std::size_t i = 0; i < n; ++i) m[truth[i]][assigned[i]] += 1.0;
  auto choose2 = [](double v) { return v * (v - 1.0) / 2.0; };
  double index = 0.0, rows = 0.0, cols = 0.0;
  for (std::size_t r = 0; r < tmax; ++r) {
    double rs = 0.0;
    for (std::size_t c = 0; c < amax; ++c) {
      index += choose2(m[r][c]);
      rs += m[r][c];
    }
    rows += choose2(rs);
  }
  for (std::size_t c = 0; c < amax; ++c) {
    double cs = 0.0;
    for (std::size_t r = 0; r < tmax; ++r) cs += m[r][c];
    cols += choose2(cs);
  }
  const double expected = rows * cols / choose2(static_cast<double>(n));
  const double maximum = (rows + cols) / 2.0;
  return (index - expected) / (maximum - expected);
}

// Minimal JSON-schema checker covering the subset the shipped schemas use:
// type, required, properties, items, enum, minimum. Returns an empty string
// when the value conforms, else a description of the first violation.
inline std::string schema_violation(const nlohmann::json& value, const nlohmann::json& schema,
                                    const std::string& where = "$") {
  using nlohmann::json;
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    const bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                    (t == "string" && value.is_string()) ||
                    (t == "number" && value.is_number()) ||
                    (t == "integer" && value.is_number_integer()) ||
                    (t == "boolean" && value.is_boolean());
    if (!ok) return where + ": expected " + t;
  }
  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& e : schema["enum"]) hit = hit || e == value;
    if (!hit) return where + ": not in enum";
  }
  if (schema.contains("minimum") && value.is_number()) {
    if (value.get<double>() < schema["minimum"].get<double>()) return where + ": below minimum";
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!value.contains(key.get<std::string>())) {
          return where + ": missing required '" + key.get<std::string>() + "'";
        }
      }
    }
    if (schema.contains("properties")) {
      for (const auto& [key, sub] : schema["properties"].items()) {
        if (!value.contains(key)) continue;
        const std::string err = schema_violation(value[key], sub, where + "." + key);
        if (!err.empty()) return err;
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    std::size_t i = 0;
    for (const auto& item : value) {
      const std::string err =
          schema_violation(item, schema["items"], where + "[" + std::to_string(i++) + "]");
      if (!err.empty()) return err;
    }
  }
  return "";
}

}  // namespace test_support
