#pragma once

// JSON and CSV encodings of solver, bound and sweep results. Complex numbers
// are [re, im] in JSON and "re+imi" in CSV.

#include <charconv>
#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

#include "opa/bounds.hpp"
#include "opa/experiments.hpp"
#include "opa/solvers.hpp"

namespace opa::report {

using nlohmann::json;

inline json complex_json(cd c) { return json::array({c.real(), c.imag()}); }

inline json complex_list(const std::vector<cd>& v) {
  json out = json::array();
  for (const cd& c : v) out.push_back(complex_json(c));
  return out;
}

inline json to_json(const OpaResult& r) {
  return json{{"method", to_string(r.method)},
              {"status", to_string(r.status)},
              {"coeffs", complex_list(r.coeffs)},
              {"error", r.error},
              {"residuals", complex_list(r.residuals)},
              {"residual_max", r.residual_max()},
              {"iterations", r.iterations},
              {"experimental", r.experimental},
              {"warnings", r.warnings}};
}

inline json to_json(const std::vector<BoundEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) out.push_back({{"value", e.value}, {"provenance", e.provenance}});
  return out;
}

inline json to_json(const BoundReport& r) {
  json out{{"lower", to_json(r.lower)}, {"upper", to_json(r.upper)}, {"warnings", r.warnings}};
  out["computed_error"] = r.computed_error ? json(*r.computed_error) : json(nullptr);
  return out;
}

inline json to_json(const SweepRow& row) {
  json out{{"key", row.key},
           {"status", to_string(row.status)},
           {"coeffs", complex_list(row.coeffs)},
           {"error", row.error},
           {"residual_max", row.residual_max},
           {"roots", complex_list(row.roots)},
           {"warnings", row.warnings}};
  if (row.distance_to_last) out["distance_to_last"] = *row.distance_to_last;
  return out;
}

inline json to_json(const SweepResult& s) {
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back(to_json(r));
  return json{{"key", s.key_name}, {"rows", rows}, {"warnings", s.warnings}};
}

/// Shortest round-trip decimal form.
inline std::string number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string complex_csv(cd c) {
  std::string im = number(c.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return number(c.real()) + im + "i";
}

inline std::string complex_cells(const std::vector<cd>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += complex_csv(v[i]);
  }
  return out;
}

/// Header plus one line per row. Complex sequences are space-separated
/// inside their cell.
inline std::string to_csv(const SweepResult& s) {
  std::string out = s.key_name + ",status,error,residual_max,coeffs,roots,distance_to_last\n";
  for (const auto& r : s.rows) {
    out += number(r.key) + ',' + to_string(r.status) + ',' + number(r.error) + ',' + number(r.residual_max) + ',' +
           complex_cells(r.coeffs) + ',' + complex_cells(r.roots) + ',' +
           (r.distance_to_last ? number(*r.distance_to_last) : std::string()) + '\n';
  }
  return out;
}

inline std::string to_csv(const OpaResult& r) {
  return "method,status,error,residual_max,iterations,coeffs\n" + std::string(to_string(r.method)) + ',' +
         to_string(r.status) + ',' + number(r.error) + ',' + number(r.residual_max()) + ',' +
         std::to_string(r.iterations) + ',' + complex_cells(r.coeffs) + '\n';
}

inline std::string to_csv(const BoundReport& r) {
  std::string out = "kind,provenance,value\n";
  for (const auto& e : r.lower) out += "lower," + e.provenance + ',' + number(e.value) + '\n';
  for (const auto& e : r.upper) out += "upper," + e.provenance + ',' + number(e.value) + '\n';
  if (r.computed_error) out += "computed,solve_general," + number(*r.computed_error) + '\n';
  return out;
}

}  // namespace opa::report
