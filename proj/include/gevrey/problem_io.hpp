#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gevrey/error.hpp"
#include "gevrey/problem.hpp"

namespace gevrey {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline void schema_require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::schema, "problem file: " + what);
}

inline double json_number(const ordered_json& j, const std::string& where) {
  schema_require(j.is_number(), where + " must be a number");
  return j.get<double>();
}

}  // namespace detail

/// Problem file:
///   {"nu": int, "rho": float, "rho1": float,
///    "tensors": [{"n": int, "m": int, "entries": [[[re, im], ...], ...]}]}
/// `entries` holds nu^(m+1) eps-polynomials, row-major over (i, i_1..i_m).
inline ProblemSpec<double> problem_from_json(const ordered_json& doc) {
  using detail::schema_require;
  schema_require(doc.is_object(), "top level must be an object");
  for (const auto& [key, _] : doc.items())
    schema_require(key == "nu" || key == "rho" || key == "rho1" || key == "tensors",
                   "unknown key '" + key + "'");
  schema_require(doc.contains("nu") && doc["nu"].is_number_integer(), "'nu' must be an integer");
  schema_require(doc.contains("tensors") && doc["tensors"].is_array(), "'tensors' must be an array");
  ProblemSpec<double> p;
  p.nu = doc["nu"].get<int>();
  schema_require(p.nu >= 1 && p.nu <= 8, "'nu' must lie in [1, 8]");
  if (doc.contains("rho")) p.rho = detail::json_number(doc["rho"], "'rho'");
  if (doc.contains("rho1")) p.rho1 = detail::json_number(doc["rho1"], "'rho1'");
  schema_require(!doc["tensors"].empty(), "'tensors' must not be empty");
  int idx = 0;
  for (const auto& t : doc["tensors"]) {
    const std::string where = "tensors[" + std::to_string(idx++) + "]";
    schema_require(t.is_object(), where + " must be an object");
    for (const auto& [key, _] : t.items())
      schema_require(key == "n" || key == "m" || key == "entries", where + ": unknown key '" + key + "'");
    schema_require(t.contains("n") && t["n"].is_number_integer() && t["n"].get<int>() >= 0,
                   where + ".n must be a nonnegative integer");
    schema_require(t.contains("m") && t["m"].is_number_integer() && t["m"].get<int>() >= 0,
                   where + ".m must be a nonnegative integer");
    schema_require(t.contains("entries") && t["entries"].is_array(), where + ".entries must be an array");
    CoeffTensor<double> ct{t["n"].get<int>(), t["m"].get<int>(), {}};
    schema_require(ct.m <= 8, where + ".m is too large");
    schema_require(static_cast<int>(t["entries"].size()) == tensor_size(p.nu, ct.m),
                   where + ".entries must have nu^(m+1) elements");
    for (const auto& e : t["entries"]) {
      schema_require(e.is_array() && !e.empty(), where + ": each entry must be a nonempty coefficient list");
      std::vector<std::complex<double>> c;
      for (const auto& pair : e) {
        schema_require(pair.is_array() && pair.size() == 2, where + ": coefficients are [re, im] pairs");
        c.emplace_back(detail::json_number(pair[0], where), detail::json_number(pair[1], where));
      }
      ct.entries.emplace_back(Var::eps, std::move(c), true);
    }
    p.tensors.push_back(std::move(ct));
  }
  p.validate();
  return p;
}

inline ProblemSpec<double> parse_problem(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema, std::string("problem file is not valid JSON: ") + e.what());
  }
  return problem_from_json(doc);
}

inline ProblemSpec<double> load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::domain, "cannot open problem file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

inline ordered_json problem_to_json(const ProblemSpec<double>& p) {
  ordered_json doc;
  doc["nu"] = p.nu;
  doc["rho"] = p.rho;
  doc["rho1"] = p.rho1;
  doc["tensors"] = ordered_json::array();
  for (const auto& t : p.tensors) {
    ordered_json jt;
    jt["n"] = t.n;
    jt["m"] = t.m;
    jt["entries"] = ordered_json::array();
    for (const auto& e : t.entries) {
      ordered_json coeffs = ordered_json::array();
      for (const auto& c : e.coeffs()) coeffs.push_back({c.real(), c.imag()});
      jt["entries"].push_back(std::move(coeffs));
    }
    doc["tensors"].push_back(std::move(jt));
  }
  return doc;
}

inline std::string serialize_problem(const ProblemSpec<double>& p) {
  return problem_to_json(p).dump(2) + "\n";
}

}  // namespace gevrey
