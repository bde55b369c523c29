#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "classify.hpp"
#include "criteria.hpp"

namespace indefsl {

inline constexpr const char* version = "0.1.0";

struct ToleranceProfile {
  std::string name = "default";
  SingularityOptions singularities{};
  CriteriaOptions criteria{};
};

inline ToleranceProfile tolerance_profile(const std::string& name) {
  ToleranceProfile p;
  p.name = name;
  if (name == "default") return p;
  if (name == "strict") {
    p.singularities.m_hi = 9;
    p.criteria.real_points = 8001;
    p.criteria.per_decade = 12;
    return p;
  }
  throw Error(ErrorKind::Usage, "unknown tolerance profile '" + name + "'");
}

namespace io {

using json = nlohmann::json;

// JSON has no infinities; they travel as the strings "inf" and "-inf"
inline json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

inline json num(cplx z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

inline json interval(const Interval& iv) { return json::array({num(iv.lo), num(iv.hi)}); }

inline json header(const ToleranceProfile& p) { return {{"version", version}, {"tol_profile", p.name}}; }

inline std::string csv_header(const ToleranceProfile& p) {
  return std::string("# indefsl ") + version + " tol-profile=" + p.name + "\n";
}

// ---- parsing ----

namespace detail {

inline double get_double(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::MalformedInput, std::string("missing field '") + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw Error(ErrorKind::MalformedInput, std::string("field '") + key + "' is not a number");
}

template <class T>
std::vector<T> get_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw Error(ErrorKind::MalformedInput, std::string("missing array '") + key + "'");
  std::vector<T> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(ErrorKind::MalformedInput, std::string("non-numeric entry in '") + key + "'");
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw Error(ErrorKind::MalformedInput, std::string("'") + key + "' must hold integers");
    }
    out.push_back(v.get<T>());
  }
  return out;
}

}  // namespace detail

inline BandStructure parse_bands(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::MalformedInput, "band structure must be a JSON object");
  BandStructure b;
  b.mu_r = detail::get_array<double>(j, "mu_r");
  b.mu_l = detail::get_array<double>(j, "mu_l");
  b.xi = detail::get_array<double>(j, "xi");
  b.signs = detail::get_array<int>(j, "signs");
  return b;
}

// a band structure {"mu_r", "mu_l", "xi", "signs"} or a closed form {"kind", "xi", "k2", "a"}
inline WeylPair parse_problem(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::MalformedInput, "problem must be a JSON object");
  bool closed = j.contains("kind"), banded = j.contains("mu_r");
  if (closed == banded) throw Error(ErrorKind::MalformedInput, "exactly one of 'kind' or 'mu_r' must be present");
  if (banded) return WeylPair::finite_zone(parse_bands(j));
  if (!j.at("kind").is_string()) throw Error(ErrorKind::MalformedInput, "'kind' must be a string");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "const") return WeylPair::constant(detail::get_double(j, "a"));
  if (kind == "example1") return WeylPair::example1(detail::get_double(j, "xi"), detail::get_double(j, "k2"));
  if (kind == "example2") return WeylPair::example2(detail::get_double(j, "xi"), detail::get_double(j, "k2"));
  throw Error(ErrorKind::MalformedInput, "unknown kind '" + kind + "'");
}

inline WeylPair parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedInput, e.what());
  }
  return parse_problem(j);
}

inline WeylPair load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

// ---- serialization ----

inline json to_json(const BandStructure& b) {
  return {{"mu_r", b.mu_r}, {"mu_l", b.mu_l}, {"xi", b.xi}, {"signs", b.signs}};
}

inline json to_json(const Eigenvalue& e) {
  json j = num(e.z);
  j["mult"] = e.alg_mult;
  j["geo_mult"] = e.geo_mult;
  if (e.capped) j["capped"] = true;
  return j;
}

inline json to_json(const SpectrumResult& s) {
  json j;
  j["essential"] = json::array();
  for (const auto& iv : s.essential) j["essential"].push_back(interval(iv));
  j["eigenvalues"] = json::array();
  for (const auto& e : s.eigenvalues) j["eigenvalues"].push_back(to_json(e));
  j["embedded_zeros"] = s.embedded_zeros;
  return j;
}

inline json to_json(const SingularityReport& r) {
  return {{"point", r.at_infinity ? json("inf") : num(r.point)},
          {"kind", to_string(r.kind)},
          {"order", r.estimated_order},
          {"growth", num(r.growth)}};
}

inline json to_json(const DefinitizableResult& d) {
  json j{{"definitizable", d.definitizable}, {"alphas", json::array()}};
  for (double a : d.alphas) j["alphas"].push_back(num(a));
  j["witness"] = d.witness ? interval(*d.witness) : json(nullptr);
  return j;
}

inline json to_json(const Verdict& v) {
  json j;
  j["overall"] = to_string(v.overall);
  j["singularities"] = json::array();
  for (const auto& s : v.singularities) j["singularities"].push_back(s.at_infinity ? json("inf") : num(s.point));
  j["eigenvalues"] = json::array();
  for (const auto& e : v.spectrum.eigenvalues) j["eigenvalues"].push_back(to_json(e));
  j["definitizable"] = v.definitizable.definitizable;
  j["essential"] = json::array();
  for (const auto& iv : v.spectrum.essential) j["essential"].push_back(interval(iv));
  j["boundary"] = v.boundary;
  j["condition_iii"] = v.condition_iii.undecided ? json("undecided") : json(v.condition_iii.holds);
  j["candidates"] = json::array();
  for (const auto& s : v.candidates) j["candidates"].push_back(to_json(s));
  j["notes"] = v.notes;
  return j;
}

inline json to_json(const CriterionReport& r) {
  json j{{"value", num(r.value)}, {"status", r.status}};
  if (r.witness) j["witness"] = num(*r.witness);
  else if (r.witness_interval) j["witness"] = interval(*r.witness_interval);
  else j["witness"] = nullptr;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

inline json to_json(const CriteriaReport& c) {
  json j;
  for (const auto& r : c.all()) j[r.name] = to_json(r);
  return j;
}

// sweep / table cells
inline std::string verdict_cell(const Verdict& v) { return v.boundary ? "BOUNDARY" : short_name(v.overall); }

inline std::string fmt(double x) {
  std::ostringstream o;
  o.precision(10);
  o << x;
  return o.str();
}

inline std::string singularities_cell(const Verdict& v) {
  std::string s;
  for (const auto& r : v.singularities) {
    if (!s.empty()) s += ";";
    s += r.at_infinity ? "inf" : fmt(r.point);
  }
  return s;
}

inline std::string eigenvalues_cell(const SpectrumResult& sp) {
  std::string s;
  for (const auto& e : sp.eigenvalues) {
    if (!s.empty()) s += ";";
    s += fmt(e.z.real());
    if (e.z.imag() != 0.0) s += (e.z.imag() > 0 ? "+" : "") + fmt(e.z.imag()) + "i";
    if (e.alg_mult > 1) s += "^" + std::to_string(e.alg_mult);
  }
  return s;
}

}  // namespace io
}  // namespace indefsl
