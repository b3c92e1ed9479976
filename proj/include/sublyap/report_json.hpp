#pragma once

// Versioned JSON form of the analysis report. Numbers are written with 12
// significant digits; logarithmic quantities may be converted to bits.
// Readers ignore members they do not know.

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "classifier.hpp"
#include "error.hpp"

namespace sublyap {

using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view schema_version = "1";
inline constexpr std::string_view tool_version = "0.1.0";

/// Rounds to `digits` significant decimal digits (round trip through text).
inline double round_sig(double x, int digits = 12) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

struct Units {
  bool bits = false;
  double scale() const { return bits ? 1.0 / std::log(2.0) : 1.0; }
  std::string_view name() const { return bits ? "bits" : "nats"; }
};

namespace detail {

inline ordered_json log_value(double nats, const Units& u) {
  if (std::isinf(nats)) return nats < 0 ? "-inf" : "inf";
  return round_sig(nats * u.scale());
}

inline double read_log_value(const ordered_json& j, const Units& u) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw error(error_kind::syntax, "bad numeric string '" + s + "'");
  }
  return j.get<double>() / u.scale();
}

template <class Enum, std::size_t N>
Enum enum_from(const std::string& s, const std::array<Enum, N>& values) {
  for (auto v : values)
    if (to_string(v) == s) return v;
  throw error(error_kind::syntax, "unknown enum value '" + s + "'");
}

inline constexpr std::array all_methods{ExponentMethod::closed_form, ExponentMethod::cocycle, ExponentMethod::birkhoff,
                                        ExponentMethod::inward_eigen};
inline constexpr std::array all_verdicts{Verdict::no_ac_component, Verdict::pure_point_by_coincidence,
                                         Verdict::singular_continuous_bijective, Verdict::periodic_degenerate,
                                         Verdict::inconclusive};
inline constexpr std::array all_column_classes{ColumnClass::bijective, ColumnClass::has_coincidence,
                                               ColumnClass::degenerate};
inline constexpr std::array all_ida_types{IdaType::tm_type, IdaType::pd_type, IdaType::full, IdaType::other};

}  // namespace detail

inline ordered_json to_json(const ExponentPair& e, const Units& u) {
  return {{"chi_min", detail::log_value(e.chi_min, u)},
          {"chi_max", detail::log_value(e.chi_max, u)},
          {"method", to_string(e.method)},
          {"stderr_min", detail::log_value(e.stderr_min, u)},
          {"stderr_max", detail::log_value(e.stderr_max, u)},
          {"samples", e.samples},
          {"iters", e.iters}};
}

inline ExponentPair exponents_from_json(const ordered_json& j, const Units& u) {
  ExponentPair e;
  e.chi_min = detail::read_log_value(j.at("chi_min"), u);
  e.chi_max = detail::read_log_value(j.at("chi_max"), u);
  e.method = detail::enum_from(j.at("method").get<std::string>(), detail::all_methods);
  e.stderr_min = detail::read_log_value(j.at("stderr_min"), u);
  e.stderr_max = detail::read_log_value(j.at("stderr_max"), u);
  e.samples = j.at("samples").get<std::size_t>();
  e.iters = j.at("iters").get<std::size_t>();
  return e;
}

inline ordered_json to_json(const CocycleConfig& c) {
  return {{"iters", c.iters},         {"samples", c.samples}, {"seed", c.seed},
          {"det_floor", c.det_floor}, {"burn_in", c.burn_in}, {"max_retries", c.max_retries}};
}

inline CocycleConfig config_from_json(const ordered_json& j) {
  CocycleConfig c;
  c.iters = j.at("iters").get<std::size_t>();
  c.samples = j.at("samples").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.det_floor = j.at("det_floor").get<double>();
  c.burn_in = j.at("burn_in").get<std::size_t>();
  c.max_retries = j.at("max_retries").get<std::size_t>();
  return c;
}

inline ordered_json to_json(const TrigMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(m(r, c).coefficients());
    rows.push_back(std::move(row));
  }
  return rows;
}

inline TrigMatrix trig_matrix_from_json(const ordered_json& j) {
  TrigMatrix m(j.size());
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < j.size(); ++c) m(r, c) = IntPolynomial(j.at(r).at(c).get<std::vector<std::int64_t>>());
  return m;
}

inline ordered_json roots_to_json(const std::vector<std::complex<double>>& roots) {
  ordered_json out = ordered_json::array();
  for (const auto& z : roots) out.push_back({round_sig(z.real()), round_sig(z.imag())});
  return out;
}

inline std::vector<std::complex<double>> roots_from_json(const ordered_json& j) {
  std::vector<std::complex<double>> out;
  for (const auto& z : j) out.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  return out;
}

inline ordered_json to_json(const SpectralReport& r, const Units& u) {
  ordered_json j;
  j["alphabet"] = r.alphabet;
  ordered_json rules = ordered_json::object();
  for (std::size_t i = 0; i < r.alphabet.size(); ++i) rules[std::string(1, r.alphabet[i])] = r.images[i];
  j["rules"] = std::move(rules);
  j["length"] = r.length;
  j["primitive"] = r.primitive;
  if (r.column_class) j["column_class"] = to_string(*r.column_class);
  if (r.partition)
    j["partition"] = {{"coincident_a", r.partition->coincident_a},
                      {"coincident_b", r.partition->coincident_b},
                      {"bijective_id", r.partition->bijective_id},
                      {"bijective_swap", r.partition->bijective_swap}};
  j["ida"] = {{"dimension", r.ida_dimension}, {"type", to_string(r.ida_type)}};
  if (r.q_minus_r) j["q_minus_r"] = r.q_minus_r->coefficients();
  if (r.mahler) {
    const auto& m = *r.mahler;
    ordered_json mj;
    mj["value"] = detail::log_value(m.value, u);
    mj["roots_value"] = detail::log_value(m.roots_value, u);
    if (m.quadrature_value) mj["quadrature_value"] = detail::log_value(*m.quadrature_value, u);
    mj["kronecker"] = m.kronecker;
    mj["roots"] = roots_to_json(m.roots);
    mj["l1"] = round_sig(m.l1);
    mj["l2"] = round_sig(m.l2);
    j["mahler"] = std::move(mj);
  }
  if (r.exponents_closed) j["exponents_closed"] = to_json(*r.exponents_closed, u);
  if (r.exponents_numeric) j["exponents_numeric"] = to_json(*r.exponents_numeric, u);
  ordered_json inward = ordered_json::array();
  for (double x : r.inward_exponents) inward.push_back(detail::log_value(x, u));
  j["inward_exponents"] = std::move(inward);
  if (!r.blocks.empty()) {
    ordered_json blocks = ordered_json::array();
    for (const auto& b : r.blocks) {
      ordered_json bj;
      bj["name"] = b.name;
      bj["matrix"] = to_json(b.matrix);
      bj["determinant"] = b.determinant.coefficients();
      bj["invertible"] = b.invertible;
      if (b.exponents) bj["exponents"] = to_json(*b.exponents, u);
      bj["unitarity_residual"] = round_sig(b.unitarity_residual);
      blocks.push_back(std::move(bj));
    }
    j["blocks"] = std::move(blocks);
  }
  j["verdict"] = to_string(r.verdict);
  if (r.annotation) j["annotation"] = to_string(*r.annotation);
  j["caveats"] = r.caveats;
  if (r.config) j["config"] = to_json(*r.config);
  return j;
}

inline SpectralReport report_from_json(const ordered_json& j, const Units& u) {
  SpectralReport r;
  r.alphabet = j.at("alphabet").get<std::string>();
  for (const auto& [key, value] : j.at("rules").items()) r.images.push_back(value.get<std::string>());
  r.length = j.at("length").get<std::size_t>();
  r.primitive = j.at("primitive").get<bool>();
  if (j.contains("column_class"))
    r.column_class = detail::enum_from(j["column_class"].get<std::string>(), detail::all_column_classes);
  if (j.contains("partition")) {
    const auto& p = j["partition"];
    r.partition = ColumnPartition{p.at("coincident_a").get<std::vector<std::size_t>>(),
                                  p.at("coincident_b").get<std::vector<std::size_t>>(),
                                  p.at("bijective_id").get<std::vector<std::size_t>>(),
                                  p.at("bijective_swap").get<std::vector<std::size_t>>()};
  }
  r.ida_dimension = j.at("ida").at("dimension").get<std::size_t>();
  r.ida_type = detail::enum_from(j.at("ida").at("type").get<std::string>(), detail::all_ida_types);
  if (j.contains("q_minus_r")) r.q_minus_r = IntPolynomial(j["q_minus_r"].get<std::vector<std::int64_t>>());
  if (j.contains("mahler")) {
    const auto& mj = j["mahler"];
    MahlerSummary m;
    m.value = detail::read_log_value(mj.at("value"), u);
    m.roots_value = detail::read_log_value(mj.at("roots_value"), u);
    if (mj.contains("quadrature_value")) m.quadrature_value = detail::read_log_value(mj["quadrature_value"], u);
    m.kronecker = mj.at("kronecker").get<bool>();
    m.roots = roots_from_json(mj.at("roots"));
    m.l1 = mj.at("l1").get<double>();
    m.l2 = mj.at("l2").get<double>();
    r.mahler = m;
  }
  if (j.contains("exponents_closed")) r.exponents_closed = exponents_from_json(j["exponents_closed"], u);
  if (j.contains("exponents_numeric")) r.exponents_numeric = exponents_from_json(j["exponents_numeric"], u);
  for (const auto& x : j.at("inward_exponents")) r.inward_exponents.push_back(detail::read_log_value(x, u));
  if (j.contains("blocks")) {
    for (const auto& bj : j["blocks"]) {
      BlockReport b;
      b.name = bj.at("name").get<std::string>();
      b.matrix = trig_matrix_from_json(bj.at("matrix"));
      b.determinant = IntPolynomial(bj.at("determinant").get<std::vector<std::int64_t>>());
      b.invertible = bj.at("invertible").get<bool>();
      if (bj.contains("exponents")) b.exponents = exponents_from_json(bj["exponents"], u);
      b.unitarity_residual = bj.at("unitarity_residual").get<double>();
      r.blocks.push_back(std::move(b));
    }
  }
  r.verdict = detail::enum_from(j.at("verdict").get<std::string>(), detail::all_verdicts);
  if (j.contains("annotation")) r.annotation = detail::enum_from(j["annotation"].get<std::string>(), detail::all_verdicts);
  r.caveats = j.at("caveats").get<std::vector<std::string>>();
  if (j.contains("config")) r.config = config_from_json(j["config"]);
  return r;
}

/// Top-level document written by `analyze`.
struct ReportDocument {
  std::string schema = std::string(schema_version);
  std::string tool = std::string(tool_version);
  Units units;
  ordered_json input = ordered_json::object();
  SpectralReport report;
  std::optional<std::map<std::string, double>> timing_ms;
};

inline ordered_json to_json(const ReportDocument& doc) {
  ordered_json j;
  j["schema_version"] = doc.schema;
  j["tool_version"] = doc.tool;
  j["units"] = doc.units.name();
  j["input"] = doc.input;
  j["report"] = to_json(doc.report, doc.units);
  if (doc.timing_ms) {
    ordered_json t = ordered_json::object();
    for (const auto& [phase, ms] : *doc.timing_ms) t[phase] = round_sig(ms, 6);
    j["timing_ms"] = std::move(t);
  }
  return j;
}

inline ReportDocument document_from_json(const ordered_json& j) {
  ReportDocument doc;
  doc.schema = j.at("schema_version").get<std::string>();
  doc.tool = j.at("tool_version").get<std::string>();
  doc.units.bits = j.at("units").get<std::string>() == "bits";
  doc.input = j.at("input");
  doc.report = report_from_json(j.at("report"), doc.units);
  if (j.contains("timing_ms")) {
    std::map<std::string, double> t;
    for (const auto& [phase, ms] : j["timing_ms"].items()) t[phase] = ms.get<double>();
    doc.timing_ms = std::move(t);
  }
  return doc;
}

}  // namespace sublyap
