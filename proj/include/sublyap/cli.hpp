#pragma once

// Command-line front end: analyze, mahler, scan, trace.
// Output is assembled in memory and written once on success.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "classifier.hpp"
#include "error.hpp"
#include "report_json.hpp"

namespace sublyap {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input = 2;
inline constexpr int exit_numeric = 3;

namespace detail {

inline std::string format_number(double x) {
  if (std::isinf(x)) return x < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string read_rules(const std::string& inline_rules, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw error(error_kind::invalid_argument, "cannot read '" + file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (inline_rules.empty()) throw error(error_kind::syntax, "no rules given");
  return inline_rules;
}

// "path: value" lines, one per leaf; scalar arrays stay on one line.
inline void flatten(const ordered_json& j, const std::string& path, std::ostream& out) {
  auto scalar_array = [](const ordered_json& a) {
    for (const auto& x : a)
      if (x.is_structured()) return false;
    return true;
  };
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, path.empty() ? key : path + "." + key, out);
  } else if (j.is_array() && !scalar_array(j)) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out << path << ": " << j.get<std::string>() << '\n';
  } else {
    out << path << ": " << j.dump() << '\n';
  }
}

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

struct AnalyzeArgs {
  std::string rules, file, pairing;
  bool numeric = false, text = false, json = false, bits = false, timing = false;
  CocycleConfig cfg;
};

inline void cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  if (a.text && a.json) throw error(error_kind::invalid_argument, "--text and --json are exclusive");
  a.cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const Substitution s = parse(read_rules(a.rules, a.file));
  std::map<std::string, double> timing;
  timing["parse"] = elapsed_ms(t0);

  ReportDocument doc;
  doc.units.bits = a.bits;
  doc.input = {{"rules", s.to_rule_string()}, {"numeric", a.numeric || s.size() > 2}};
  if (!a.pairing.empty()) doc.input["pairing"] = a.pairing;
  if (a.numeric || s.size() > 2) doc.input["config"] = to_json(a.cfg);

  const auto t1 = std::chrono::steady_clock::now();
  if (s.size() == 2) {
    if (!a.pairing.empty()) throw error(error_kind::invalid_argument, "--pairing applies to alphabets of more than two letters");
    doc.report = classify(s, a.numeric ? std::optional<CocycleConfig>(a.cfg) : std::nullopt);
  } else {
    std::optional<Pairing> p;
    if (!a.pairing.empty()) p = parse_pairing(s, a.pairing);
    doc.report = classify_nary(s, p, a.cfg);
  }
  timing["classify"] = elapsed_ms(t1);
  if (a.timing) doc.timing_ms = timing;

  const auto j = to_json(doc);
  if (a.text)
    flatten(j, "", out);
  else
    out << j.dump(2) << '\n';
}

struct MahlerArgs {
  std::vector<std::int64_t> coeffs;
  std::size_t nodes = std::size_t{1} << 16;
  bool bits = false;
};

inline void cmd_mahler(const MahlerArgs& a, std::ostream& out) {
  const IntPolynomial f(a.coeffs);
  const auto roots = mahler_roots(f);
  const auto quad = mahler_quadrature(f, a.nodes);
  const auto norms = norm_bounds(f);
  Units u;
  u.bits = a.bits;
  ordered_json j;
  j["schema_version"] = schema_version;
  j["units"] = u.name();
  j["coefficients"] = f.coefficients();
  j["polynomial"] = f.to_string("u");
  j["value"] = detail::log_value(roots.is_zero_certified ? 0.0 : roots.value, u);
  j["roots_value"] = detail::log_value(roots.value, u);
  j["quadrature_value"] = detail::log_value(quad.value, u);
  j["nodes"] = a.nodes;
  j["kronecker"] = roots.is_zero_certified;
  j["roots"] = roots_to_json(roots.roots);
  j["l1"] = round_sig(norms.l1);
  j["l2"] = round_sig(norms.l2);
  out << j.dump(2) << '\n';
}

struct ScanArgs {
  std::size_t length = 0;
  std::string format = "csv";
  bool bits = false;
};

inline std::string join_coeffs(const IntPolynomial& f) {
  std::string s;
  for (std::size_t i = 0; i < f.coefficients().size(); ++i) s += (i ? " " : "") + std::to_string(f.coefficients()[i]);
  return s;
}

inline void cmd_scan(const ScanArgs& a, std::ostream& out) {
  if (a.format != "csv" && a.format != "jsonl") throw error(error_kind::invalid_argument, "--format must be csv or jsonl");
  const ScanResult res = scan(a.length);
  Units u;
  u.bits = a.bits;
  auto num = [&](double x) { return format_number(round_sig(x * u.scale())); };
  if (a.format == "csv") {
    out << "rules,card_ca,card_cb,card_pa,card_pb,q_minus_r,mahler,kronecker,chi_min,chi_max,verdict,annotation\n";
    for (const auto& r : res.rows)
      out << '"' << r.rules << "\"," << r.card_ca << ',' << r.card_cb << ',' << r.card_pa << ',' << r.card_pb << ','
          << join_coeffs(r.q_minus_r) << ',' << num(r.mahler) << ',' << (r.kronecker ? "true" : "false") << ','
          << num(r.chi_min) << ',' << num(r.chi_max) << ',' << to_string(r.verdict) << ',' << to_string(r.annotation)
          << '\n';
    out << "\"summary\",,,,,,,," << num(res.min_chi_min) << ",,"
        << (res.all_positive ? "AllPositive" : "NotAllPositive") << ",rows=" << res.rows.size()
        << ";admissible=" << res.admissible << '\n';
  } else {
    for (const auto& r : res.rows) {
      ordered_json j{{"rules", r.rules},
                     {"card_ca", r.card_ca},
                     {"card_cb", r.card_cb},
                     {"card_pa", r.card_pa},
                     {"card_pb", r.card_pb},
                     {"q_minus_r", r.q_minus_r.coefficients()},
                     {"mahler", detail::log_value(r.mahler, u)},
                     {"kronecker", r.kronecker},
                     {"chi_min", detail::log_value(r.chi_min, u)},
                     {"chi_max", detail::log_value(r.chi_max, u)},
                     {"verdict", to_string(r.verdict)},
                     {"annotation", to_string(r.annotation)}};
      out << j.dump() << '\n';
    }
    ordered_json summary{{"summary", true},
                         {"length", res.length},
                         {"enumerated", res.enumerated},
                         {"admissible", res.admissible},
                         {"rows", res.rows.size()},
                         {"min_chi_min", detail::log_value(res.min_chi_min, u)},
                         {"all_positive", res.all_positive},
                         {"all_jensen_bounds", res.all_jensen_bounds}};
    out << summary.dump() << '\n';
  }
}

struct TraceArgs {
  std::string rules, file, k;
  std::size_t iters = 0;
  std::uint64_t seed = 1;
  bool bits = false;
};

inline void cmd_trace(const TraceArgs& a, std::ostream& out) {
  const Substitution s = parse(read_rules(a.rules, a.file));
  require_binary(s);
  if (classify_columns(s) == ColumnClass::degenerate)
    throw error(error_kind::degenerate_substitution, "both images coincide; Q - R vanishes");
  std::optional<double> k0;
  if (a.k != "random") {
    std::size_t used = 0;
    try {
      k0 = std::stod(a.k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != a.k.size() || !std::isfinite(*k0))
      throw error(error_kind::invalid_argument, "--k must be a real number or 'random'");
  }
  const auto rows = cocycle_trace(fourier_matrix(s), s.length(), k0, a.iters, a.seed);
  const double scale = a.bits ? 1.0 / std::log(2.0) : 1.0;
  auto num = [&](double x) { return format_number(round_sig(x * scale)); };
  out << "n,birkhoff_logdet,chi_min,chi_max\n";
  for (const auto& r : rows)
    out << r.n << ',' << num(r.birkhoff_log_det) << ',' << num(r.chi_min) << ',' << num(r.chi_max) << '\n';
}

inline std::vector<std::int64_t> parse_coeffs(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = std::string(trim(item));
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (t.empty() || used != t.size()) throw error(error_kind::syntax, "bad coefficient '" + t + "'");
    out.push_back(v);
  }
  if (out.empty()) throw error(error_kind::syntax, "no coefficients given");
  return out;
}

}  // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lyapunov exponents and diffraction spectra of constant-length substitutions", "sublyap"};
  app.require_subcommand(1);

  detail::AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "classify a substitution");
  analyze->add_option("rules", an.rules, "rules such as \"a->ab;b->ba\"");
  analyze->add_option("--file", an.file, "read rules (JSON form) from a file");
  analyze->add_flag("--numeric", an.numeric, "also estimate the exponents numerically");
  analyze->add_option("--iters", an.cfg.iters, "cocycle iterations per orbit");
  analyze->add_option("--samples", an.cfg.samples, "number of orbits");
  analyze->add_option("--seed", an.cfg.seed, "random seed");
  analyze->add_option("--burn-in", an.cfg.burn_in, "iterations discarded per orbit");
  analyze->add_option("--pairing", an.pairing, "letter pairing such as a:A,b:B");
  analyze->add_flag("--json", an.json, "JSON output (default)");
  analyze->add_flag("--text", an.text, "flat text output");
  analyze->add_flag("--bits", an.bits, "logarithms in base 2");
  analyze->add_flag("--timing", an.timing, "add per-phase timings");

  detail::MahlerArgs ma;
  std::string coeffs;
  auto* mahler = app.add_subcommand("mahler", "logarithmic Mahler measure of an integer polynomial");
  mahler->add_option("--coeffs", coeffs, "coefficients, constant term first")->required()->allow_extra_args(false);
  mahler->add_option("--nodes", ma.nodes, "quadrature grid size");
  mahler->add_flag("--bits", ma.bits, "logarithms in base 2");

  detail::ScanArgs sa;
  auto* scan_cmd = app.add_subcommand("scan", "all primitive binary substitutions of one length");
  scan_cmd->add_option("--length", sa.length, "substitution length")->required();
  scan_cmd->add_option("--format", sa.format, "csv or jsonl");
  scan_cmd->add_flag("--bits", sa.bits, "logarithms in base 2");

  detail::TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "running exponent estimates along one orbit");
  trace->add_option("rules", ta.rules, "rules such as \"a->ab;b->ba\"");
  trace->add_option("--file", ta.file, "read rules (JSON form) from a file");
  trace->add_option("--k", ta.k, "starting point or 'random'")->required();
  trace->add_option("--iters", ta.iters, "number of steps")->required();
  trace->add_option("--seed", ta.seed, "random seed");
  trace->add_flag("--bits", ta.bits, "logarithms in base 2");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  std::ostringstream buffer;
  try {
    if (*analyze) {
      detail::cmd_analyze(an, buffer);
    } else if (*mahler) {
      ma.coeffs = detail::parse_coeffs(coeffs);
      detail::cmd_mahler(ma, buffer);
    } else if (*scan_cmd) {
      detail::cmd_scan(sa, buffer);
    } else if (*trace) {
      detail::cmd_trace(ta, buffer);
    }
  } catch (const error& e) {
    err << "sublyap: " << e.what() << '\n';
    return e.kind() == error_kind::resample_exhausted ? exit_numeric : exit_input;
  } catch (const std::exception& e) {
    err << "sublyap: internal error: " << e.what() << '\n';
    return exit_numeric;
  }
  out << buffer.str();
  out.flush();
  return exit_ok;
}

}  // namespace sublyap
