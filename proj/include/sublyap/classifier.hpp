#pragma once

// Spectral verdicts: combines the column structure, the inflation
// displacement algebra, the Mahler measure of Q - R and the exponents.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "fourier.hpp"
#include "int_polynomial.hpp"
#include "lyapunov.hpp"
#include "mahler.hpp"
#include "orbit.hpp"
#include "substitution.hpp"

namespace sublyap {

enum class Verdict {
  no_ac_component,
  pure_point_by_coincidence,
  singular_continuous_bijective,
  periodic_degenerate,
  inconclusive,
};

constexpr std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::no_ac_component: return "NoACComponent";
    case Verdict::pure_point_by_coincidence: return "PurePointByCoincidence";
    case Verdict::singular_continuous_bijective: return "SingularContinuousBijective";
    case Verdict::periodic_degenerate: return "PeriodicDegenerate";
    case Verdict::inconclusive: return "Inconclusive";
  }
  return "";
}

struct MahlerSummary {
  double value = 0.0;  // reported m(Q - R): exactly 0 when certified
  double roots_value = 0.0;
  std::optional<double> quadrature_value;
  bool kronecker = false;
  std::vector<std::complex<double>> roots;
  double l1 = 0.0;
  double l2 = 0.0;
};

struct BlockReport {
  std::string name;
  TrigMatrix matrix;
  IntPolynomial determinant;
  bool invertible = false;
  std::optional<ExponentPair> exponents;
  double unitarity_residual = 0.0;  // max_k || (1/L) X X^* - I ||_F
};

struct SpectralReport {
  std::string alphabet;
  std::vector<std::string> images;
  std::size_t length = 0;
  bool primitive = false;
  std::optional<ColumnClass> column_class;
  std::optional<ColumnPartition> partition;
  std::size_t ida_dimension = 0;
  IdaType ida_type = IdaType::other;
  std::optional<IntPolynomial> q_minus_r;
  std::optional<MahlerSummary> mahler;
  std::optional<ExponentPair> exponents_closed;
  std::optional<ExponentPair> exponents_numeric;
  std::vector<double> inward_exponents;
  std::vector<BlockReport> blocks;
  Verdict verdict = Verdict::inconclusive;
  std::optional<Verdict> annotation;
  std::vector<std::string> caveats;
  std::optional<CocycleConfig> config;
};

namespace detail {

inline void fill_common(SpectralReport& r, const Substitution& s) {
  r.alphabet = s.alphabet();
  r.images = s.images();
  r.length = s.length();
  r.primitive = is_primitive(s);
  const auto algebra = ida(s);
  r.ida_dimension = algebra.dimension;
  r.ida_type = algebra.type;
  r.inward_exponents = inward_exponents(s);
}

inline void periodicity_warning(SpectralReport& r, const Substitution& s) {
  if (auto p = apparent_period(s))
    r.caveats.push_back("warning: fixed-point prefix of length 4096 looks periodic with period " +
                        std::to_string(*p) + " (heuristic, not a certificate)");
}

inline bool agrees(double numeric, double closed, double se) { return std::abs(numeric - closed) <= 3.0 * se; }

}  // namespace detail

/// Verdict for a primitive binary rule; `numeric` attaches cocycle estimates.
inline SpectralReport classify(const Substitution& s, const std::optional<CocycleConfig>& numeric = std::nullopt,
                               std::size_t quadrature_nodes = std::size_t{1} << 16) {
  require_binary(s);
  if (!is_primitive(s)) throw error(error_kind::not_primitive, "substitution is not primitive");
  SpectralReport r;
  detail::fill_common(r, s);
  r.column_class = classify_columns(s);
  r.partition = column_partition(s);
  const auto polys = partition_polynomials(*r.partition);
  r.q_minus_r = polys.q_minus_r();
  r.config = numeric;

  if (*r.column_class == ColumnClass::degenerate) {
    r.verdict = Verdict::periodic_degenerate;
    r.caveats.emplace_back("method inapplicable, det B = 0 identically (both images coincide; the hull is periodic)");
    return r;
  }

  MahlerSummary ms;
  const auto by_roots = mahler_roots(*r.q_minus_r);
  ms.roots_value = by_roots.value;
  ms.roots = by_roots.roots;
  ms.kronecker = by_roots.is_zero_certified;
  ms.value = ms.kronecker ? 0.0 : by_roots.value;
  ms.quadrature_value = mahler_quadrature(*r.q_minus_r, quadrature_nodes).value;
  const auto nb = norm_bounds(*r.q_minus_r);
  ms.l1 = nb.l1;
  ms.l2 = nb.l2;
  r.mahler = ms;

  r.exponents_closed = closed_form_exponents(s);
  r.verdict = r.exponents_closed->chi_min > 0.0 ? Verdict::no_ac_component : Verdict::inconclusive;
  r.caveats.emplace_back("aperiodicity is assumed, not verified");
  detail::periodicity_warning(r, s);

  if (*r.column_class == ColumnClass::has_coincidence) {
    r.annotation = Verdict::pure_point_by_coincidence;
    r.caveats.emplace_back("pure point by coincidence assumes height 1; height not computed");
  } else {
    r.annotation = Verdict::singular_continuous_bijective;
    r.caveats.emplace_back("singular continuous spectrum expected for binary bijective rules (literature result, not derived here)");
  }

  if (numeric) {
    r.exponents_numeric = cocycle_exponents(fourier_matrix(s), s.length(), *numeric);
    const auto& c = *r.exponents_closed;
    const auto& n = *r.exponents_numeric;
    if (!detail::agrees(n.chi_min, c.chi_min, n.stderr_min) || !detail::agrees(n.chi_max, c.chi_max, n.stderr_max)) {
      r.verdict = Verdict::inconclusive;
      r.caveats.emplace_back("numeric and closed-form exponents disagree beyond 3 standard errors");
    }
  }
  return r;
}

/// Exponent resolution below which a numerical exponent counts as zero.
inline constexpr double numeric_zero_tolerance = 1e-8;

/// Numerical analysis for alphabets with more than two letters, optionally
/// reduced by a letter-swap symmetry first.
inline SpectralReport classify_nary(const Substitution& s, const std::optional<Pairing>& pairing, const CocycleConfig& cfg) {
  if (s.size() <= 2) throw error(error_kind::invalid_argument, "classify_nary expects more than two letters");
  if (!is_primitive(s)) throw error(error_kind::not_primitive, "substitution is not primitive");
  SpectralReport r;
  detail::fill_common(r, s);
  r.config = cfg;

  if (pairing) {
    auto blocks = symmetry_reduce(s, *pairing);
    r.blocks.push_back({"C", blocks.symmetric, {}, false, std::nullopt, 0.0});
    r.blocks.push_back({"D", blocks.antisymmetric, {}, false, std::nullopt, 0.0});
  } else {
    r.blocks.push_back({"B", fourier_matrix(s), {}, false, std::nullopt, 0.0});
  }

  std::mt19937_64 gen(stream_seed(cfg.seed, 0x756e6974ULL));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> ks(100);
  for (auto& k : ks) k = unif(gen);

  const double L = static_cast<double>(s.length());
  bool any_invertible = false, all_positive = true;
  for (auto& blk : r.blocks) {
    blk.determinant = blk.matrix.determinant();
    blk.invertible = !blk.determinant.is_zero();
    const auto dim = static_cast<Eigen::Index>(blk.matrix.dim());
    for (double k : ks) {
      const Eigen::MatrixXcd x = blk.matrix.evaluate(k);
      const double res = ((x * x.adjoint()) / L - Eigen::MatrixXcd::Identity(dim, dim)).norm();
      blk.unitarity_residual = std::max(blk.unitarity_residual, res);
    }
    if (!blk.invertible) {
      r.caveats.push_back("block " + blk.name + ": det vanishes identically, not a.e. invertible; skipped");
      continue;
    }
    any_invertible = true;
    blk.exponents = cocycle_exponents(blk.matrix, s.length(), cfg);
    all_positive = all_positive && blk.exponents->chi_min - 3.0 * blk.exponents->stderr_min > numeric_zero_tolerance;
    if (blk.unitarity_residual < 1e-12)
      r.caveats.push_back("block " + blk.name + " divided by sqrt(L) is unitary: both exponents vanish");
  }
  if (!any_invertible) throw error(error_kind::singular_family, "no a.e.-invertible block");
  r.verdict = all_positive ? Verdict::no_ac_component : Verdict::inconclusive;
  r.caveats.emplace_back("no closed form for more than two letters; verdict rests on numerical exponents only");
  return r;
}

struct ScanRow {
  std::string rules;
  std::size_t card_ca = 0, card_cb = 0, card_pa = 0, card_pb = 0;
  IntPolynomial q_minus_r;
  double mahler = 0.0;
  bool kronecker = false;
  double chi_min = 0.0;
  double chi_max = 0.0;
  Verdict verdict = Verdict::inconclusive;
  Verdict annotation = Verdict::inconclusive;
  bool jensen_bound = true;  // m(Q-R) < log sqrt(L - |C_a u C_b|) when Q-R is not a monomial
};

struct ScanResult {
  std::size_t length = 0;
  std::size_t enumerated = 0;  // all 4^L pairs
  std::size_t admissible = 0;  // primitive, non-degenerate (both swap representatives)
  std::vector<ScanRow> rows;   // canonical representatives only
  double min_chi_min = std::numeric_limits<double>::infinity();
  bool all_positive = true;
  bool all_jensen_bounds = true;
};

namespace detail {

inline std::string binary_word(std::size_t bits, std::size_t L, bool swapped = false) {
  std::string w(L, 'a');
  for (std::size_t i = 0; i < L; ++i) {
    const bool b = (bits >> (L - 1 - i)) & 1u;
    w[i] = (b != swapped) ? 'b' : 'a';
  }
  return w;
}

inline ScanRow scan_row(const Substitution& s, std::map<std::vector<std::int64_t>, MahlerResult>& cache) {
  const auto cp = column_partition(s);
  ScanRow row;
  row.rules = s.to_rule_string();
  row.card_ca = cp.coincident_a.size();
  row.card_cb = cp.coincident_b.size();
  row.card_pa = cp.bijective_id.size();
  row.card_pb = cp.bijective_swap.size();
  row.q_minus_r = partition_polynomials(cp).q_minus_r();
  auto it = cache.find(row.q_minus_r.coefficients());
  if (it == cache.end()) it = cache.emplace(row.q_minus_r.coefficients(), mahler_roots(row.q_minus_r)).first;
  row.kronecker = it->second.is_zero_certified;
  row.mahler = row.kronecker ? 0.0 : it->second.value;
  const auto e = closed_form_exponents(s);
  row.chi_min = e.chi_min;
  row.chi_max = e.chi_max;
  row.verdict = e.chi_min > 0.0 ? Verdict::no_ac_component : Verdict::inconclusive;
  row.annotation = cp.coincidences() > 0 ? Verdict::pure_point_by_coincidence : Verdict::singular_continuous_bijective;
  if (!row.q_minus_r.is_monomial())
    row.jensen_bound = it->second.value < 0.5 * std::log(static_cast<double>(s.length() - cp.coincidences()));
  else
    row.jensen_bound = row.mahler == 0.0 && cp.coincidences() == s.length() - 1;
  return row;
}

}  // namespace detail

/// Every primitive, non-degenerate binary rule of length L, closed form only.
inline ScanResult scan(std::size_t L) {
  if (L < 2 || L > 6) throw error(error_kind::invalid_argument, "scan length must be in [2, 6]");
  ScanResult out;
  out.length = L;
  std::map<std::vector<std::int64_t>, MahlerResult> cache;
  const std::size_t words = std::size_t{1} << L;
  for (std::size_t ia = 0; ia < words; ++ia) {
    for (std::size_t ib = 0; ib < words; ++ib) {
      ++out.enumerated;
      const std::string wa = detail::binary_word(ia, L), wb = detail::binary_word(ib, L);
      if (wa == wb) continue;
      const Substitution s("ab", {wa, wb});
      if (!is_primitive(s)) continue;
      ++out.admissible;
      // Global letter swap a <-> b yields (swap(wb), swap(wa)).
      const std::string pa = detail::binary_word(ib, L, true), pb = detail::binary_word(ia, L, true);
      const bool canonical = std::pair{wa, wb} <= std::pair{pa, pb};
      auto row = detail::scan_row(s, cache);
      out.all_positive = out.all_positive && row.chi_min > 0.0;
      out.all_jensen_bounds = out.all_jensen_bounds && row.jensen_bound;
      out.min_chi_min = std::min(out.min_chi_min, row.chi_min);
      if (canonical) {
        const auto partner = detail::scan_row(Substitution("ab", {pa, pb}), cache);
        if (partner.chi_min != row.chi_min || partner.chi_max != row.chi_max)
          throw std::logic_error("letter-swap partners disagree: " + row.rules + " vs " + partner.rules);
        out.rows.push_back(std::move(row));
      }
    }
  }
  return out;
}

}  // namespace sublyap
