#pragma once

// Lyapunov exponents of the Fourier-matrix cocycle over k -> L k mod 1.
//
// Closed form (binary rules):
//   chi_max = log sqrt(L),  chi_min = log sqrt(L) - m(Q - R).
// Numerically, along an orbit k_m = L^m k mod 1:
//   chi_min = log sqrt(L) - lim 1/n log || B(k_0) B(k_1) ... B(k_{n-1}) ||
//   chi_max = log sqrt(L) + lim 1/n log || B^{-1}(k_{n-1}) ... B^{-1}(k_0) ||
// Products are renormalised by their Frobenius norm every step; the final
// readout uses the spectral norm so unitary products contribute exactly 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "fourier.hpp"
#include "int_polynomial.hpp"
#include "mahler.hpp"
#include "orbit.hpp"
#include "substitution.hpp"

namespace sublyap {

enum class ExponentMethod { closed_form, cocycle, birkhoff, inward_eigen };

constexpr std::string_view to_string(ExponentMethod m) noexcept {
  switch (m) {
    case ExponentMethod::closed_form: return "ClosedForm";
    case ExponentMethod::cocycle: return "Cocycle";
    case ExponentMethod::birkhoff: return "Birkhoff";
    case ExponentMethod::inward_eigen: return "InwardEigen";
  }
  return "";
}

struct ExponentPair {
  double chi_min = 0.0;  // nats
  double chi_max = 0.0;
  ExponentMethod method = ExponentMethod::closed_form;
  double stderr_min = 0.0;  // standard error of the mean across samples
  double stderr_max = 0.0;
  std::size_t samples = 0;
  std::size_t iters = 0;
};

struct CocycleConfig {
  std::size_t iters = 2000;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  double det_floor = 1e-13;
  std::size_t burn_in = 0;
  std::size_t max_retries = 20;

  void validate() const {
    if (iters < 1) throw error(error_kind::invalid_argument, "iters must be >= 1");
    if (samples < 1) throw error(error_kind::invalid_argument, "samples must be >= 1");
    if (!(det_floor > 0.0)) throw error(error_kind::invalid_argument, "det_floor must be > 0");
  }
};

/// Closed-form exponents of a binary rule; m(Q - R) is exactly 0 when the
/// Kronecker structure is certified.
inline ExponentPair closed_form_exponents(const Substitution& s) {
  const auto qr = partition_polynomials(column_partition(s)).q_minus_r();
  if (qr.is_zero())
    throw error(error_kind::degenerate_substitution, "Q - R vanishes identically, det B(k) = 0 for all k");
  const double m = kronecker_certify(qr) ? 0.0 : mahler_roots(qr).value;
  const double half_log_l = 0.5 * std::log(static_cast<double>(s.length()));
  ExponentPair e;
  e.method = ExponentMethod::closed_form;
  e.chi_max = half_log_l;
  e.chi_min = half_log_l - m;
  return e;
}

namespace detail {

inline double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() == 2) {
    // sigma_1^2 = (|A|_F^2 + sqrt(|A|_F^4 - 4 |det A|^2)) / 2
    const double f2 = m.squaredNorm();
    const double det2 = std::norm(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    return std::sqrt(0.5 * (f2 + std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det2))));
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

struct OrbitRun {
  double log_forward = 0.0;  // log || B(k_0) ... B(k_{n-1}) ||
  double log_inverse = 0.0;  // log || B^{-1}(k_{n-1}) ... B^{-1}(k_0) ||
  double log_det = 0.0;      // sum log |det B(k_m)|
};

// One orbit; nullopt when it came within det_floor of a singular point.
inline std::optional<OrbitRun> run_orbit(const TrigMatrix& b, DigitOrbit& orbit, const CocycleConfig& cfg) {
  const auto d = static_cast<Eigen::Index>(b.dim());
  Eigen::MatrixXcd fwd = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd inv = Eigen::MatrixXcd::Identity(d, d);
  OrbitRun run;
  for (std::size_t m = 0; m < cfg.burn_in + cfg.iters; ++m) {
    if (m == cfg.burn_in && m > 0) {
      run = OrbitRun{};
      run.log_forward = -std::log(spectral_norm(fwd));
      run.log_inverse = -std::log(spectral_norm(inv));
    }
    const Eigen::MatrixXcd bm = b.evaluate(orbit.point());
    orbit.advance();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(bm);
    const double det = std::abs(lu.determinant());
    if (!(det >= cfg.det_floor)) return std::nullopt;
    fwd = (fwd * bm).eval();
    inv = (lu.inverse() * inv).eval();
    const double nf = fwd.norm(), ni = inv.norm();
    fwd /= nf;
    inv /= ni;
    run.log_forward += std::log(nf);
    run.log_inverse += std::log(ni);
    run.log_det += std::log(det);
  }
  run.log_forward += std::log(spectral_norm(fwd));
  run.log_inverse += std::log(spectral_norm(inv));
  return run;
}

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

inline std::uint64_t attempt_seed(std::uint64_t seed, std::size_t sample, std::size_t attempt) {
  return stream_seed(seed, static_cast<std::uint64_t>(sample) * 64u + attempt);
}

}  // namespace detail

/// Per-sample results of the numerical cocycle, in sample order.
struct CocycleSamples {
  std::vector<double> chi_min;
  std::vector<double> chi_max;
  std::vector<double> mean_log_det;  // (1/n) sum log |det B(k_m)|
};

inline CocycleSamples cocycle_samples(const TrigMatrix& b, std::size_t L, const CocycleConfig& cfg) {
  cfg.validate();
  if (L < 2) throw error(error_kind::invalid_argument, "L must be >= 2");
  if (b.determinant().is_zero())
    throw error(error_kind::singular_family, "det B(k) vanishes identically");
  const double half_log_l = 0.5 * std::log(static_cast<double>(L));
  const double n = static_cast<double>(cfg.iters);
  std::vector<std::optional<detail::OrbitRun>> runs(cfg.samples);
  detail::parallel_for(cfg.samples, [&](std::size_t i) {
    for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt) {
      DigitOrbit orbit(L, detail::attempt_seed(cfg.seed, i, attempt));
      if (auto r = detail::run_orbit(b, orbit, cfg)) {
        runs[i] = *r;
        return;
      }
    }
  });
  CocycleSamples out;
  for (const auto& r : runs) {
    if (!r) throw error(error_kind::resample_exhausted, "orbit kept hitting |det B| < det_floor");
    out.chi_min.push_back(half_log_l - r->log_forward / n);
    out.chi_max.push_back(half_log_l + r->log_inverse / n);
    out.mean_log_det.push_back(r->log_det / n);
  }
  return out;
}

/// Numerical exponents: mean +- standard error over random starting points.
inline ExponentPair cocycle_exponents(const TrigMatrix& b, std::size_t L, const CocycleConfig& cfg) {
  const auto samples = cocycle_samples(b, L, cfg);
  ExponentPair e;
  e.method = ExponentMethod::cocycle;
  std::tie(e.chi_min, e.stderr_min) = detail::mean_and_stderr(samples.chi_min);
  std::tie(e.chi_max, e.stderr_max) = detail::mean_and_stderr(samples.chi_max);
  e.samples = cfg.samples;
  e.iters = cfg.iters;
  return e;
}

struct BirkhoffEstimate {
  double mean = 0.0;
  double stderr = 0.0;
};

/// Birkhoff averages (1/n) sum_{m<n} log|f(exp(2 pi i L^m k))| over sampled k.
inline BirkhoffEstimate birkhoff_mahler_estimate(const IntPolynomial& f, std::size_t L, const CocycleConfig& cfg) {
  cfg.validate();
  if (f.is_zero()) throw error(error_kind::zero_polynomial, "Birkhoff average of log|0|");
  if (L < 2) throw error(error_kind::invalid_argument, "L must be >= 2");
  std::vector<std::optional<double>> avg(cfg.samples);
  detail::parallel_for(cfg.samples, [&](std::size_t i) {
    for (std::size_t attempt = 0; attempt <= cfg.max_retries; ++attempt) {
      DigitOrbit orbit(L, detail::attempt_seed(cfg.seed, i, attempt));
      double sum = 0.0;
      bool ok = true;
      for (std::size_t m = 0; m < cfg.iters && ok; ++m) {
        const double v = std::abs(f.on_circle(orbit.point()));
        orbit.advance();
        ok = v >= cfg.det_floor;
        sum += std::log(v);
      }
      if (ok) {
        avg[i] = sum / static_cast<double>(cfg.iters);
        return;
      }
    }
  });
  std::vector<double> xs;
  for (const auto& a : avg) {
    if (!a) throw error(error_kind::resample_exhausted, "orbit kept hitting |f| < det_floor");
    xs.push_back(*a);
  }
  auto [mean, se] = detail::mean_and_stderr(xs);
  return {mean, se};
}

inline double birkhoff_mahler(const IntPolynomial& f, std::size_t L, const CocycleConfig& cfg) {
  return birkhoff_mahler_estimate(f, L, cfg).mean;
}

/// log|lambda_i| - log sqrt(L) over the eigenvalues of the substitution
/// matrix, sorted descending; zero eigenvalues give -infinity.
inline std::vector<double> inward_exponents(const Substitution& s) {
  const auto m = s.matrix();
  const auto d = static_cast<Eigen::Index>(s.size());
  Eigen::MatrixXd mat(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) mat(i, j) = static_cast<double>(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  Eigen::EigenSolver<Eigen::MatrixXd> es(mat, false);
  const double half_log_l = 0.5 * std::log(static_cast<double>(s.length()));
  const double zero_tol = 1e-9 * static_cast<double>(s.length());
  std::vector<double> out;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double mod = std::abs(es.eigenvalues()(i));
    out.push_back(mod <= zero_tol ? -std::numeric_limits<double>::infinity() : std::log(mod) - half_log_l);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// B(k) (1, -1)^T == (Q - R)(u) (1, -1)^T to 1e-12.
inline bool invariant_subspace_check(const TrigMatrix& b, const IntPolynomial& q_minus_r, double k) {
  if (b.dim() != 2) throw error(error_kind::not_binary, "invariant subspace check needs a 2x2 matrix");
  const Eigen::MatrixXcd m = b.evaluate(k);
  Eigen::VectorXcd v(2);
  v << 1.0, -1.0;
  const Eigen::VectorXcd lhs = m * v;
  const Eigen::VectorXcd rhs = q_minus_r.on_circle(k) * v;
  return (lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12;
}

struct TraceRow {
  std::size_t n = 0;
  double birkhoff_log_det = 0.0;
  double chi_min = 0.0;
  double chi_max = 0.0;
};

/// Running estimates along a single orbit; `k0` absent means a random start.
inline std::vector<TraceRow> cocycle_trace(const TrigMatrix& b, std::size_t L, std::optional<double> k0,
                                           std::size_t iters, std::uint64_t seed, double det_floor = 1e-13,
                                           std::size_t max_retries = 20) {
  if (iters < 1) throw error(error_kind::invalid_argument, "iters must be >= 1");
  if (b.determinant().is_zero()) throw error(error_kind::singular_family, "det B(k) vanishes identically");
  const double half_log_l = 0.5 * std::log(static_cast<double>(L));
  const auto d = static_cast<Eigen::Index>(b.dim());
  for (std::size_t attempt = 0; attempt <= max_retries; ++attempt) {
    const auto s = detail::attempt_seed(seed, 0, attempt);
    DigitOrbit orbit = k0 ? DigitOrbit(L, s, *k0) : DigitOrbit(L, s);
    Eigen::MatrixXcd fwd = Eigen::MatrixXcd::Identity(d, d), inv = fwd;
    double lf = 0.0, li = 0.0, ld = 0.0;
    std::vector<TraceRow> rows;
    rows.reserve(iters);
    bool ok = true;
    for (std::size_t m = 1; m <= iters && ok; ++m) {
      const Eigen::MatrixXcd bm = b.evaluate(orbit.point());
      orbit.advance();
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(bm);
      const double det = std::abs(lu.determinant());
      if (!(det >= det_floor)) {
        ok = false;
        break;
      }
      fwd = (fwd * bm).eval();
      inv = (lu.inverse() * inv).eval();
      const double nf = fwd.norm(), ni = inv.norm();
      fwd /= nf;
      inv /= ni;
      lf += std::log(nf);
      li += std::log(ni);
      ld += std::log(det);
      const double nn = static_cast<double>(m);
      rows.push_back({m, ld / nn, half_log_l - (lf + std::log(detail::spectral_norm(fwd))) / nn,
                      half_log_l + (li + std::log(detail::spectral_norm(inv))) / nn});
    }
    if (ok) return rows;
  }
  throw error(error_kind::resample_exhausted, "orbit kept hitting |det B| < det_floor");
}

}  // namespace sublyap
