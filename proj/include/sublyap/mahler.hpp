#pragma once

// Column-partition polynomials and the logarithmic Mahler measure
//   m(f) = int_0^1 log|f(exp(2 pi i k))| dk
// computed two independent ways: from the roots (Jensen) and by quadrature.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "error.hpp"
#include "int_polynomial.hpp"
#include "substitution.hpp"

namespace sublyap {

struct PartitionPolynomials {
  IntPolynomial p1;  // coincidences on the first letter
  IntPolynomial p2;  // coincidences on the second letter
  IntPolynomial q;   // identity columns
  IntPolynomial r;   // swap columns

  IntPolynomial q_minus_r() const { return q - r; }
};

inline PartitionPolynomials partition_polynomials(const ColumnPartition& cp) {
  return {IntPolynomial::indicator(cp.coincident_a), IntPolynomial::indicator(cp.coincident_b),
          IntPolynomial::indicator(cp.bijective_id), IntPolynomial::indicator(cp.bijective_swap)};
}

enum class MahlerMethod { roots, quadrature };

constexpr std::string_view to_string(MahlerMethod m) noexcept {
  return m == MahlerMethod::roots ? "Roots" : "Quadrature";
}

struct MahlerResult {
  double value = 0.0;  // nats
  std::vector<std::complex<double>> roots;
  MahlerMethod method = MahlerMethod::roots;
  bool is_zero_certified = false;
};

/// True iff f = +-u^j * (product of cyclotomic polynomials), decided exactly
/// by repeated division by cyclotomic polynomials of admissible degree.
inline bool kronecker_certify(const IntPolynomial& f) {
  if (f.is_zero()) throw error(error_kind::zero_polynomial, "kronecker_certify of 0");
  IntPolynomial g = f.strip_monomial();
  if (g.degree() == 0) return g.leading() == 1 || g.leading() == -1;
  if (std::abs(g.leading()) != 1 || std::abs(g[0]) != 1) return false;
  // phi(n) >= sqrt(n/2), so phi(n) <= deg forces n <= 2 deg^2.
  const auto deg = static_cast<std::size_t>(g.degree());
  const std::size_t bound = 2 * deg * deg + 2;
  for (std::size_t n = 1; n <= bound && g.degree() > 0; ++n) {
    const IntPolynomial phi = cyclotomic(n);
    if (phi.degree() > g.degree()) continue;
    while (g.degree() >= phi.degree()) {
      auto q = g.divide_exact(phi);
      if (!q) break;
      g = *q;
    }
  }
  return g.degree() == 0 && (g.leading() == 1 || g.leading() == -1);
}

namespace detail {

// Roots of a monic (over Q) square-free factor via companion-matrix
// eigenvalues, each polished by one Newton step.
inline std::vector<std::complex<double>> companion_roots(const std::vector<double>& monic_coeffs) {
  const auto n = static_cast<Eigen::Index>(monic_coeffs.size()) - 1;
  std::vector<std::complex<double>> roots;
  if (n <= 0) return roots;
  const double lc = monic_coeffs.back();
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -monic_coeffs[static_cast<std::size_t>(i)] / lc;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    std::complex<double> p{0}, dp{0};
    for (auto it = monic_coeffs.rbegin(); it != monic_coeffs.rend(); ++it) {
      dp = dp * z + p;
      p = p * z + *it;
    }
    if (std::abs(dp) > 0.0) {
      const std::complex<double> step = p / dp;
      if (std::isfinite(step.real()) && std::isfinite(step.imag()) && std::abs(step) < 1e-3 * (1.0 + std::abs(z)))
        z -= step;
    }
    roots.push_back(z);
  }
  return roots;
}

}  // namespace detail

/// m(f) = log|a_n| + sum_i log max(1, |xi_i|), roots with multiplicity.
inline MahlerResult mahler_roots(const IntPolynomial& f) {
  if (f.is_zero()) throw error(error_kind::zero_polynomial, "Mahler measure of the zero polynomial");
  const IntPolynomial g = f.strip_monomial();
  MahlerResult res;
  res.method = MahlerMethod::roots;
  res.value = std::log(std::abs(static_cast<double>(g.leading())));
  for (const auto& [mult, factor] : squarefree_factors(g)) {
    for (const auto& z : detail::companion_roots(factor)) {
      for (std::size_t k = 0; k < mult; ++k) res.roots.push_back(z);
      res.value += static_cast<double>(mult) * std::log(std::max(1.0, std::abs(z)));
    }
  }
  for (std::size_t k = 0; k < f.low_order(); ++k) res.roots.emplace_back(0.0, 0.0);
  res.is_zero_certified = kronecker_certify(f);
  return res;
}

/// Quadrature of log|f(exp(2 pi i k))| over [0, 1). A uniform grid of
/// `nodes` points brackets the local minima of |f| on the circle; each
/// minimum is refined to a critical point of |f|^2 and used as a breakpoint,
/// and every sub-interval is integrated by tanh-sinh, which absorbs the
/// integrable log singularities sitting at zeros on the circle.
inline MahlerResult mahler_quadrature(const IntPolynomial& f, std::size_t nodes = std::size_t{1} << 16) {
  if (f.is_zero()) throw error(error_kind::zero_polynomial, "Mahler measure of the zero polynomial");
  if (nodes < (std::size_t{1} << 10)) throw error(error_kind::invalid_argument, "quadrature needs at least 2^10 nodes");
  MahlerResult res;
  res.method = MahlerMethod::quadrature;
  res.is_zero_certified = kronecker_certify(f);
  const IntPolynomial g = f.strip_monomial();  // |u| = 1 on the circle
  if (g.degree() == 0) {
    res.value = std::log(std::abs(static_cast<double>(g.leading())));
    return res;
  }

  const IntPolynomial dg = g.derivative();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto modulus2 = [&](double k) { return std::norm(g.on_circle(k)); };
  // d/dk |g(e^{2 pi i k})|^2 = 2 Re(conj(g) * g' * 2 pi i u)
  auto slope = [&](double k) {
    const double t = two_pi * k;
    const std::complex<double> u(std::cos(t), std::sin(t));
    return 2.0 * std::real(std::conj(g(u)) * dg(u) * std::complex<double>(0.0, two_pi) * u);
  };

  std::vector<double> grid(nodes);
  for (std::size_t j = 0; j < nodes; ++j) grid[j] = modulus2(static_cast<double>(j) / static_cast<double>(nodes));

  std::vector<double> breaks;
  const double h = 1.0 / static_cast<double>(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double prev = grid[(j + nodes - 1) % nodes], cur = grid[j], next = grid[(j + 1) % nodes];
    if (!(cur < prev && cur <= next)) continue;
    const double k0 = static_cast<double>(j) * h;
    double lo = k0 - h, hi = k0 + h;
    double at_lo = slope(lo), at_hi = slope(hi);
    double kmin = k0;
    if (cur == 0.0) {
      kmin = k0;
    } else if (at_lo < 0.0 && at_hi > 0.0) {
      std::uintmax_t iters = 200;
      auto tol = boost::math::tools::eps_tolerance<double>(52);
      auto [a, b] = boost::math::tools::toms748_solve(slope, lo, hi, at_lo, at_hi, tol, iters);
      kmin = 0.5 * (a + b);
    }
    kmin -= std::floor(kmin);
    breaks.push_back(kmin);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.empty()) breaks.push_back(0.0);

  boost::math::quadrature::tanh_sinh<double> integrator;
  // Near a zero on the circle the double evaluation cancels; redo it with
  // 50 significant digits so multiple roots keep their log profile.
  using wide = boost::multiprecision::cpp_bin_float_50;
  const wide wide_two_pi = boost::math::constants::two_pi<wide>();
  auto log_abs = [&](double k) {
    const double m2 = modulus2(k);
    if (m2 > 1e-8) return 0.5 * std::log(m2);
    const wide t = wide_two_pi * wide(k);
    const wide c = cos(t), s = sin(t);
    wide re = 0, im = 0;
    for (auto it = g.coefficients().rbegin(); it != g.coefficients().rend(); ++it) {
      const wide nr = re * c - im * s + wide(*it);
      im = re * s + im * c;
      re = nr;
    }
    const wide w2 = re * re + im * im;
    if (w2 == 0) return 0.5 * std::log(1e-300);
    return static_cast<double>(0.5 * log(w2));
  };
  double total = 0.0;
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = i + 1 < breaks.size() ? breaks[i + 1] : breaks.front() + 1.0;
    if (b <= a) continue;
    total += integrator.integrate(log_abs, a, b, 1e-14);
  }
  res.value = total;
  return res;
}

struct NormBounds {
  double l1 = 0.0;  // sum |a_i|
  double l2 = 0.0;  // sqrt(sum a_i^2), equal to the L2 norm on the circle
};

inline NormBounds norm_bounds(const IntPolynomial& f) {
  return {f.norm1(), std::sqrt(static_cast<double>(f.norm2_squared()))};
}

}  // namespace sublyap
