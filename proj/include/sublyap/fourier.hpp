#pragma once

// Digit matrices, the Fourier matrix B(k) = sum_x exp(2 pi i k x) D_x and the
// algebra the digit matrices generate.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "error.hpp"
#include "int_polynomial.hpp"
#include "substitution.hpp"

namespace sublyap {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// D_0, ..., D_{L-1}; (D_x)(alpha, beta) = 1 iff letter alpha sits at
/// position x of the image of beta.
struct DigitMatrixSet {
  std::vector<IntMatrix> matrices;

  IntMatrix sum() const {
    IntMatrix s = IntMatrix::Zero(matrices.front().rows(), matrices.front().cols());
    for (const auto& m : matrices) s += m;
    return s;
  }
};

inline DigitMatrixSet digit_matrices(const Substitution& s) {
  const auto d = static_cast<Eigen::Index>(s.size());
  DigitMatrixSet set;
  for (std::size_t x = 0; x < s.length(); ++x) {
    IntMatrix m = IntMatrix::Zero(d, d);
    for (std::size_t beta = 0; beta < s.size(); ++beta)
      m(static_cast<Eigen::Index>(s.at(beta, x)), static_cast<Eigen::Index>(beta)) = 1;
    set.matrices.push_back(std::move(m));
  }
  return set;
}

/// Square matrix of integer polynomials in u = exp(2 pi i k).
class TrigMatrix {
 public:
  TrigMatrix() = default;
  explicit TrigMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}
  TrigMatrix(std::initializer_list<std::initializer_list<IntPolynomial>> rows) : dim_(rows.size()) {
    for (const auto& row : rows) {
      if (row.size() != dim_) throw error(error_kind::invalid_argument, "TrigMatrix must be square");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  const IntPolynomial& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }
  IntPolynomial& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }

  /// Entrywise evaluation at u = exp(2 pi i k).
  Eigen::MatrixXcd evaluate(double k) const {
    const double t = 2.0 * std::numbers::pi * k;
    return evaluate_at(std::complex<double>(std::cos(t), std::sin(t)));
  }

  Eigen::MatrixXcd evaluate_at(std::complex<double> u) const {
    const auto n = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXcd m(n, n);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < dim_; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (*this)(r, c)(u);
    return m;
  }

  TrigMatrix scaled(std::int64_t c) const {
    TrigMatrix out = *this;
    for (auto& e : out.entries_) e = e * IntPolynomial{c};
    return out;
  }

  /// Exact determinant by cofactor expansion (dimensions here are small).
  IntPolynomial determinant() const { return det_rec(std::vector<std::size_t>(), 0); }

  friend bool operator==(const TrigMatrix&, const TrigMatrix&) = default;

 private:
  IntPolynomial det_rec(std::vector<std::size_t> used_cols, std::size_t row) const {
    if (row == dim_) return IntPolynomial{1};
    IntPolynomial acc;
    int sign = 1;
    for (std::size_t c = 0; c < dim_; ++c) {
      if (std::find(used_cols.begin(), used_cols.end(), c) != used_cols.end()) continue;
      if (!(*this)(row, c).is_zero()) {
        used_cols.push_back(c);
        auto term = (*this)(row, c) * det_rec(used_cols, row + 1);
        used_cols.pop_back();
        acc = sign > 0 ? acc + term : acc - term;
      }
      sign = -sign;
    }
    return acc;
  }

  std::size_t dim_ = 0;
  std::vector<IntPolynomial> entries_;
};

/// B(k) with B(alpha, beta) = sum of u^x over positions x of alpha in image(beta).
inline TrigMatrix fourier_matrix(const Substitution& s) {
  TrigMatrix b(s.size());
  for (std::size_t beta = 0; beta < s.size(); ++beta)
    for (std::size_t x = 0; x < s.length(); ++x)
      b(s.at(beta, x), beta) += IntPolynomial::monomial(x);
  return b;
}

inline Eigen::MatrixXcd evaluate(const TrigMatrix& b, double k) { return b.evaluate(k); }

/// A(k) = B(k) (x) conj(B(k)), so A((alpha,gamma),(beta,delta)) = B(alpha,beta) conj(B(gamma,delta)).
inline Eigen::MatrixXcd kronecker_lift(const TrigMatrix& b, double k) {
  const Eigen::MatrixXcd m = b.evaluate(k);
  const Eigen::Index d = m.rows();
  Eigen::MatrixXcd a(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a.block(i * d, j * d, d, d) = m(i, j) * m.conjugate();
  return a;
}

enum class IdaType { tm_type, pd_type, full, other };

constexpr std::string_view to_string(IdaType t) noexcept {
  switch (t) {
    case IdaType::tm_type: return "TMtype";
    case IdaType::pd_type: return "PDtype";
    case IdaType::full: return "Full";
    case IdaType::other: return "Other";
  }
  return "";
}

struct IdaDescription {
  std::size_t dimension = 0;
  std::vector<Eigen::MatrixXcd> basis;
  IdaType type = IdaType::other;
};

namespace detail {

inline Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

// Grows an orthonormal basis of the span; returns true when `m` was new.
inline bool extend_span(std::vector<Eigen::VectorXcd>& ortho, const Eigen::MatrixXcd& m, double tol) {
  Eigen::VectorXcd v = vectorize(m);
  const double scale = v.norm();
  if (scale == 0.0) return false;
  v /= scale;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : ortho) v -= q.dot(v) * q;
  const double residual = v.norm();
  if (residual <= tol) return false;
  ortho.push_back(v / residual);
  return true;
}

inline std::size_t singular_rank(const std::vector<Eigen::MatrixXcd>& mats, double tol) {
  if (mats.empty()) return 0;
  Eigen::MatrixXcd stacked(mats.front().size(), static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) {
    Eigen::VectorXcd v = vectorize(mats[i]);
    stacked.col(static_cast<Eigen::Index>(i)) = v / v.norm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
  const auto& sv = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > tol * sv(0) ? 1 : 0;
  return r;
}

}  // namespace detail

/// Dimension of the (non-unital) algebra generated by `generators`, by
/// iterated rank extension of vectorized products until stable.
inline IdaDescription generated_algebra(const std::vector<Eigen::MatrixXcd>& generators, double tol,
                                        std::size_t letters) {
  std::vector<Eigen::VectorXcd> ortho;
  std::vector<Eigen::MatrixXcd> basis;
  for (const auto& g : generators)
    if (detail::extend_span(ortho, g, tol)) basis.push_back(g);

  // Close under multiplication; products of new elements with all others.
  std::size_t processed = 0;
  while (processed < basis.size()) {
    const std::size_t end = basis.size();
    for (std::size_t i = 0; i < end; ++i) {
      for (std::size_t j = (i < processed ? processed : 0); j < end; ++j) {
        for (const auto& prod : {Eigen::MatrixXcd(basis[i] * basis[j]), Eigen::MatrixXcd(basis[j] * basis[i])}) {
          if (detail::extend_span(ortho, prod, tol)) {
            const double n = prod.norm();
            basis.push_back(prod / n);
          }
        }
      }
    }
    processed = end;
  }

  // Rank decision on singular values of the collected basis.
  IdaDescription ida;
  ida.dimension = detail::singular_rank(basis, tol);
  ida.basis = std::move(basis);
  if (letters == 2 && ida.dimension == 2) ida.type = IdaType::tm_type;
  else if (letters == 2 && ida.dimension == 3) ida.type = IdaType::pd_type;
  else if (ida.dimension == letters * letters) ida.type = IdaType::full;
  else ida.type = IdaType::other;
  return ida;
}

/// Inflation displacement algebra: the algebra generated by the digit matrices.
inline IdaDescription ida(const Substitution& s, double tol = 1e-9) {
  std::vector<Eigen::MatrixXcd> gens;
  for (const auto& m : digit_matrices(s).matrices) gens.push_back(m.cast<std::complex<double>>());
  return generated_algebra(gens, tol, s.size());
}

/// Algebra generated by B(k_i) at the given sample points.
inline IdaDescription sampled_fourier_algebra(const Substitution& s, const std::vector<double>& ks,
                                              double tol = 1e-9) {
  const TrigMatrix b = fourier_matrix(s);
  std::vector<Eigen::MatrixXcd> gens;
  for (double k : ks) gens.push_back(b.evaluate(k));
  return generated_algebra(gens, tol, s.size());
}

/// A fixed-point-free involution on the alphabet, given as partner indices.
struct Pairing {
  std::vector<std::size_t> partner;
};

/// Parse "a:A,b:B" against the alphabet of `s`.
inline Pairing parse_pairing(const Substitution& s, std::string_view text) {
  Pairing p;
  p.partner.assign(s.size(), s.size());
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    auto item = detail::trim(text.substr(start, end - start));
    if (item.size() != 3 || item[1] != ':')
      throw error(error_kind::syntax, "pairing entries look like 'a:A', got '" + std::string(item) + "'");
    auto x = s.index_of(item[0]);
    auto y = s.index_of(item[2]);
    if (!x || !y) throw error(error_kind::no_such_symmetry, "pairing mentions a letter outside the alphabet");
    if ((p.partner[*x] != s.size() && p.partner[*x] != *y) || (p.partner[*y] != s.size() && p.partner[*y] != *x))
      throw error(error_kind::no_such_symmetry, "letter paired twice");
    p.partner[*x] = *y;
    p.partner[*y] = *x;
    start = end + 1;
  }
  return p;
}

struct SymmetryBlocks {
  TrigMatrix symmetric;      // C block
  TrigMatrix antisymmetric;  // D block
  std::vector<std::size_t> representatives;
};

/// Checks the pairing is a fixed-point-free involution that commutes with
/// the substitution: image(bar x) = bar(image(x)) letterwise.
inline void validate_pairing(const Substitution& s, const Pairing& p) {
  const std::size_t d = s.size();
  if (d < 4 || d % 2 != 0) throw error(error_kind::no_such_symmetry, "pairings need an even alphabet of at least four letters");
  if (p.partner.size() != d) throw error(error_kind::no_such_symmetry, "pairing does not cover the alphabet");
  for (std::size_t i = 0; i < d; ++i) {
    const auto j = p.partner[i];
    if (j >= d || j == i || p.partner[j] != i)
      throw error(error_kind::no_such_symmetry, "pairing is not a fixed-point-free involution");
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < s.length(); ++x)
      if (s.at(p.partner[i], x) != p.partner[s.at(i, x)])
        throw error(error_kind::no_such_symmetry,
                    std::string("substitution does not commute with the pairing at letter '") + s.letter(i) + "'");
}

/// Block-diagonalises B(k) using the letter-swap symmetry. With pairs
/// (r_j, bar r_j) ordered by the first-listed letter r_j, the antisymmetric
/// block uses t_j = e_{r_j} - e_{bar r_j}; the symmetric block uses
/// c_1 = s_1, c_j = s_1 - s_j (j >= 2) with s_j = e_{r_j} + e_{bar r_j}.
inline SymmetryBlocks symmetry_reduce(const Substitution& s, const Pairing& p) {
  validate_pairing(s, p);
  const TrigMatrix b = fourier_matrix(s);
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i < p.partner[i]) reps.push_back(i);
  const std::size_t h = reps.size();

  // B s_j = sum_i S(i,j) s_i and B t_j = sum_i A(i,j) t_i: read coefficients on row r_i.
  TrigMatrix sym(h), anti(h);
  for (std::size_t j = 0; j < h; ++j) {
    const auto r = reps[j], rb = p.partner[reps[j]];
    for (std::size_t i = 0; i < h; ++i) {
      sym(i, j) = b(reps[i], r) + b(reps[i], rb);
      anti(i, j) = b(reps[i], r) - b(reps[i], rb);
    }
  }

  // Change of basis s -> c on the symmetric block: c = s P, P^{-1} = P.
  //   P = [[1, 1, ..., 1], [0, -1, 0, ...], [0, 0, -1, ...], ...]
  TrigMatrix c_block(h);
  auto pmat = [](std::size_t i, std::size_t j) -> std::int64_t {
    if (i == 0) return 1;
    return i == j ? -1 : 0;
  };
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      IntPolynomial acc;
      for (std::size_t a = 0; a < h; ++a)
        for (std::size_t bb = 0; bb < h; ++bb) {
          const auto coeff = pmat(i, a) * pmat(bb, j);
          if (coeff != 0) acc += sym(a, bb) * IntPolynomial{coeff};
        }
      c_block(i, j) = acc;
    }
  return {c_block, anti, reps};
}

}  // namespace sublyap
