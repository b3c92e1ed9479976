#pragma once

// Constant-length substitution rules: parsing, primitivity, column
// structure, fixed-point prefixes and empirical pair correlations.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace sublyap {

/// A substitution on a finite alphabet of single-character letters where
/// every letter maps to a word of the same length L >= 2.
class Substitution {
 public:
  Substitution(std::string alphabet, std::vector<std::string> images)
      : alphabet_(std::move(alphabet)), images_(std::move(images)) {
    validate();
  }

  std::size_t size() const noexcept { return alphabet_.size(); }
  std::size_t length() const noexcept { return length_; }
  const std::string& alphabet() const noexcept { return alphabet_; }
  const std::vector<std::string>& images() const noexcept { return images_; }
  const std::string& image(std::size_t letter) const { return images_.at(letter); }
  char letter(std::size_t i) const { return alphabet_.at(i); }

  /// Index of `c` in the alphabet, or nullopt.
  std::optional<std::size_t> index_of(char c) const noexcept {
    auto pos = alphabet_.find(c);
    if (pos == std::string::npos) return std::nullopt;
    return pos;
  }

  /// Letter index at position `x` of the image of letter `beta`.
  std::size_t at(std::size_t beta, std::size_t x) const { return letter_index_[beta][x]; }

  /// Apply the substitution once to a word over the alphabet.
  std::string apply(std::string_view word) const {
    std::string out;
    out.reserve(word.size() * length_);
    for (char c : word) out += images_[*index_of(c)];
    return out;
  }

  /// "a->ab;b->ba"
  std::string to_rule_string() const {
    std::string out;
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) out += ';';
      out += alphabet_[i];
      out += "->";
      out += images_[i];
    }
    return out;
  }

  /// Substitution matrix M: M[alpha][beta] = occurrences of alpha in image(beta).
  std::vector<std::vector<std::int64_t>> matrix() const {
    std::vector<std::vector<std::int64_t>> m(size(), std::vector<std::int64_t>(size(), 0));
    for (std::size_t beta = 0; beta < size(); ++beta)
      for (std::size_t x = 0; x < length_; ++x) ++m[letter_index_[beta][x]][beta];
    return m;
  }

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.alphabet_ == b.alphabet_ && a.images_ == b.images_;
  }

 private:
  void validate() {
    if (alphabet_.size() < 2)
      throw error(error_kind::syntax, "alphabet needs at least two letters");
    if (images_.size() != alphabet_.size())
      throw error(error_kind::syntax, "one image per letter required");
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
      if (alphabet_.find(alphabet_[i], i + 1) != std::string::npos)
        throw error(error_kind::syntax, std::string("letter declared twice: ") + alphabet_[i]);
    length_ = images_.front().size();
    for (const auto& w : images_)
      if (w.size() != length_)
        throw error(error_kind::length_mismatch, "images have different lengths");
    if (length_ < 2) throw error(error_kind::length_mismatch, "image length must be at least 2");
    letter_index_.resize(size());
    for (std::size_t beta = 0; beta < size(); ++beta) {
      for (char c : images_[beta]) {
        auto idx = index_of(c);
        if (!idx) throw error(error_kind::unknown_letter, std::string("undeclared letter '") + c + "'");
        letter_index_[beta].push_back(*idx);
      }
    }
  }

  std::string alphabet_;
  std::vector<std::string> images_;
  std::size_t length_ = 0;
  std::vector<std::vector<std::size_t>> letter_index_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool valid_letter(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != ';' && c != '-' && c != '>' &&
         c != '{' && c != '}' && c != '"' && c != ':';
}

inline Substitution parse_json(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw error(error_kind::syntax, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("rules") || !doc["rules"].is_object())
    throw error(error_kind::syntax, "JSON form needs an object member \"rules\"");
  std::string alphabet;
  std::vector<std::string> images;
  for (const auto& [key, value] : doc["rules"].items()) {
    if (key.size() != 1 || !valid_letter(key[0]))
      throw error(error_kind::syntax, "rule keys must be single letters: '" + key + "'");
    if (!value.is_string()) throw error(error_kind::syntax, "rule images must be strings");
    alphabet += key[0];
    images.push_back(value.get<std::string>());
  }
  return Substitution(std::move(alphabet), std::move(images));
}

}  // namespace detail

/// Parse `a->ab;b->ba` or `{"rules": {"a": "ab", "b": "ba"}}`.
inline Substitution parse(std::string_view text) {
  text = detail::trim(text);
  if (!text.empty() && text.front() == '{') return detail::parse_json(text);

  std::string alphabet;
  std::vector<std::string> images;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    auto rule = detail::trim(text.substr(start, end - start));
    if (rule.empty() && end == text.size() && start > 0) break;  // trailing ';'
    auto arrow = rule.find("->");
    if (arrow == std::string_view::npos)
      throw error(error_kind::syntax, "expected 'letter->word' in '" + std::string(rule) + "'");
    auto lhs = detail::trim(rule.substr(0, arrow));
    auto rhs = detail::trim(rule.substr(arrow + 2));
    if (lhs.size() != 1 || !detail::valid_letter(lhs[0]))
      throw error(error_kind::syntax, "left side must be a single letter in '" + std::string(rule) + "'");
    if (rhs.empty()) throw error(error_kind::syntax, "empty image in '" + std::string(rule) + "'");
    for (char c : rhs)
      if (!detail::valid_letter(c))
        throw error(error_kind::syntax, "invalid character in image '" + std::string(rhs) + "'");
    alphabet += lhs[0];
    images.emplace_back(rhs);
    start = end + 1;
  }
  return Substitution(std::move(alphabet), std::move(images));
}

/// Primitive iff some power M^n with n <= (d-1)^2 + 1 is strictly positive.
inline bool is_primitive(const Substitution& s) {
  const std::size_t d = s.size();
  const auto m = s.matrix();
  std::vector<std::vector<bool>> base(d, std::vector<bool>(d)), power(d, std::vector<bool>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) base[i][j] = power[i][j] = m[i][j] > 0;
  const std::size_t bound = (d - 1) * (d - 1) + 1;
  for (std::size_t n = 1; n <= bound; ++n) {
    bool positive = true;
    for (const auto& row : power)
      for (bool v : row) positive = positive && v;
    if (positive) return true;
    std::vector<std::vector<bool>> next(d, std::vector<bool>(d, false));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        if (power[i][k])
          for (std::size_t j = 0; j < d; ++j) next[i][j] = next[i][j] || base[k][j];
    power = std::move(next);
  }
  return false;
}

/// Positions of a binary rule split by column type.
struct ColumnPartition {
  std::vector<std::size_t> coincident_a;    // both images carry the first letter
  std::vector<std::size_t> coincident_b;    // both images carry the second letter
  std::vector<std::size_t> bijective_id;    // (first, second)
  std::vector<std::size_t> bijective_swap;  // (second, first)

  std::size_t length() const noexcept {
    return coincident_a.size() + coincident_b.size() + bijective_id.size() + bijective_swap.size();
  }
  std::size_t coincidences() const noexcept { return coincident_a.size() + coincident_b.size(); }

  friend bool operator==(const ColumnPartition&, const ColumnPartition&) = default;
};

inline void require_binary(const Substitution& s) {
  if (s.size() != 2)
    throw error(error_kind::not_binary, "operation needs a two-letter alphabet, got " +
                                            std::to_string(s.size()) + " letters");
}

inline ColumnPartition column_partition(const Substitution& s) {
  require_binary(s);
  ColumnPartition cp;
  for (std::size_t i = 0; i < s.length(); ++i) {
    const auto x = s.at(0, i), y = s.at(1, i);
    if (x == 0 && y == 0) cp.coincident_a.push_back(i);
    else if (x == 1 && y == 1) cp.coincident_b.push_back(i);
    else if (x == 0) cp.bijective_id.push_back(i);
    else cp.bijective_swap.push_back(i);
  }
  return cp;
}

enum class ColumnClass { bijective, has_coincidence, degenerate };

constexpr std::string_view to_string(ColumnClass c) noexcept {
  switch (c) {
    case ColumnClass::bijective: return "Bijective";
    case ColumnClass::has_coincidence: return "HasCoincidence";
    case ColumnClass::degenerate: return "Degenerate";
  }
  return "";
}

inline ColumnClass classify_columns(const Substitution& s) {
  const auto cp = column_partition(s);
  if (cp.coincidences() == s.length()) return ColumnClass::degenerate;
  if (cp.coincidences() == 0) return ColumnClass::bijective;
  return ColumnClass::has_coincidence;
}

namespace detail {

// Smallest p in [1, bound] with image^p(letter) starting with letter.
inline std::optional<std::size_t> fixing_power(const Substitution& s, std::size_t letter,
                                               std::size_t bound) {
  std::size_t cur = letter;
  for (std::size_t p = 1; p <= bound; ++p) {
    cur = s.at(cur, 0);
    if (cur == letter) return p;
  }
  return std::nullopt;
}

}  // namespace detail

/// All two-letter words occurring in image^k(alpha), k <= d + 2, sorted by
/// alphabet order of (left, right).
inline std::vector<std::pair<std::size_t, std::size_t>> legal_two_letter_words(const Substitution& s) {
  const std::size_t d = s.size();
  std::vector<std::vector<bool>> seen(d, std::vector<bool>(d, false));
  for (std::size_t alpha = 0; alpha < d; ++alpha) {
    std::string w(1, s.letter(alpha));
    for (std::size_t k = 1; k <= d + 2; ++k) {
      w = s.apply(w);
      for (std::size_t i = 0; i + 1 < w.size(); ++i) seen[*s.index_of(w[i])][*s.index_of(w[i + 1])] = true;
      if (w.size() > (std::size_t{1} << 16)) break;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (seen[i][j]) out.emplace_back(i, j);
  return out;
}

/// A legal seed `left|right` together with the power of the substitution
/// that fixes `right` as the first letter of its own image.
struct Seed {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t power = 1;
};

/// First legal seed (lexicographic) whose right letter is fixed by a power <= d.
inline Seed find_legal_seed(const Substitution& s) {
  for (auto [l, r] : legal_two_letter_words(s))
    if (auto p = detail::fixing_power(s, r, s.size())) return Seed{l, r, *p};
  throw error(error_kind::not_a_fixed_seed, "no legal seed is fixed by a power of the substitution");
}

/// image^n(right seed letter); a length-L^n prefix of a one-sided fixed point.
inline std::string fixed_point_prefix(const Substitution& s, std::string_view seed, std::size_t n) {
  auto bar = seed.find('|');
  std::string_view left = bar == std::string_view::npos ? seed.substr(0, 1) : seed.substr(0, bar);
  std::string_view right = bar == std::string_view::npos ? seed.substr(1) : seed.substr(bar + 1);
  if (left.size() != 1 || right.size() != 1)
    throw error(error_kind::invalid_argument, "seed must look like 'a|b'");
  auto li = s.index_of(left[0]);
  auto ri = s.index_of(right[0]);
  if (!li || !ri) throw error(error_kind::unknown_letter, "seed letter not in alphabet");
  const auto legal = legal_two_letter_words(s);
  if (std::find(legal.begin(), legal.end(), std::pair{*li, *ri}) == legal.end())
    throw error(error_kind::illegal_seed, std::string(seed) + " does not occur in the language");
  if (!detail::fixing_power(s, *ri, s.size()))
    throw error(error_kind::not_a_fixed_seed,
                std::string("no power of the substitution fixes '") + right[0] + "' as a prefix");
  std::string w(1, right[0]);
  for (std::size_t i = 0; i < n; ++i) w = s.apply(w);
  return w;
}

/// Empirical pair-correlation frequencies nu_{alpha beta}(z), |z| <= max_z.
class CorrelationTable {
 public:
  CorrelationTable(std::size_t letters, std::size_t max_z, std::size_t window)
      : d_(letters), max_z_(max_z), window_(window), data_(letters * letters * (2 * max_z + 1), 0.0) {}

  double operator()(std::size_t alpha, std::size_t beta, std::int64_t z) const {
    return data_[index(alpha, beta, z)];
  }
  double& operator()(std::size_t alpha, std::size_t beta, std::int64_t z) {
    return data_[index(alpha, beta, z)];
  }
  std::size_t letters() const noexcept { return d_; }
  std::size_t max_z() const noexcept { return max_z_; }
  std::size_t window() const noexcept { return window_; }

 private:
  std::size_t index(std::size_t alpha, std::size_t beta, std::int64_t z) const {
    const auto shift = static_cast<std::int64_t>(max_z_);
    if (alpha >= d_ || beta >= d_ || z < -shift || z > shift)
      throw error(error_kind::invalid_argument, "correlation index out of range");
    return (alpha * d_ + beta) * (2 * max_z_ + 1) + static_cast<std::size_t>(z + shift);
  }

  std::size_t d_, max_z_, window_;
  std::vector<double> data_;
};

/// Direct counting of nu_{alpha beta}(z) = #{i : w_i = alpha, w_{i+z} = beta} / window
/// on a fixed-point prefix of length `window`.
inline CorrelationTable correlation_estimate(const Substitution& s, std::size_t window,
                                             std::size_t max_z) {
  if (!is_primitive(s)) throw error(error_kind::not_primitive, "substitution is not primitive");
  if (window < s.length() * s.length())
    throw error(error_kind::invalid_argument, "window must be at least L^2");
  if (max_z >= window) throw error(error_kind::invalid_argument, "max_z must be below the window");

  const Seed seed = find_legal_seed(s);
  std::string w(1, s.letter(seed.right));
  while (w.size() < window)
    for (std::size_t p = 0; p < seed.power; ++p) w = s.apply(w);
  w.resize(window);

  std::vector<std::size_t> idx(window);
  for (std::size_t i = 0; i < window; ++i) idx[i] = *s.index_of(w[i]);

  CorrelationTable table(s.size(), max_z, window);
  const auto wz = static_cast<std::int64_t>(window);
  for (std::int64_t z = -static_cast<std::int64_t>(max_z); z <= static_cast<std::int64_t>(max_z); ++z) {
    std::vector<std::size_t> counts(s.size() * s.size(), 0);
    for (std::int64_t i = std::max<std::int64_t>(0, -z); i < std::min(wz, wz - z); ++i)
      ++counts[idx[static_cast<std::size_t>(i)] * s.size() + idx[static_cast<std::size_t>(i + z)]];
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b)
        table(a, b, z) = static_cast<double>(counts[a * s.size() + b]) / static_cast<double>(window);
  }
  return table;
}

/// Smallest period p <= max_period of the fixed-point prefix of length
/// `window`, if the whole prefix is p-periodic. Heuristic only.
inline std::optional<std::size_t> apparent_period(const Substitution& s, std::size_t window = 4096,
                                                  std::size_t max_period = 64) {
  const Seed seed = find_legal_seed(s);
  std::string w(1, s.letter(seed.right));
  while (w.size() < window)
    for (std::size_t p = 0; p < seed.power; ++p) w = s.apply(w);
  w.resize(window);
  for (std::size_t p = 1; p <= max_period && p < window / 2; ++p) {
    bool periodic = true;
    for (std::size_t i = 0; i + p < window && periodic; ++i) periodic = w[i] == w[i + p];
    if (periodic) return p;
  }
  return std::nullopt;
}

}  // namespace sublyap
