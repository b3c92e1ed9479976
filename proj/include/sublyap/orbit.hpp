#pragma once

// Orbits of k under k -> L k mod 1 driven by base-L digits.
//
// A uniformly distributed k has i.i.d. uniform base-L digits, and the
// times-L map acts as a shift on them. Repeated multiply-and-fract in
// double precision exhausts the mantissa after ~53/log2(L) steps (for
// L = 2 every orbit lands on k = 0), so the orbit keeps a window of
// upcoming digits and draws fresh ones from a seeded stream instead.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace sublyap {

/// SplitMix64 finaliser, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

class DigitOrbit {
 public:
  DigitOrbit(std::uint64_t L, std::uint64_t seed) : L_(L), gen_(seed) {
    // Enough digits to fix every bit of a double: L^-width < 2^-64.
    width_ = static_cast<std::size_t>(std::ceil(64.0 / std::log2(static_cast<double>(L)))) + 1;
    for (std::size_t i = 0; i < width_; ++i) digits_.push_back(draw());
  }

  /// Starts at `k0` (its first base-L digits), continued by random digits
  /// below double resolution.
  DigitOrbit(std::uint64_t L, std::uint64_t seed, double k0) : DigitOrbit(L, seed) {
    double x = k0 - std::floor(k0);
    const std::size_t exact = static_cast<std::size_t>(std::floor(53.0 / std::log2(static_cast<double>(L))));
    for (std::size_t i = 0; i < exact && i < width_; ++i) {
      x *= static_cast<double>(L);
      const double d = std::floor(x);
      digits_[i] = static_cast<std::uint64_t>(std::min(d, static_cast<double>(L - 1)));
      x -= d;
    }
  }

  /// Current point k in [0, 1).
  double point() const {
    double k = 0.0;
    for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) k = (k + static_cast<double>(*it)) / static_cast<double>(L_);
    return k < 1.0 ? k : std::nextafter(1.0, 0.0);
  }

  /// k <- L k mod 1
  void advance() {
    digits_.pop_front();
    digits_.push_back(draw());
  }

  std::uint64_t base() const noexcept { return L_; }

 private:
  std::uint64_t draw() {
    // Rejection keeps digits exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % L_;
    std::uint64_t v;
    do v = gen_();
    while (v >= limit);
    return v % L_;
  }

  std::uint64_t L_;
  std::mt19937_64 gen_;
  std::size_t width_ = 0;
  std::deque<std::uint64_t> digits_;
};

namespace detail {

/// Runs fn(i) for i in [0, n) across hardware threads. Results must be
/// written to per-index slots so that reduction order stays fixed.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

}  // namespace sublyap
