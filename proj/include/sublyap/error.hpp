#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sublyap {

enum class error_kind {
  syntax,
  length_mismatch,
  unknown_letter,
  not_binary,
  not_primitive,
  not_a_fixed_seed,
  illegal_seed,
  no_such_symmetry,
  degenerate_substitution,
  singular_family,
  resample_exhausted,
  zero_polynomial,
  invalid_argument,
};

constexpr std::string_view to_string(error_kind k) noexcept {
  switch (k) {
    case error_kind::syntax: return "SyntaxError";
    case error_kind::length_mismatch: return "LengthMismatch";
    case error_kind::unknown_letter: return "UnknownLetter";
    case error_kind::not_binary: return "NotBinary";
    case error_kind::not_primitive: return "NotPrimitive";
    case error_kind::not_a_fixed_seed: return "NotAFixedSeed";
    case error_kind::illegal_seed: return "IllegalSeed";
    case error_kind::no_such_symmetry: return "NoSuchSymmetry";
    case error_kind::degenerate_substitution: return "DegenerateSubstitution";
    case error_kind::singular_family: return "SingularFamily";
    case error_kind::resample_exhausted: return "ResampleExhausted";
    case error_kind::zero_polynomial: return "ZeroPolynomial";
    case error_kind::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind alongside the message.
class error : public std::runtime_error {
 public:
  error(error_kind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  error_kind kind() const noexcept { return kind_; }

 private:
  error_kind kind_;
};

}  // namespace sublyap
