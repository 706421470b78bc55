#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kinsep {

enum class Sign : std::uint8_t { Plus, Minus };

/// Outcome of classifying a real number against a zero band.
enum class SignClass : std::uint8_t { Plus, Minus, NearZero };

/// Plus if value > zero_tol, Minus if value < -zero_tol, NearZero otherwise.
SignClass classify_sign(double value, double zero_tol);

char to_char(Sign s);
char to_char(SignClass s);
constexpr Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
constexpr SignClass as_class(Sign s) {
  return s == Sign::Plus ? SignClass::Plus : SignClass::Minus;
}

/// Sign pattern of the serial-Jacobian diagonal; one entry per leg, never zero.
class SignVector {
 public:
  SignVector() = default;
  explicit SignVector(std::vector<Sign> signs) : signs_(std::move(signs)) {}

  /// Parses strings like "+-+". Throws std::invalid_argument on any other character.
  static SignVector parse(std::string_view text);

  std::size_t size() const { return signs_.size(); }
  Sign operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<Sign>& signs() const { return signs_; }

  /// Rank in enumerate_working_modes order.
  std::size_t index() const;
  SignVector flipped() const;
  std::string str() const;

  friend auto operator<=>(const SignVector&, const SignVector&) = default;
  friend bool operator==(const SignVector&, const SignVector&) = default;

 private:
  std::vector<Sign> signs_;
};

/// All 2^n sign patterns, lexicographic with Plus < Minus (n = 2: ++, +-, -+, --).
/// Throws std::invalid_argument unless 1 <= n <= 16.
std::vector<SignVector> enumerate_working_modes(int n);

}  // namespace kinsep
