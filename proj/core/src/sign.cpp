#include "kinsep/sign.hpp"

#include <stdexcept>

namespace kinsep {

SignClass classify_sign(double value, double zero_tol) {
  if (value > zero_tol) return SignClass::Plus;
  if (value < -zero_tol) return SignClass::Minus;
  return SignClass::NearZero;
}

char to_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

char to_char(SignClass s) {
  switch (s) {
    case SignClass::Plus: return '+';
    case SignClass::Minus: return '-';
    case SignClass::NearZero: return '0';
  }
  return '?';
}

SignVector SignVector::parse(std::string_view text) {
  std::vector<Sign> signs;
  signs.reserve(text.size());
  for (char c : text) {
    if (c == '+') {
      signs.push_back(Sign::Plus);
    } else if (c == '-') {
      signs.push_back(Sign::Minus);
    } else {
      throw std::invalid_argument("invalid sign character '" + std::string(1, c) + "' in \"" +
                                  std::string(text) + "\"");
    }
  }
  if (signs.empty()) throw std::invalid_argument("empty sign string");
  return SignVector(std::move(signs));
}

std::size_t SignVector::index() const {
  std::size_t idx = 0;
  for (Sign s : signs_) idx = 2 * idx + (s == Sign::Minus ? 1 : 0);
  return idx;
}

SignVector SignVector::flipped() const {
  std::vector<Sign> out;
  out.reserve(signs_.size());
  for (Sign s : signs_) out.push_back(flip(s));
  return SignVector(std::move(out));
}

std::string SignVector::str() const {
  std::string out;
  out.reserve(signs_.size());
  for (Sign s : signs_) out.push_back(to_char(s));
  return out;
}

std::vector<SignVector> enumerate_working_modes(int n) {
  if (n < 1 || n > 16) {
    throw std::invalid_argument("working-mode enumeration needs 1 <= n <= 16, got " +
                                std::to_string(n));
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<SignVector> modes;
  modes.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::vector<Sign> signs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const bool minus = (idx >> (n - 1 - j)) & 1U;
      signs[static_cast<std::size_t>(j)] = minus ? Sign::Minus : Sign::Plus;
    }
    modes.emplace_back(std::move(signs));
  }
  return modes;
}

}  // namespace kinsep
