// Copyright 2026 The mixnorm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "mixnorm/error.hpp"

namespace mixnorm {

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always normalized: gcd(num, den) == 1 and den > 0. Every operation is
/// carried out in 128-bit intermediates and throws RationalOverflow if the
/// reduced result does not fit back into 64 bits.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num) : num_(num) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  [[nodiscard]] std::int64_t num() const noexcept { return num_; }
  [[nodiscard]] std::int64_t den() const noexcept { return den_; }

  [[nodiscard]] bool is_zero() const noexcept { return num_ == 0; }
  [[nodiscard]] bool is_integer() const noexcept { return den_ == 1; }
  [[nodiscard]] int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  [[nodiscard]] Rational reciprocal() const {
    if (num_ == 0) throw std::domain_error("reciprocal of zero");
    return {den_, num_};
  }

  /// "a" for integers, "a/b" otherwise.
  [[nodiscard]] std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Accepts "a", "a/b", and finite decimals such as "1.25" or "3e-2".
  static Rational parse(std::string_view text);

  /// Exact value of the shortest decimal spelling of x ("0.1" -> 1/10),
  /// or nullopt when x is not finite or the decimal does not fit.
  static std::optional<Rational> from_double(double x);

  friend Rational operator+(const Rational& a, const Rational& b) {
    using I = __int128;
    return make(I{a.num_} * b.den_ + I{b.num_} * a.den_, I{a.den_} * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    using I = __int128;
    return make(I{a.num_} * b.den_ - I{b.num_} * a.den_, I{a.den_} * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    using I = __int128;
    return make(I{a.num_} * b.num_, I{a.den_} * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    using I = __int128;
    return make(I{a.num_} * b.den_, I{a.den_} * b.num_);
  }
  Rational operator-() const { return make(-__int128{num_}, den_); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    using I = __int128;
    const I lhs = I{a.num_} * b.den_;
    const I rhs = I{b.num_} * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational make(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const __int128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr auto lo = std::numeric_limits<std::int64_t>::min();
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi) throw RationalOverflow("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  void assign(std::int64_t num, std::int64_t den) { *this = make(num, den); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw ValidationError("malformed rational '" + std::string(text) + "'");
  };
  if (text.empty()) return fail();

  auto parse_int = [&](std::string_view s) -> std::int64_t {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) fail();
    return v;
  };

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_int(text.substr(slash + 1));
    if (den == 0) return fail();
    return {parse_int(text.substr(0, slash)), den};
  }

  // Decimal: [sign] digits [. digits] [e|E [sign] digits]
  std::string_view mantissa = text;
  int exp10 = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    exp10 = static_cast<int>(parse_int(text.substr(e + 1)));
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  __int128 digits = 0;
  bool any = false;
  bool seen_point = false;
  for (const char c : mantissa) {
    if (c == '.') {
      if (seen_point) return fail();
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return fail();
    any = true;
    digits = digits * 10 + (c - '0');
    if (digits > std::numeric_limits<std::int64_t>::max()) {
      throw RationalOverflow("decimal '" + std::string(text) + "' exceeds 64 bits");
    }
    if (seen_point) --exp10;
  }
  if (!any) return fail();
  if (exp10 > 18 || exp10 < -18) {
    throw RationalOverflow("decimal '" + std::string(text) + "' exceeds 64 bits");
  }
  __int128 scale = 1;
  for (int i = 0; i < (exp10 < 0 ? -exp10 : exp10); ++i) scale *= 10;
  if (negative) digits = -digits;
  return exp10 >= 0 ? make(digits * scale, 1) : make(digits, scale);
}

inline std::optional<Rational> Rational::from_double(double x) {
  if (!(x == x) || x == std::numeric_limits<double>::infinity() ||
      x == -std::numeric_limits<double>::infinity()) {
    return std::nullopt;
  }
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return std::nullopt;
  try {
    Rational r = parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
    if (r.to_double() != x) return std::nullopt;
    return r;
  } catch (const RationalOverflow&) {
    return std::nullopt;
  }
}

}  // namespace mixnorm
