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

#include <cmath>
#include <compare>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "mixnorm/error.hpp"
#include "mixnorm/rational.hpp"

namespace mixnorm {

/// A Lebesgue exponent in (0, inf].
///
/// Three representations: an exact positive rational, a positive finite
/// double (only when no exact spelling is available), or the distinguished
/// value infinity. Equality is exact; ordering is numeric with infinity
/// above every finite value.
class Exponent {
 public:
  enum class Rep : unsigned char { rational, real, infinite };

  Exponent(Rational q) : rep_(Rep::rational), q_(q) {  // NOLINT(google-explicit-constructor)
    if (q.sign() <= 0) throw ValidationError("exponent must be positive, got " + q.str());
  }
  Exponent(std::int64_t n) : Exponent(Rational(n)) {}  // NOLINT(google-explicit-constructor)
  Exponent(int n) : Exponent(Rational(n)) {}           // NOLINT(google-explicit-constructor)

  static Exponent infinity() {
    Exponent e(1);
    e.rep_ = Rep::infinite;
    e.q_ = 0;
    return e;
  }

  /// A computed floating value; never rationalized.
  static Exponent real(double x) {
    if (std::isnan(x) || x <= 0.0) {
      throw ValidationError("exponent must be positive, got " + std::to_string(x));
    }
    if (std::isinf(x)) return infinity();
    Exponent e(1);
    e.rep_ = Rep::real;
    e.q_ = 0;
    e.x_ = x;
    return e;
  }

  /// User-supplied floating value: exact when its shortest decimal spelling fits.
  static Exponent from_double(double x) {
    if (std::isnan(x) || x <= 0.0) {
      throw ValidationError("exponent must be positive, got " + std::to_string(x));
    }
    if (std::isinf(x)) return infinity();
    if (auto q = Rational::from_double(x)) return Exponent(*q);
    return real(x);
  }

  /// "inf", "infinity", "a/b", integers and decimals.
  static Exponent parse(std::string_view s) {
    if (s == "inf" || s == "infinity" || s == "Infinity" || s == "+inf") return infinity();
    return Exponent(Rational::parse(s));
  }

  [[nodiscard]] Rep rep() const noexcept { return rep_; }
  [[nodiscard]] bool is_infinite() const noexcept { return rep_ == Rep::infinite; }
  [[nodiscard]] bool is_finite() const noexcept { return rep_ != Rep::infinite; }
  [[nodiscard]] bool is_rational() const noexcept { return rep_ == Rep::rational; }

  [[nodiscard]] const Rational& rational() const {
    if (rep_ != Rep::rational) throw std::logic_error("exponent " + str() + " is not rational");
    return q_;
  }

  [[nodiscard]] double value() const noexcept {
    switch (rep_) {
      case Rep::rational: return q_.to_double();
      case Rep::real: return x_;
      case Rep::infinite: break;
    }
    return std::numeric_limits<double>::infinity();
  }

  [[nodiscard]] double reciprocal_value() const noexcept {
    switch (rep_) {
      case Rep::rational: return q_.reciprocal().to_double();
      case Rep::real: return 1.0 / x_;
      case Rep::infinite: break;
    }
    return 0.0;
  }

  /// 1/p exactly (1/inf = 0), or nullopt for a floating exponent.
  [[nodiscard]] std::optional<Rational> exact_reciprocal() const {
    switch (rep_) {
      case Rep::rational: return q_.reciprocal();
      case Rep::infinite: return Rational(0);
      case Rep::real: break;
    }
    return std::nullopt;
  }

  /// Inverse of exact_reciprocal: 0 maps to infinity.
  static Exponent from_reciprocal(const Rational& r) {
    if (r.is_zero()) return infinity();
    return Exponent(r.reciprocal());
  }

  [[nodiscard]] std::string str() const {
    switch (rep_) {
      case Rep::rational: return q_.str();
      case Rep::infinite: return "inf";
      case Rep::real: break;
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x_);
    return std::string(buf, ptr);
  }

  friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
    if (a.rep_ != b.rep_) return false;
    switch (a.rep_) {
      case Rep::rational: return a.q_ == b.q_;
      case Rep::real: return a.x_ == b.x_;
      case Rep::infinite: break;
    }
    return true;
  }

  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) noexcept {
    if (a.is_infinite() || b.is_infinite()) {
      return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
    }
    if (a.is_rational() && b.is_rational()) return a.q_ <=> b.q_;
    const double x = a.value();
    const double y = b.value();
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    // Numerically tied but differently represented: order by representation.
    if (a.rep_ != b.rep_) return a.rep_ <=> b.rep_;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Exponent& e) { return os << e.str(); }

 private:
  Rep rep_;
  Rational q_;
  double x_ = 0.0;
};

}  // namespace mixnorm
