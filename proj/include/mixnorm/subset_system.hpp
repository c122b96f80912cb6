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

// Coefficients c_1..c_M over the size-k subsets S_1..S_M of {1..n} with
//   c_i >= 0   and   sum_{S_i contains j} c_i = 1   for every j.
// The system has n equations in M = C(n,k) unknowns, so it is usually
// underdetermined; every strategy below returns an exact rational point.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixnorm/error.hpp"
#include "mixnorm/perm_calculus.hpp"
#include "mixnorm/rational.hpp"
#include "mixnorm/rng.hpp"

namespace mixnorm {

using Subset = std::vector<std::size_t>;  // 0-based, increasing

/// All size-k subsets of {0..n-1} in lexicographic order.
inline std::vector<Subset> k_subsets(std::size_t n, std::size_t k) {
  std::vector<Subset> out;
  if (k > n) return out;
  Subset s(k);
  for (std::size_t i = 0; i < k; ++i) s[i] = i;
  while (true) {
    out.push_back(s);
    std::size_t i = k;
    while (i > 0 && s[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++s[i - 1];
    for (std::size_t t = i; t < k; ++t) s[t] = s[t - 1] + 1;
  }
  return out;
}

inline Subset complement(const Subset& s, std::size_t n) {
  Subset out;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::binary_search(s.begin(), s.end(), j)) out.push_back(j);
  }
  return out;
}

enum class CoefficientStrategy { uniform, seeded_random, user };

inline CoefficientStrategy strategy_from_name(const std::string& s) {
  if (s == "uniform") return CoefficientStrategy::uniform;
  if (s == "random" || s == "seeded-random-feasible" || s == "seeded_random") return CoefficientStrategy::seeded_random;
  if (s == "user" || s == "user-supplied") return CoefficientStrategy::user;
  throw ValidationError("unknown coefficient strategy '" + s + "' (expected uniform, random or user)");
}

struct CoefficientCheck {
  std::vector<Rational> residuals;           // per index j: sum_{S_i contains j} c_i - 1
  std::optional<std::size_t> negative;       // first negative coefficient
  [[nodiscard]] bool ok() const {
    return !negative && std::all_of(residuals.begin(), residuals.end(), [](const Rational& r) { return r.is_zero(); });
  }
};

inline CoefficientCheck check_subset_coefficients(std::size_t n, std::size_t k, const std::vector<Rational>& c) {
  const auto subsets = k_subsets(n, k);
  if (c.size() != subsets.size()) {
    throw ValidationError("expected " + std::to_string(subsets.size()) + " coefficients for n=" + std::to_string(n) +
                          ", k=" + std::to_string(k) + ", got " + std::to_string(c.size()));
  }
  CoefficientCheck chk;
  chk.residuals.assign(n, Rational(-1));
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (c[i].sign() < 0 && !chk.negative) chk.negative = i;
    for (const auto j : subsets[i]) chk.residuals[j] += c[i];
  }
  return chk;
}

namespace detail {
inline void require_subset_shape(std::size_t n, std::size_t k) {
  if (!(0 < k && k < n)) {
    throw ValidationError("subset system needs 0 < k < n, got n=" + std::to_string(n) + ", k=" + std::to_string(k));
  }
}
}  // namespace detail

/// c_i = 1 / C(n-1, k-1): each index lies in exactly that many subsets.
inline std::vector<Rational> uniform_coefficients(std::size_t n, std::size_t k) {
  detail::require_subset_shape(n, k);
  const auto per_index = static_cast<std::int64_t>(detail::binomial(n - 1, k - 1));
  return std::vector<Rational>(detail::binomial(n, k), Rational(1, per_index));
}

/// Uniform point plus a random integer direction projected exactly onto the
/// null space of the incidence matrix A, scaled so every c_i stays >= 0.
///
/// A A^T = a I + b J with a = C(n-2,k-1) and b = C(n-2,k-2), whose inverse
/// is (I - b/(a + n b) J) / a, so the projection stays in exact arithmetic.
inline std::vector<Rational> random_feasible_coefficients(std::size_t n, std::size_t k, std::uint64_t seed) {
  detail::require_subset_shape(n, k);
  const auto subsets = k_subsets(n, k);
  const std::size_t m = subsets.size();
  std::vector<Rational> c = uniform_coefficients(n, k);

  Rng rng(derive_seed(seed, {n, k}));
  std::vector<Rational> d(m);
  for (auto& di : d) di = Rational(rng.integer(-6, 6));

  const auto a = static_cast<std::int64_t>(detail::binomial(n - 2, k - 1));
  const auto b = k >= 2 ? static_cast<std::int64_t>(detail::binomial(n - 2, k - 2)) : std::int64_t{0};
  std::vector<Rational> y(n);  // A d
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto j : subsets[i]) y[j] += d[i];
  }
  Rational ysum = 0;
  for (const auto& v : y) ysum += v;
  const Rational shift = Rational(b, a + static_cast<std::int64_t>(n) * b) * ysum;
  std::vector<Rational> z(n);  // (A A^T)^{-1} A d
  for (std::size_t j = 0; j < n; ++j) z[j] = (y[j] - shift) / Rational(a);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto j : subsets[i]) d[i] -= z[j];
  }

  std::optional<Rational> t_max;
  for (std::size_t i = 0; i < m; ++i) {
    if (d[i].sign() < 0) {
      const Rational t = c[i] / -d[i];
      if (!t_max || t < *t_max) t_max = t;
    }
  }
  if (!t_max) return c;  // null space is trivial: the point is forced
  const Rational t = *t_max * Rational(rng.integer(1, 8), 8);
  for (std::size_t i = 0; i < m; ++i) c[i] += t * d[i];
  return c;
}

inline std::vector<Rational> solve_subset_coefficients(std::size_t n, std::size_t k, CoefficientStrategy strategy,
                                                       std::uint64_t seed = 0,
                                                       const std::vector<Rational>& user = {}) {
  detail::require_subset_shape(n, k);
  switch (strategy) {
    case CoefficientStrategy::uniform: return uniform_coefficients(n, k);
    case CoefficientStrategy::seeded_random: return random_feasible_coefficients(n, k, seed);
    case CoefficientStrategy::user: break;
  }
  const auto chk = check_subset_coefficients(n, k, user);
  if (chk.negative) {
    throw ValidationError("coefficient c_" + std::to_string(*chk.negative + 1) + " = " + user[*chk.negative].str() +
                          " is negative");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!chk.residuals[j].is_zero()) {
      throw ValidationError("coefficients over subsets containing " + std::to_string(j + 1) + " sum to " +
                            (chk.residuals[j] + Rational(1)).str() + ", expected 1 (residual " +
                            chk.residuals[j].str() + ")");
    }
  }
  return user;
}

}  // namespace mixnorm
