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

#include <gtest/gtest.h>

#include <bitset>
#include <set>
#include <string>
#include <vector>

#include "mixnorm/mixnorm.hpp"

namespace mixnorm {
namespace {

/// Row sums of the incidence system recomputed from bitmasks.
std::vector<Rational> coverage(std::size_t n, std::size_t k, const std::vector<Rational>& c) {
  std::vector<Rational> sums(n);
  std::size_t i = 0;
  std::vector<unsigned> masks;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (std::bitset<16>(m).count() == k) masks.push_back(m);
  }
  EXPECT_EQ(masks.size(), c.size());
  // masks in increasing order of their sorted index list, i.e. lexicographic
  std::sort(masks.begin(), masks.end(), [&](unsigned a, unsigned b) {
    for (std::size_t j = 0; j < n; ++j) {
      const bool x = a >> j & 1u, y = b >> j & 1u;
      if (x != y) return x;
    }
    return false;
  });
  for (const unsigned m : masks) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m >> j & 1u) sums[j] += c[i];
    }
    ++i;
  }
  return sums;
}

void expect_feasible(std::size_t n, std::size_t k, const std::vector<Rational>& c) {
  for (const auto& ci : c) EXPECT_GE(ci.sign(), 0) << "n=" << n << " k=" << k;
  for (const auto& s : coverage(n, k, c)) EXPECT_EQ(s, Rational(1)) << "n=" << n << " k=" << k;
  EXPECT_TRUE(check_subset_coefficients(n, k, c).ok());
}

TEST(Subsets, CountsAndOrder) {
  for (std::size_t n = 1; n <= 9; ++n) {
    for (std::size_t k = 0; k <= n; ++k) {
      std::size_t expected = 0;
      for (unsigned m = 0; m < (1u << n); ++m) expected += std::bitset<16>(m).count() == k;
      const auto subs = k_subsets(n, k);
      EXPECT_EQ(subs.size(), expected);
      EXPECT_TRUE(std::is_sorted(subs.begin(), subs.end()));
      EXPECT_EQ(std::set<Subset>(subs.begin(), subs.end()).size(), subs.size());
      for (const auto& s : subs) {
        EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
        const auto c = complement(s, n);
        EXPECT_EQ(c.size() + s.size(), n);
      }
    }
  }
}

TEST(Coefficients, UniformIsFeasible) {
  for (std::size_t n = 2; n <= 9; ++n) {
    for (std::size_t k = 1; k < n; ++k) expect_feasible(n, k, uniform_coefficients(n, k));
  }
  EXPECT_EQ(uniform_coefficients(4, 2)[0], Rational(1, 3));
}

TEST(Coefficients, RandomIsFeasibleAndDeterministic) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = random_feasible_coefficients(n, k, seed);
        expect_feasible(n, k, c);
        EXPECT_EQ(c, random_feasible_coefficients(n, k, seed));
      }
    }
  }
}

TEST(Coefficients, RandomLeavesTheUniformPointWhenItCan) {
  std::set<std::vector<Rational>> seen;
  for (std::uint64_t seed = 0; seed < 20; ++seed) seen.insert(random_feasible_coefficients(4, 2, seed));
  EXPECT_GT(seen.size(), 1u);
  // k = 1 and k = n - 1 force a unique solution
  EXPECT_EQ(random_feasible_coefficients(5, 1, 3), uniform_coefficients(5, 1));
  EXPECT_EQ(random_feasible_coefficients(5, 4, 3), uniform_coefficients(5, 4));
}

TEST(Coefficients, UserValidation) {
  const std::vector<Rational> ok = {Rational(1, 2), Rational(0), Rational(1, 2), Rational(1, 2), Rational(0), Rational(1, 2)};
  EXPECT_EQ(solve_subset_coefficients(4, 2, CoefficientStrategy::user, 0, ok), ok);
  auto neg = ok;
  neg[1] = Rational(-1, 10);
  try {
    solve_subset_coefficients(4, 2, CoefficientStrategy::user, 0, neg);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("c_2"), std::string::npos) << e.what();
  }
  auto off = ok;
  off[0] = Rational(1, 4);
  try {
    solve_subset_coefficients(4, 2, CoefficientStrategy::user, 0, off);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("containing 1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("-1/4"), std::string::npos) << e.what();
  }
  EXPECT_THROW(solve_subset_coefficients(4, 2, CoefficientStrategy::user, 0, {Rational(1)}), ValidationError);
  EXPECT_THROW(solve_subset_coefficients(4, 4, CoefficientStrategy::uniform), ValidationError);
  EXPECT_THROW(solve_subset_coefficients(4, 0, CoefficientStrategy::uniform), ValidationError);
}

TEST(Coefficients, StrategyNames) {
  EXPECT_EQ(strategy_from_name("uniform"), CoefficientStrategy::uniform);
  EXPECT_EQ(strategy_from_name("random"), CoefficientStrategy::seeded_random);
  EXPECT_EQ(strategy_from_name("user"), CoefficientStrategy::user);
  EXPECT_THROW(strategy_from_name("best"), ValidationError);
}

}  // namespace
}  // namespace mixnorm
