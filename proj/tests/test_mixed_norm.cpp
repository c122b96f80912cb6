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

#include <cmath>
#include <limits>
#include <vector>

#include "mixnorm/mixnorm.hpp"
#include "test_support.hpp"

namespace mixnorm {
namespace {

using testing::oracle_mixed_norm;
using testing::random_space;
using testing::random_tensor;
using testing::rel_diff;
using testing::spec_of;

SpacePtr unit_space(std::vector<std::size_t> shape) { return std::make_shared<const ProductSpace>(ProductSpace::unit(shape)); }

TEST(Space, RejectsInvalidAxes) {
  EXPECT_THROW(ProductSpace(std::vector<Axis>{}), ValidationError);
  EXPECT_THROW(ProductSpace({Axis{"x1", {}}}), ValidationError);
  EXPECT_THROW(ProductSpace({{"x1", {1.0}}, {"x1", {1.0}}}), ValidationError);
  EXPECT_THROW(ProductSpace({{"x1", {1.0, 0.0}}}), ValidationError);
  EXPECT_THROW(ProductSpace({{"x1", {std::numeric_limits<double>::infinity()}}}), ValidationError);
  try {
    ProductSpace({{"a", {1.0}}, {"b", {2.0, -1.0}}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'b'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("atom 1"), std::string::npos);
  }
}

TEST(Tensor, RejectsBadValues) {
  auto s = unit_space({2});
  EXPECT_THROW(Tensor(s, {1.0}), ValidationError);
  EXPECT_THROW(Tensor(s, {1.0, -1.0}), ValidationError);
  EXPECT_THROW(Tensor(s, {1.0, std::numeric_limits<double>::quiet_NaN()}), ValidationError);
}

TEST(NormSpec, ValidatesAgainstSpace) {
  auto s = unit_space({2, 2});
  const Tensor f = Tensor::constant(s, 1.0);
  EXPECT_THROW(eval_mixed_norm(f, NormSpec({Exponent(2)}, {"x1"})), ValidationError);
  EXPECT_THROW(eval_mixed_norm(f, NormSpec({Exponent(2), Exponent(1)}, {"x1", "y"})), ValidationError);
  EXPECT_THROW(NormSpec({Exponent(2), Exponent(1)}, {"x1", "x1"}), ValidationError);
}

TEST(MixedNorm, HandComputedTwoByTwo) {
  const Tensor f(unit_space({2, 2}), {1, 2, 3, 4});
  const NormSpec p({Exponent(2), Exponent(1)}, {"x1", "x2"});
  const double expected = std::sqrt(10.0) + std::sqrt(20.0);
  EXPECT_NEAR(eval_mixed_norm(f, p), expected, 1e-12);
  EXPECT_NEAR(eval_mixed_norm(f, p, EvalPath::log_domain), expected, 1e-12);
  EXPECT_NEAR(expected, 7.63441361516796, 1e-12);
}

TEST(MixedNorm, ConstantClosedForm) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    auto s = random_space(rng, n);
    const double c = rng.log_uniform(0.01, 100);
    const auto row = testing::random_exponent_row(rng, n, false);
    double expected = c;
    for (std::size_t a = 0; a < n; ++a) expected *= std::pow(s->axis(a).total_weight(), 1.0 / row[a].value());
    EXPECT_LT(rel_diff(eval_mixed_norm(Tensor::constant(s, c), spec_of(row)), expected), 1e-12);
  }
}

TEST(MixedNorm, AllInfiniteIsMaximum) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    auto s = random_space(rng, 3);
    const Tensor f = random_tensor(rng, s);
    const double mx = *std::max_element(f.values().begin(), f.values().end());
    EXPECT_EQ(eval_mixed_norm(f, NormSpec::uniform(Exponent::infinity(), s->ids())), mx);
  }
}

TEST(MixedNorm, MatchesRecursiveOracle) {
  Rng rng(5);
  for (int t = 0; t < 500; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    auto s = random_space(rng, n);
    const Tensor f = random_tensor(rng, s, 0.01, 10.0, 0.2);
    auto axes = s->ids();
    std::reverse(axes.begin(), axes.begin() + static_cast<std::ptrdiff_t>(rng.integer(0, static_cast<std::int64_t>(n))));
    const NormSpec p(testing::random_exponent_row(rng, n), axes);
    const double oracle = oracle_mixed_norm(f, p);
    EXPECT_LT(rel_diff(eval_mixed_norm(f, p), oracle), 1e-12) << p;
    EXPECT_LT(rel_diff(eval_mixed_norm(f, p, EvalPath::log_domain), oracle), 1e-12) << p;
  }
}

TEST(MixedNorm, ZeroTensorHasZeroNorm) {
  auto s = unit_space({2, 3});
  const Tensor z = Tensor::constant(s, 0.0);
  EXPECT_EQ(eval_mixed_norm(z, spec_of({Exponent(Rational(1, 2)), Exponent(3)})), 0.0);
  EXPECT_EQ(eval_mixed_norm(z, spec_of({Exponent(Rational(1, 2)), Exponent(3)}), EvalPath::log_domain), 0.0);
}

TEST(MixedNorm, Homogeneity) {
  Rng rng(6);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    auto s = random_space(rng, n);
    const Tensor f = random_tensor(rng, s);
    const NormSpec p = spec_of(testing::random_exponent_row(rng, n));
    const double c = rng.chance(0.1) ? 0.0 : rng.log_uniform(1e-3, 1e3);
    EXPECT_LE(std::abs(eval_mixed_norm(f.scaled(c), p) - c * eval_mixed_norm(f, p)), 1e-10 * c * eval_mixed_norm(f, p));
  }
}

TEST(MixedNorm, Monotonicity) {
  Rng rng(7);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    auto s = random_space(rng, n);
    const Tensor f = random_tensor(rng, s, 0.01, 10.0, 0.2);
    std::vector<double> g(f.values().begin(), f.values().end());
    for (auto& x : g) x += rng.chance(0.5) ? rng.uniform(0, 5) : 0.0;
    const NormSpec p = spec_of(testing::random_exponent_row(rng, n));
    EXPECT_LE(eval_mixed_norm(f, p), eval_mixed_norm(Tensor(s, g), p) + 1e-12);
  }
}

TEST(MixedNorm, EqualExponentBlocksCommute) {
  Rng rng(8);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(2, 4));
    auto s = random_space(rng, n);
    const Tensor f = random_tensor(rng, s);
    auto row = testing::random_exponent_row(rng, n);
    std::sort(row.begin(), row.end());
    const NormSpec p(row, s->ids());
    // shuffle axes inside each maximal run of equal exponents
    auto axes = s->ids();
    for (std::size_t a = 0; a < n;) {
      std::size_t b = a;
      while (b < n && row[b] == row[a]) ++b;
      for (std::size_t i = b; i > a + 1; --i) {
        std::swap(axes[i - 1], axes[a + static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(i - a) - 1))]);
      }
      a = b;
    }
    EXPECT_LT(rel_diff(eval_mixed_norm(f, p), eval_mixed_norm(f, NormSpec(row, axes))), 1e-10);
  }
}

TEST(MixedNorm, LogAndDirectAgreeOverWideRange) {
  Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    auto s = random_space(rng, n);
    const Tensor f = random_tensor(rng, s, 1e-8, 1e8);
    const NormSpec p = spec_of(testing::random_exponent_row(rng, n));
    EXPECT_LT(rel_diff(eval_mixed_norm(f, p), eval_mixed_norm(f, p, EvalPath::log_domain)), 1e-9) << p;
  }
}

TEST(MixedNorm, LogPathSurvivesUnderflow) {
  auto s = unit_space({3});
  const Tensor f(s, {1e-300, 1e-300, 0.0});
  const double l = log_mixed_norm(f, spec_of({Exponent(4)}));
  EXPECT_NEAR(l, std::log(1e-300) + std::log(2.0) / 4, 1e-9);
}

TEST(LpNorm, MatchesUniformSpec) {
  Rng rng(10);
  auto s = random_space(rng, 3);
  const Tensor f = random_tensor(rng, s);
  EXPECT_EQ(lp_norm(f, Exponent(3)), eval_mixed_norm(f, NormSpec::uniform(Exponent(3), s->ids())));
}

TEST(IntegrateProduct, Examples) {
  auto s = unit_space({2});
  const std::vector<Tensor> fs = {Tensor(s, {1, 2}), Tensor(s, {3, 5})};
  EXPECT_EQ(integrate_product(fs), 13.0);
  auto w = make_space({{"x1", {0.5, 1.5}}, {"x2", {2.0}}});
  const std::vector<Tensor> c = {Tensor::constant(w, 3.0)};
  EXPECT_DOUBLE_EQ(integrate_product(c), 3.0 * 4.0);
  const std::vector<Tensor> z = {Tensor::constant(w, 3.0), Tensor::constant(w, 0.0)};
  EXPECT_EQ(integrate_product(z), 0.0);
  EXPECT_EQ(log_integrate_product(z), kLogZero);
  const std::vector<Tensor> mixed = {Tensor(s, {1, 2}), Tensor(w, {1, 2})};
  EXPECT_THROW(integrate_product(mixed), ValidationError);
}

TEST(IntegrateProduct, EqualsAllOnesNormOfProduct) {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    auto s = random_space(rng, n);
    std::vector<Tensor> fs;
    const auto m = rng.integer(1, 4);
    for (int i = 0; i < m; ++i) fs.push_back(random_tensor(rng, s));
    std::vector<double> prod(s->size(), 1.0);
    for (const auto& f : fs) {
      for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= f[i];
    }
    auto axes = s->ids();
    std::reverse(axes.begin(), axes.end());
    const double norm1 = eval_mixed_norm(Tensor(s, prod), NormSpec::uniform(Exponent(1), axes));
    EXPECT_LT(rel_diff(integrate_product(fs), norm1), 1e-10);
    EXPECT_LT(rel_diff(std::exp(log_integrate_product(fs)), norm1), 1e-10);
  }
}

TEST(GeometricMean, Examples) {
  auto one = unit_space({1});
  const std::vector<Tensor> pair = {Tensor(one, {4}), Tensor(one, {9})};
  EXPECT_DOUBLE_EQ(geometric_mean(pair)[0], 6.0);
  Rng rng(13);
  auto s = random_space(rng, 2);
  const Tensor f = random_tensor(rng, s, 0.01, 10.0, 0.3);
  const std::vector<Tensor> single = {f};
  EXPECT_EQ(geometric_mean(single), f);
  const std::vector<Tensor> copies(5, f);
  const Tensor g = geometric_mean(copies);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(g[i], f[i], 1e-12 * f[i]);
  const std::vector<Tensor> with_zero = {f, Tensor::constant(s, 0.0)};
  const Tensor gz = geometric_mean(with_zero);
  for (const double v : gz.values()) EXPECT_EQ(v, 0.0);
}

}  // namespace
}  // namespace mixnorm
