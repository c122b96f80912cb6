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

#include <string>
#include <vector>

#include "mixnorm/mixnorm.hpp"
#include "test_support.hpp"

namespace mixnorm {
namespace {

using testing::random_exponent_row;
using testing::random_space;
using testing::random_tensor;
using testing::spec_of;

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(Documents, RationalRoundTrip) {
  for (const Rational r : {Rational(0), Rational(7), Rational(-3, 4), Rational(22, 7)}) {
    EXPECT_EQ(rational_from_json(rational_to_json(r)), r);
  }
  EXPECT_EQ(rational_from_json(json(0.25)), Rational(1, 4));
  EXPECT_EQ(rational_from_json(json(5)), Rational(5));
  EXPECT_THROW(rational_from_json(json::array()), ValidationError);
}

TEST(Documents, ExponentForms) {
  EXPECT_EQ(exponent_to_json(Exponent(2)), json(2));
  EXPECT_EQ(exponent_to_json(Exponent::infinity()), json("inf"));
  EXPECT_EQ(exponent_from_json(json("inf")), Exponent::infinity());
  EXPECT_EQ(exponent_from_json(json("3/2")), Exponent(Rational(3, 2)));
  EXPECT_EQ(exponent_from_json(json(0.1)), Exponent(Rational(1, 10)));
  EXPECT_THROW(exponent_from_json(json(nullptr)), ValidationError);
}

TEST(Documents, NormSpecRoundTripKeepsExactness) {
  Rng rng(21);
  for (int t = 0; t < 300; ++t) {
    const NormSpec p = spec_of(random_exponent_row(rng, static_cast<std::size_t>(rng.integer(1, 6))));
    const json doc = normspec_to_json(p);
    EXPECT_EQ(normspec_from_json(json::parse(doc.dump())), p);
  }
  const json doc = normspec_to_json(spec_of({Exponent(Rational(1, 3))}));
  EXPECT_EQ(doc["columns"][0]["p_exact"], "1/3");
}

TEST(Documents, NormSpecErrors) {
  EXPECT_NE(error_of([] { normspec_from_json(json::object()); }).find("columns"), std::string::npos);
  const json dup = {{"columns", {{{"p", 1}, {"axis", "x"}}, {{"p", 2}, {"axis", "x"}}}}};
  EXPECT_FALSE(error_of([&] { normspec_from_json(dup); }).empty());
  const json bad = {{"columns", {{{"p", 0}, {"axis", "x"}}}}};
  EXPECT_FALSE(error_of([&] { normspec_from_json(bad); }).empty());
}

TEST(Documents, SpaceAndTensorRoundTrip) {
  Rng rng(22);
  for (int t = 0; t < 100; ++t) {
    const SpacePtr s = random_space(rng, static_cast<std::size_t>(rng.integer(1, 4)));
    const Tensor f = random_tensor(rng, s, 0.01, 10.0, 0.2);
    const json doc = json::parse(tensor_to_json(f).dump());
    const Tensor g = tensor_from_json(doc);
    EXPECT_EQ(g.space(), *s);
    EXPECT_EQ(std::vector<double>(g.values().begin(), g.values().end()),
              std::vector<double>(f.values().begin(), f.values().end()));
    const Tensor h = tensor_from_csv(tensor_to_csv(f), s);
    EXPECT_EQ(std::vector<double>(h.values().begin(), h.values().end()),
              std::vector<double>(f.values().begin(), f.values().end()));
  }
}

TEST(Documents, TensorValidationNamesTheProblem) {
  const json space = {{"axes", {{{"id", "x1"}, {"weights", {1.0, 1.0}}}}}};
  EXPECT_NE(error_of([&] { load_validated(space, json{{"values", {1.0, -2.0}}}); }).find("flat index 1"), std::string::npos);
  EXPECT_NE(error_of([&] { load_validated(space, json{{"values", {1.0}}}); }).find("values"), std::string::npos);
  EXPECT_NE(error_of([&] { load_validated(space, json{{"values", {1.0, "a"}}}); }).find("flat index 1"), std::string::npos);
  EXPECT_NE(error_of([&] { load_validated(space, json{{"shape", {3}}, {"values", {1.0, 1.0}}}); }).find("shape"),
            std::string::npos);
  EXPECT_FALSE(error_of([&] { load_validated(json(nullptr), json{{"values", {1.0}}}); }).empty());
  const json bad_w = {{"axes", {{{"id", "x1"}, {"weights", {1.0, 0.0}}}}}};
  EXPECT_FALSE(error_of([&] { space_from_json(bad_w); }).empty());
  const json dup = {{"axes", {{{"id", "x1"}, {"weights", {1.0}}}, {{"id", "x1"}, {"weights", {1.0}}}}}};
  EXPECT_FALSE(error_of([&] { space_from_json(dup); }).empty());
}

TEST(Documents, CsvErrors) {
  const SpacePtr s = make_space({Axis{"x1", {1.0, 1.0}}, Axis{"x2", {1.0}}});
  EXPECT_NE(error_of([&] { tensor_from_csv("1,2\n", s); }).find("shape"), std::string::npos);
  EXPECT_NE(error_of([&] { tensor_from_csv("# shape: 2,1\n1,zz\n", s); }).find("zz"), std::string::npos);
  EXPECT_NE(error_of([&] { tensor_from_csv("# shape: 1,2\n1,2\n", s); }).find("shape"), std::string::npos);
  const Tensor f = tensor_from_csv("# shape: 2,1\n1\n2\n", s);
  EXPECT_EQ(f[1], 2.0);
}

TEST(Documents, PermutationAndTrace) {
  const Permutation s = Permutation::from_one_based({3, 1, 2});
  EXPECT_EQ(permutation_from_json(permutation_to_json(s)), s);
  EXPECT_THROW(permutation_from_json(json{1, 1, 2}), ValidationError);
  EXPECT_THROW(permutation_from_json(json{0, 1}), ValidationError);
  const NormSpec p = spec_of({Exponent(1), Exponent(2), Exponent(3)});
  const RaiseTrace tr = decompose(Permutation::from_one_based({3, 2, 1}), p, Direction::raise);
  const RaiseTrace back = trace_from_json(json::parse(trace_to_json(tr).dump()), p, Direction::raise);
  EXPECT_EQ(back.steps.size(), tr.steps.size());
  EXPECT_TRUE(back.valid());
  EXPECT_EQ(back.composed(), tr.composed());
}

}  // namespace
}  // namespace mixnorm
