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
#include <string>
#include <vector>

#include "mixnorm/mixnorm.hpp"
#include "test_support.hpp"

namespace mixnorm {
namespace {

std::vector<double> powers_of_two(int hi) {
  std::vector<double> t;
  for (int e = 0; e <= hi; ++e) t.push_back(std::ldexp(1.0, e));
  return t;
}

TEST(Probe, LittlewoodScalingBothSides) {
  const NormSpec spec({Exponent(2), Exponent(1)}, {"x1", "x2"});
  for (const int p : {1, 2}) {
    const ScalingProbe probe = scaling_probe(spec, Exponent(p), powers_of_two(10));
    ASSERT_EQ(probe.rows.size(), 11u);
    for (const auto& r : probe.rows) {
      const double want = std::pow(r.t, 2.0 * (1.0 / p - 0.75));
      EXPECT_LT(testing::rel_diff(r.empirical, want), 1e-9) << "p=" << p << " t=" << r.t;
    }
  }
  EXPECT_EQ(scaling_probe(spec, Exponent(Rational(4, 3)), {1, 8, 64}).rows[2].empirical,
            scaling_probe(spec, Exponent(Rational(4, 3)), {64}).rows[0].empirical);
}

TEST(Probe, FractionalSidesAndHigherRank) {
  const NormSpec spec({Exponent(3), Exponent(2), Exponent(1)}, {"a", "b", "c"});
  const ScalingProbe probe = scaling_probe(spec, Exponent(2), {0.5, 1.5, 2.25, 7});
  const double pbar_inv = (1.0 / 3 + 1.0 / 2 + 1.0) / 3.0;
  for (const auto& r : probe.rows) {
    EXPECT_LT(testing::rel_diff(r.empirical, std::pow(r.t, 3.0 * (0.5 - pbar_inv))), 1e-9) << r.t;
  }
  EXPECT_THROW(scaling_probe(spec, Exponent(2), {0.0}), ValidationError);
  EXPECT_THROW(scaling_probe(spec, Exponent(2), {1e6}), ValidationError);
  EXPECT_NE(probe_to_csv(probe).find("t,analytic,empirical,rel_error"), std::string::npos);
  EXPECT_EQ(probe_to_json(probe).at("rows").size(), 4u);
}

TEST(Search, FindsViolationOfPerturbedInstance) {
  const InequalityInstance inst = make_symmetric(Kind::symmetric_gm1, {Exponent(2), Exponent(1)}, {}, Rational(6, 5));
  SearchConfig cfg;
  cfg.seed = 2026;
  const SearchResult r = maximize_ratio(inst, cfg);
  EXPECT_GT(r.best_ratio, 1.0);
  EXPECT_LE(r.evaluations, cfg.max_evals);
  EXPECT_FALSE(r.report.pass);
  ASSERT_EQ(r.witnesses.size(), 1u);
  // the witness reproduces the ratio
  const VerificationReport again = evaluate_instance(inst, r.witnesses);
  EXPECT_NEAR(again.ratio, r.best_ratio, 1e-9 * r.best_ratio);
}

TEST(Search, DeterministicForASeed) {
  const InequalityInstance inst = make_symmetric(Kind::symmetric_gm1, {Exponent(2), Exponent(1), Exponent(1)}, {}, Rational(6, 5));
  SearchConfig cfg;
  cfg.seed = 9;
  cfg.max_evals = 2000;
  const SearchResult a = maximize_ratio(inst, cfg);
  const SearchResult b = maximize_ratio(inst, cfg);
  EXPECT_EQ(a.best_ratio, b.best_ratio);
  EXPECT_EQ(a.evaluations_to_best, b.evaluations_to_best);
  EXPECT_EQ(search_result_to_json(a).dump(), search_result_to_json(b).dump());
}

TEST(Search, TrueInstancesStayBounded) {
  SearchConfig cfg;
  cfg.seed = 4;
  cfg.max_evals = 3000;
  for (const auto& inst : {make_littlewood43(), make_quad6(), make_blei21(3, 1),
                           make_popa_sinnamon(true, {Exponent(4), Exponent(4), Exponent(4)})}) {
    const SearchResult r = maximize_ratio(inst, cfg);
    EXPECT_LE(r.best_ratio, 1.0 + 1e-8) << kind_name(inst.kind);
    EXPECT_GT(r.best_ratio, 0.0);
  }
}

TEST(Search, ConfigRoundTrip) {
  SearchConfig cfg;
  cfg.seed = 77;
  cfg.max_evals = 123;
  cfg.weight_min = 1e-2;
  const SearchConfig back = search_config_from_json(json::parse(search_config_to_json(cfg).dump()));
  EXPECT_EQ(search_config_to_json(back), search_config_to_json(cfg));
}

TEST(Sweep, CleanAndIndependentOfThreadCount) {
  TrialConfig cfg;
  cfg.seed = 12;
  cfg.trials = 40;
  const json one = sweep(cfg);
  cfg.threads = 4;
  const json four = sweep(cfg);
  EXPECT_EQ(one.dump(), four.dump());
  EXPECT_TRUE(one.at("pass").get<bool>());
  EXPECT_EQ(one.at("total_failures"), 0);
  EXPECT_EQ(one.at("kinds").size(), kAllKinds.size());
  for (const auto& [name, agg] : one.at("kinds").items()) EXPECT_EQ(agg.at("trials"), 40) << name;
}

TEST(Sweep, SeedChangesTrials) {
  TrialConfig a;
  a.trials = 10;
  a.seed = 1;
  TrialConfig b = a;
  b.seed = 2;
  EXPECT_NE(sweep(a).at("kinds").dump(), sweep(b).at("kinds").dump());
}

TEST(Sweep, ReportsInjectedCounterexample) {
  TrialConfig cfg;
  cfg.seed = 3;
  cfg.trials = 5;
  cfg.kinds = {Kind::symmetric_gm1};
  std::vector<InequalityInstance> extra;
  for (int i = 0; i < 30; ++i) extra.push_back(make_symmetric(Kind::symmetric_gm1, {Exponent(2), Exponent(1)}, {}, Rational(3)));
  const json rep = sweep(cfg, extra);
  EXPECT_FALSE(rep.at("pass").get<bool>());
  ASSERT_GT(rep.at("failures").size(), 0u);
  const json& f = rep.at("failures")[0];
  EXPECT_TRUE(f.at("injected").get<bool>());
  EXPECT_FALSE(f.at("report").at("pass").get<bool>());
  EXPECT_EQ(f.at("witnesses").size(), 1u);
  // the failure is reproducible from the serialized document alone
  const InequalityInstance inst = instance_from_json(f.at("instance"));
  const std::vector<Tensor> w = {tensor_from_json(f.at("witnesses")[0])};
  EXPECT_FALSE(evaluate_instance(inst, w).pass);
}

TEST(Sweep, FlagsBrokenPreconditions) {
  TrialConfig cfg;
  cfg.trials = 1;
  cfg.kinds = {Kind::quad6};
  InequalityInstance broken = make_quad6();
  broken.holder_system[0] = broken.holder_system[1];
  const json rep = sweep(cfg, {broken});
  EXPECT_EQ(rep.at("flagged").size(), 1u);
  EXPECT_FALSE(rep.at("pass").get<bool>());
}

TEST(Sweep, ConfigValidation) {
  TrialConfig cfg;
  cfg.weight_min = 0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = TrialConfig{};
  cfg.axis_size_min = 4;
  cfg.axis_size_max = 2;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = TrialConfig{};
  cfg.seed = 8;
  cfg.kinds = {Kind::blei21, Kind::quad6};
  const TrialConfig back = trial_config_from_json(json::parse(trial_config_to_json(cfg).dump()));
  EXPECT_EQ(trial_config_to_json(back), trial_config_to_json(cfg));
  EXPECT_THROW(trial_config_from_json(json{{"kinds", {"nope"}}}), ValidationError);
}

}  // namespace
}  // namespace mixnorm
