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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixnorm/catalog.hpp"
#include "mixnorm/documents.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/mixed_norm.hpp"
#include "mixnorm/space.hpp"

namespace mixnorm {

inline constexpr double kDefaultTolerance = 1e-8;

struct LegReport {
  double log_lhs = kLogZero;
  double log_rhs = kLogZero;
  double ratio = 0.0;
  bool rhs_zero_violation = false;
};

struct VerificationReport {
  std::string kind;
  double lhs = 0.0;
  double rhs = 0.0;
  double log_lhs = kLogZero;
  double log_rhs = kLogZero;
  double ratio = 0.0;   // lhs / rhs with 0/0 -> 0
  double margin = 0.0;  // rhs - lhs
  bool pass = false;
  bool rhs_zero_violation = false;  // rhs == 0 while lhs > tolerance
  double tolerance = kDefaultTolerance;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trial;
  std::vector<LegReport> legs;
  std::size_t worst_leg = 0;
};

namespace detail {

inline double exp_or_inf(double x) { return x == kLogZero ? 0.0 : std::exp(x); }

inline LegReport finish_leg(double log_lhs, double log_rhs, double tol) {
  LegReport r;
  r.log_lhs = log_lhs;
  r.log_rhs = log_rhs;
  if (log_lhs == kLogZero) {
    r.ratio = 0.0;
  } else if (log_rhs == kLogZero) {
    if (exp_or_inf(log_lhs) <= tol) {
      r.ratio = 0.0;
    } else {
      r.ratio = std::numeric_limits<double>::infinity();
      r.rhs_zero_violation = true;
    }
  } else {
    r.ratio = std::exp(log_lhs - log_rhs);
  }
  return r;
}

inline void check_inputs(const InequalityInstance& inst, std::span<const Tensor> inputs) {
  if (inputs.empty()) throw ValidationError(std::string(kind_name(inst.kind)) + ": no input tensors");
  if (inputs.size() != inst.arity && inputs.size() != 1) {
    throw ValidationError(std::string(kind_name(inst.kind)) + " takes " + std::to_string(inst.arity) +
                          " input tensors (or 1, broadcast), got " + std::to_string(inputs.size()));
  }
  const ProductSpace& space = inputs[0].space();
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    if (!inputs[i].same_space(inputs[0])) {
      throw ValidationError("input tensor " + std::to_string(i + 1) + " lives on a different space than tensor 1");
    }
  }
  auto want = inst.axes;
  auto have = space.ids();
  std::sort(want.begin(), want.end());
  std::sort(have.begin(), have.end());
  if (want != have) {
    throw ValidationError(std::string(kind_name(inst.kind)) + ": input space axes " + json(space.ids()).dump() +
                          " do not match the instance axes " + json(inst.axes).dump());
  }
}

}  // namespace detail

/// Evaluates every leg of the instance; the report describes the worst leg.
/// A single input is broadcast to every slot.
inline VerificationReport evaluate_instance(const InequalityInstance& inst, std::span<const Tensor> inputs,
                                            double tol = kDefaultTolerance, EvalPath path = EvalPath::log_domain) {
  detail::check_inputs(inst, inputs);
  const ProductSpace& space = inputs[0].space();
  auto input = [&](std::size_t slot) -> const Tensor& { return inputs.size() == 1 ? inputs[0] : inputs[slot]; };

  std::vector<std::vector<double>> logs;
  for (const auto& f : inputs) logs.push_back(log_values(f));
  auto log_of = [&](std::size_t slot) -> const std::vector<double>& { return inputs.size() == 1 ? logs[0] : logs[slot]; };

  auto log_norm = [&](std::size_t slot, const NormSpec& spec) {
    if (path == EvalPath::log_domain) return log_mixed_norm_of_logs(log_of(slot), space, spec);
    const double v = eval_mixed_norm(input(slot), spec, EvalPath::direct);
    return v == 0.0 ? kLogZero : std::log(v);
  };

  VerificationReport rep;
  rep.kind = kind_name(inst.kind);
  rep.tolerance = tol;
  for (const Leg& leg : inst.legs) {
    // one left-hand factor per right-hand norm, so broadcast inputs repeat
    std::vector<std::size_t> factors;
    for (const NormFactor& f : leg.rhs) factors.push_back(f.slot);
    double log_lhs = kLogZero;
    switch (leg.form) {
      case LhsForm::integral_of_product: {
        if (path == EvalPath::log_domain) {
          std::vector<std::vector<double>> parts;
          for (const auto s : factors) parts.push_back(log_of(s));
          log_lhs = log_integrate_product_of_logs(parts, space);
        } else {
          std::vector<Tensor> parts;
          for (const auto s : factors) parts.push_back(input(s));
          const double v = integrate_product(parts);
          log_lhs = v == 0.0 ? kLogZero : std::log(v);
        }
        break;
      }
      case LhsForm::geometric_mean_lp: {
        const NormSpec lp = NormSpec::uniform(leg.lhs_exponent, space.ids());
        if (path == EvalPath::log_domain) {
          std::vector<double> g(space.size(), 0.0);
          for (std::size_t i = 0; i < g.size(); ++i) {
            double acc = 0.0;
            for (const auto s : factors) {
              const double l = log_of(s)[i];
              if (l == kLogZero) {
                acc = kLogZero;
                break;
              }
              acc += l;
            }
            g[i] = acc == kLogZero ? kLogZero : acc / static_cast<double>(factors.size());
          }
          log_lhs = log_mixed_norm_of_logs(std::move(g), space, lp);
        } else {
          std::vector<Tensor> parts;
          for (const auto s : factors) parts.push_back(input(s));
          const double v = eval_mixed_norm(geometric_mean(parts), lp, EvalPath::direct);
          log_lhs = v == 0.0 ? kLogZero : std::log(v);
        }
        break;
      }
      case LhsForm::mixed_norm: log_lhs = log_norm(leg.lhs_slot, leg.lhs_spec); break;
    }
    double log_rhs = 0.0;
    for (const NormFactor& f : leg.rhs) {
      const double l = log_norm(f.slot, f.spec);
      if (l == kLogZero) {
        log_rhs = kLogZero;
        break;
      }
      log_rhs += f.power.to_double() * l;
    }
    rep.legs.push_back(detail::finish_leg(log_lhs, log_rhs, tol));
  }

  for (std::size_t l = 1; l < rep.legs.size(); ++l) {
    const auto& a = rep.legs[l];
    const auto& b = rep.legs[rep.worst_leg];
    if (a.rhs_zero_violation > b.rhs_zero_violation || a.ratio > b.ratio) rep.worst_leg = l;
  }
  const LegReport& w = rep.legs[rep.worst_leg];
  rep.log_lhs = w.log_lhs;
  rep.log_rhs = w.log_rhs;
  rep.lhs = detail::exp_or_inf(w.log_lhs);
  rep.rhs = detail::exp_or_inf(w.log_rhs);
  rep.ratio = w.ratio;
  rep.margin = rep.rhs - rep.lhs;
  rep.rhs_zero_violation = std::any_of(rep.legs.begin(), rep.legs.end(), [](const LegReport& r) { return r.rhs_zero_violation; });
  rep.pass = !rep.rhs_zero_violation &&
             std::all_of(rep.legs.begin(), rep.legs.end(), [&](const LegReport& r) { return r.ratio <= 1.0 + tol; });
  return rep;
}

inline VerificationReport evaluate_instance(const InequalityInstance& inst, const std::vector<Tensor>& inputs,
                                            double tol = kDefaultTolerance, EvalPath path = EvalPath::log_domain) {
  return evaluate_instance(inst, std::span<const Tensor>(inputs), tol, path);
}

namespace detail {
/// JSON has no infinities; they are written as the strings "inf" / "-inf".
inline json finite_or_string(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  return x;
}
}  // namespace detail

inline json report_to_json(const VerificationReport& r) {
  json legs = json::array();
  for (const auto& l : r.legs) {
    legs.push_back({{"log_lhs", detail::finite_or_string(l.log_lhs)},
                    {"log_rhs", detail::finite_or_string(l.log_rhs)},
                    {"ratio", detail::finite_or_string(l.ratio)},
                    {"rhs_zero_violation", l.rhs_zero_violation}});
  }
  json out = {{"kind", r.kind},
              {"lhs", detail::finite_or_string(r.lhs)},
              {"rhs", detail::finite_or_string(r.rhs)},
              {"log_lhs", detail::finite_or_string(r.log_lhs)},
              {"log_rhs", detail::finite_or_string(r.log_rhs)},
              {"ratio", detail::finite_or_string(r.ratio)},
              {"margin", detail::finite_or_string(r.margin)},
              {"pass", r.pass},
              {"rhs_zero_violation", r.rhs_zero_violation},
              {"tolerance", r.tolerance},
              {"seed", r.seed ? json(*r.seed) : json(nullptr)},
              {"trial", r.trial ? json(*r.trial) : json(nullptr)},
              {"worst_leg", r.worst_leg + 1},
              {"legs", legs}};
  return out;
}

}  // namespace mixnorm
