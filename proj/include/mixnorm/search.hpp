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

// Scaling probes, ratio maximization and aggregate sweeps.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mixnorm/catalog.hpp"
#include "mixnorm/documents.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/mixed_norm.hpp"
#include "mixnorm/perm_calculus.hpp"
#include "mixnorm/random.hpp"
#include "mixnorm/rng.hpp"
#include "mixnorm/space.hpp"
#include "mixnorm/verify.hpp"

namespace mixnorm {

// ---- scaling probe ------------------------------------------------------

struct ScalingRow {
  double t = 1.0;
  double analytic = 1.0;   // t^{n (1/p - 1/pbar)}
  double empirical = 1.0;  // evaluated on the discrete indicator family
  double rel_error = 0.0;
};

struct ScalingProbe {
  NormSpec spec;
  Exponent p = Exponent(1);
  Exponent pbar = Exponent(1);
  std::vector<ScalingRow> rows;
};

inline constexpr std::size_t kMaxProbeAtoms = std::size_t{1} << 23;

/// Box of measure t on each axis: ceil(t) atoms of weight 1, the last of
/// weight t - floor(t) when t is fractional.
inline SpacePtr scaling_space(const std::vector<std::string>& axes, double t) {
  if (!(t > 0) || !std::isfinite(t)) throw ValidationError("scaling probe needs t > 0, got " + std::to_string(t));
  const auto atoms = static_cast<std::size_t>(std::ceil(t));
  std::vector<double> w(atoms, 1.0);
  const double frac = t - std::floor(t);
  if (frac > 0) w.back() = frac;
  std::vector<Axis> ax;
  for (const auto& id : axes) ax.push_back({id, w});
  return make_space(std::move(ax));
}

/// Compares ||f||_{L^p} with prod ||f||_{P^s}^{1/m} over the exponent orbit of P
/// for f the indicator of the full box of side t.
inline ScalingProbe scaling_probe(const NormSpec& spec, const Exponent& p, const std::vector<double>& t_grid) {
  if (spec.size() == 0) throw ValidationError("scaling probe needs a nonempty norm spec");
  InequalityInstance inst = make_symmetric(Kind::symmetric_holder, spec.exponents(), spec.axes());
  inst.legs[0].lhs_exponent = p;
  ScalingProbe probe;
  probe.spec = spec;
  probe.p = p;
  probe.pbar = orbit_info(spec).pbar;
  const double n = static_cast<double>(spec.size());
  const double gap = p.reciprocal_value() - probe.pbar.reciprocal_value();
  for (const double t : t_grid) {
    const SpacePtr space = scaling_space(spec.axes(), t);
    if (space->size() > kMaxProbeAtoms) {
      throw ValidationError("scaling probe at t=" + std::to_string(t) + " needs " + std::to_string(space->size()) +
                            " atoms; the limit is " + std::to_string(kMaxProbeAtoms));
    }
    const std::vector<Tensor> f = {Tensor::constant(space, 1.0)};
    const VerificationReport rep = evaluate_instance(inst, f, 0.0, EvalPath::log_domain);
    ScalingRow row;
    row.t = t;
    row.analytic = std::pow(t, n * gap);
    row.empirical = std::exp(rep.log_lhs - rep.log_rhs);
    row.rel_error = std::abs(row.empirical - row.analytic) / row.analytic;
    probe.rows.push_back(row);
  }
  return probe;
}

inline json probe_to_json(const ScalingProbe& probe) {
  json rows = json::array();
  for (const auto& r : probe.rows) {
    rows.push_back({{"t", r.t}, {"analytic", r.analytic}, {"empirical", r.empirical}, {"rel_error", r.rel_error}});
  }
  return {{"spec", normspec_to_json(probe.spec)},
          {"p", probe.p.str()},
          {"pbar", probe.pbar.str()},
          {"pbar_float", probe.pbar.value()},
          {"rows", rows}};
}

inline std::string probe_to_csv(const ScalingProbe& probe) {
  std::string out = "t,analytic,empirical,rel_error\n";
  for (const auto& r : probe.rows) {
    out += json(r.t).dump() + "," + json(r.analytic).dump() + "," + json(r.empirical).dump() + "," +
           json(r.rel_error).dump() + "\n";
  }
  return out;
}

// ---- ratio maximization -------------------------------------------------

struct SearchConfig {
  std::uint64_t seed = 0;
  std::size_t max_evals = 10000;
  std::size_t restarts = 4;     // random starts after the scaling-family seeds
  std::size_t axis_size = 3;
  double weight_min = 1e-6;     // weights are log-spaced over [min, max], endpoints included
  double weight_max = 1e6;
  double value_min = 1e-3;
  double value_max = 1e3;
  double initial_step = 2.0;    // in log(value) units
  double min_step = 1e-3;
  double tolerance = kDefaultTolerance;
  SpacePtr space;               // overrides the generated space

  void validate() const {
    if (max_evals < 1) throw ValidationError("max_evals must be at least 1");
    if (axis_size < 1) throw ValidationError("axis_size must be at least 1");
    if (!(weight_min > 0 && weight_min <= weight_max)) throw ValidationError("weight range must satisfy 0 < min <= max");
    if (!(value_min > 0 && value_min <= value_max)) throw ValidationError("value range must satisfy 0 < min <= max");
    if (!(initial_step > 0 && min_step > 0)) throw ValidationError("search steps must be positive");
  }
};

inline json search_config_to_json(const SearchConfig& c) {
  return {{"seed", c.seed},
          {"max_evals", c.max_evals},
          {"restarts", c.restarts},
          {"axis_size", c.axis_size},
          {"weight_range", {c.weight_min, c.weight_max}},
          {"value_range", {c.value_min, c.value_max}},
          {"initial_step", c.initial_step},
          {"min_step", c.min_step},
          {"tolerance", c.tolerance}};
}

inline SearchConfig search_config_from_json(const json& doc) {
  return detail::guarded("search config", [&] {
    if (!doc.is_object()) throw ValidationError("malformed search config document: expected an object");
    SearchConfig c;
    if (!doc.contains("seed")) throw ValidationError("search config needs a \"seed\"");
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.max_evals = doc.value("max_evals", c.max_evals);
    c.restarts = doc.value("restarts", c.restarts);
    c.axis_size = doc.value("axis_size", c.axis_size);
    if (doc.contains("weight_range")) {
      c.weight_min = doc.at("weight_range").at(0).get<double>();
      c.weight_max = doc.at("weight_range").at(1).get<double>();
    }
    if (doc.contains("value_range")) {
      c.value_min = doc.at("value_range").at(0).get<double>();
      c.value_max = doc.at("value_range").at(1).get<double>();
    }
    c.initial_step = doc.value("initial_step", c.initial_step);
    c.min_step = doc.value("min_step", c.min_step);
    c.tolerance = doc.value("tolerance", c.tolerance);
    c.validate();
    return c;
  });
}

struct SearchResult {
  double best_ratio = 0.0;
  double best_log_ratio = kLogZero;
  std::vector<Tensor> witnesses;
  std::size_t evaluations = 0;
  std::size_t evaluations_to_best = 0;
  VerificationReport report;
};

inline SpacePtr search_space(const InequalityInstance& inst, const SearchConfig& cfg) {
  if (cfg.space) return cfg.space;
  std::vector<double> w;
  if (cfg.axis_size == 1) {
    w.push_back(std::sqrt(cfg.weight_min * cfg.weight_max));
  } else {
    const double lo = std::log(cfg.weight_min);
    const double hi = std::log(cfg.weight_max);
    for (std::size_t i = 0; i < cfg.axis_size; ++i) {
      w.push_back(i == 0 ? cfg.weight_min
                         : i + 1 == cfg.axis_size ? cfg.weight_max
                                                  : std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                                                      static_cast<double>(cfg.axis_size - 1)));
    }
  }
  std::vector<Axis> ax;
  for (const auto& id : inst.axes) ax.push_back({id, w});
  return make_space(std::move(ax));
}

namespace detail {

/// Indicator of the box picking, on every axis, the atoms selected by `pick`.
template <class Pick>
std::vector<double> box_indicator(const ProductSpace& space, Pick pick) {
  std::vector<std::vector<bool>> on;
  for (std::size_t a = 0; a < space.rank(); ++a) on.push_back(pick(space.axis(a)));
  std::vector<double> v(space.size(), 0.0);
  std::vector<std::size_t> idx(space.rank(), 0);
  for (std::size_t flat = 0; flat < v.size(); ++flat) {
    bool inside = true;
    for (std::size_t a = 0; a < space.rank(); ++a) inside = inside && on[a][idx[a]];
    v[flat] = inside ? 1.0 : 0.0;
    for (std::size_t a = space.rank(); a-- > 0;) {
      if (++idx[a] < space.axis(a).size()) break;
      idx[a] = 0;
    }
  }
  return v;
}

inline std::vector<bool> extreme_atom(const Axis& ax, bool smallest) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ax.weights.size(); ++i) {
    if (smallest ? ax.weights[i] < ax.weights[best] : ax.weights[i] > ax.weights[best]) best = i;
  }
  std::vector<bool> on(ax.weights.size(), false);
  on[best] = true;
  return on;
}

}  // namespace detail

/// Multi-start hill climbing on the log ratio lhs/rhs (worst leg). Starts are
/// box indicators from the scaling family, then random log-uniform tensors.
inline SearchResult maximize_ratio(const InequalityInstance& inst, const SearchConfig& cfg) {
  cfg.validate();
  const SpacePtr space = search_space(inst, cfg);
  const std::size_t slots = inst.arity;
  const std::size_t atoms = space->size();
  Rng rng(derive_seed(cfg.seed, {3}));

  using Point = std::vector<std::vector<double>>;  // values per slot
  SearchResult best;
  auto evaluate = [&](const Point& x) {
    std::vector<Tensor> fs;
    for (const auto& v : x) fs.emplace_back(space, v);
    VerificationReport rep = evaluate_instance(inst, fs, cfg.tolerance, EvalPath::log_domain);
    ++best.evaluations;
    double lr = kLogZero;
    if (rep.rhs_zero_violation) {
      lr = std::numeric_limits<double>::infinity();
    } else if (rep.ratio > 0) {
      lr = rep.log_lhs - rep.log_rhs;
    }
    if (best.evaluations == 1 || lr > best.best_log_ratio) {
      best.best_log_ratio = lr;
      best.best_ratio = rep.ratio;
      best.witnesses = std::move(fs);
      best.report = std::move(rep);
      best.evaluations_to_best = best.evaluations;
    }
    return lr;
  };

  std::vector<Point> starts;
  auto broadcast = [&](const std::vector<double>& v) { return Point(slots, v); };
  starts.push_back(broadcast(detail::box_indicator(*space, [](const Axis& a) { return detail::extreme_atom(a, true); })));
  starts.push_back(broadcast(detail::box_indicator(*space, [](const Axis& a) { return detail::extreme_atom(a, false); })));
  starts.push_back(broadcast(std::vector<double>(atoms, 1.0)));
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Point x(slots, std::vector<double>(atoms));
    for (auto& v : x) {
      for (auto& e : v) e = rng.log_uniform(cfg.value_min, cfg.value_max);
    }
    starts.push_back(std::move(x));
  }

  const std::size_t dim = slots * atoms;
  const std::size_t per_start = std::max<std::size_t>(1, cfg.max_evals / starts.size());
  for (const Point& start : starts) {
    if (best.evaluations >= cfg.max_evals) break;
    const std::size_t budget_end = std::min(cfg.max_evals, best.evaluations + per_start);
    Point x = start;
    double fx = evaluate(x);
    double step = cfg.initial_step;
    std::size_t failures = 0;
    while (best.evaluations < budget_end && step >= cfg.min_step && std::isfinite(fx)) {
      Point y = x;
      const auto c = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(dim) - 1));
      double& e = y[c / atoms][c % atoms];
      const double factor = std::exp(rng.chance(0.5) ? step : -step);
      if (e == 0.0) {
        e = rng.chance(0.5) ? 0.0 : std::sqrt(cfg.value_min * cfg.value_max) * factor;
        if (e == 0.0) continue;
      } else if (rng.chance(0.05)) {
        e = 0.0;
      } else {
        e *= factor;
      }
      const double fy = evaluate(y);
      if (fy > fx) {
        x = std::move(y);
        fx = fy;
        failures = 0;
      } else if (++failures >= 2 * dim) {
        step *= 0.5;
        failures = 0;
      }
    }
  }
  return best;
}

inline json search_result_to_json(const SearchResult& r) {
  json w = json::array();
  for (const auto& t : r.witnesses) w.push_back(tensor_to_json(t));
  return {{"best_ratio", detail::finite_or_string(r.best_ratio)},
          {"best_log_ratio", detail::finite_or_string(r.best_log_ratio)},
          {"evaluations", r.evaluations},
          {"evaluations_to_best", r.evaluations_to_best},
          {"report", report_to_json(r.report)},
          {"witnesses", w}};
}

// ---- sweeps -------------------------------------------------------------

struct TrialOutcome {
  Kind kind = Kind::holder_mixed;
  std::uint64_t trial = 0;
  std::vector<std::string> issues;  // precondition failures; not evaluated
  std::optional<VerificationReport> report;
  std::optional<InequalityInstance> instance;  // kept for failures only
  std::vector<Tensor> inputs;                  // kept for failures only
};

namespace detail {

inline TrialOutcome run_trial(const InequalityInstance& inst, const TrialConfig& cfg, std::uint64_t stream,
                              std::uint64_t trial) {
  TrialOutcome out;
  out.kind = inst.kind;
  out.trial = trial;
  out.issues = precondition_issues(inst);
  if (!out.issues.empty()) {
    out.instance = inst;
    return out;
  }
  RandomInputs in = random_inputs(cfg, stream, inst.arity, inst.axes);
  VerificationReport rep = evaluate_instance(inst, in.tensors, cfg.tolerance, EvalPath::log_domain);
  rep.seed = cfg.seed;
  rep.trial = trial;
  if (!rep.pass) {
    out.instance = inst;
    out.inputs = std::move(in.tensors);
  }
  out.report = std::move(rep);
  return out;
}

template <class Job>
void parallel_for(std::size_t count, std::size_t threads, Job job) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < count; i = next++) job(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Random trials for every configured kind, plus any `extra` instances (which
/// are precondition-checked first, like every other instance). The report
/// depends only on the configuration, not on the thread count.
inline json sweep(const TrialConfig& cfg, const std::vector<InequalityInstance>& extra = {}) {
  cfg.validate();
  const auto kinds = cfg.active_kinds();
  const std::size_t random_jobs = kinds.size() * cfg.trials;
  std::vector<TrialOutcome> outcomes(random_jobs + extra.size());
  detail::parallel_for(outcomes.size(), cfg.threads, [&](std::size_t i) {
    if (i < random_jobs) {
      const Kind kind = kinds[i / cfg.trials];
      const std::uint64_t trial = i % cfg.trials;
      const InequalityInstance inst = random_instance(kind, cfg, trial);
      outcomes[i] = detail::run_trial(inst, cfg, (static_cast<std::uint64_t>(kind) << 32) | trial, trial);
    } else {
      const std::uint64_t e = i - random_jobs;
      outcomes[i] = detail::run_trial(extra[e], cfg, (std::uint64_t{0xffff} << 32) | e, e);
    }
  });

  json per_kind = json::object();
  json failures = json::array();
  json flagged = json::array();
  std::size_t total_failures = 0;
  std::map<std::string, double> max_ratio;
  for (const Kind k : kinds) per_kind[kind_name(k)] = {{"trials", 0}, {"max_ratio", 0.0}, {"failures", 0}, {"flagged", 0}};
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const TrialOutcome& o = outcomes[i];
    const bool injected = i >= random_jobs;
    const std::string name = kind_name(o.kind);
    if (!per_kind.contains(name)) per_kind[name] = {{"trials", 0}, {"max_ratio", 0.0}, {"failures", 0}, {"flagged", 0}};
    json& agg = per_kind[name];
    if (!o.issues.empty()) {
      agg["flagged"] = agg["flagged"].get<std::size_t>() + 1;
      ++total_failures;
      flagged.push_back({{"kind", name},
                         {"trial", o.trial},
                         {"injected", injected},
                         {"issues", o.issues},
                         {"instance", instance_to_json(*o.instance)}});
      continue;
    }
    agg["trials"] = agg["trials"].get<std::size_t>() + 1;
    max_ratio[name] = std::max(max_ratio[name], o.report->ratio);
    if (!o.report->pass) {
      agg["failures"] = agg["failures"].get<std::size_t>() + 1;
      ++total_failures;
      json witnesses = json::array();
      for (const auto& t : o.inputs) witnesses.push_back(tensor_to_json(t));
      failures.push_back({{"kind", name},
                          {"trial", o.trial},
                          {"injected", injected},
                          {"instance", instance_to_json(*o.instance)},
                          {"report", report_to_json(*o.report)},
                          {"witnesses", witnesses}});
    }
  }
  for (const auto& [name, r] : max_ratio) per_kind[name]["max_ratio"] = detail::finite_or_string(r);
  return {{"config", trial_config_to_json(cfg)},
          {"kinds", per_kind},
          {"failures", failures},
          {"flagged", flagged},
          {"total_failures", total_failures},
          {"pass", total_failures == 0}};
}

}  // namespace mixnorm
