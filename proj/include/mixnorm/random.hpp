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

// Seeded random trials: configurations, input tensors and instances.
// Every draw is a pure function of (master seed, trial index, stream).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mixnorm/catalog.hpp"
#include "mixnorm/documents.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/rng.hpp"
#include "mixnorm/space.hpp"
#include "mixnorm/subset_system.hpp"

namespace mixnorm {

struct TrialConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 500;
  std::size_t axis_size_min = 1;
  std::size_t axis_size_max = 5;
  std::size_t n_min = 1;
  std::size_t n_max = 5;
  double weight_min = 1e-3;
  double weight_max = 1e3;
  double value_min = 1e-2;
  double value_max = 1e2;
  double zero_probability = 0.0;  // chance that a tensor entry is exactly 0
  double tolerance = 1e-8;
  std::vector<Kind> kinds;  // empty: every kind
  std::size_t threads = 1;  // scheduling only; never affects results

  void validate() const {
    if (trials < 1) throw ValidationError("trial count must be at least 1");
    if (axis_size_min < 1 || axis_size_min > axis_size_max) throw ValidationError("axis-size range must satisfy 1 <= min <= max");
    if (n_min < 1 || n_min > n_max) throw ValidationError("n range must satisfy 1 <= min <= max");
    if (!(weight_min > 0 && weight_min <= weight_max)) throw ValidationError("weight range must satisfy 0 < min <= max");
    if (!(value_min > 0 && value_min <= value_max)) throw ValidationError("value range must satisfy 0 < min <= max");
    if (!(zero_probability >= 0 && zero_probability <= 1)) throw ValidationError("zero probability must lie in [0, 1]");
    if (!(tolerance >= 0)) throw ValidationError("tolerance must be nonnegative");
    if (threads < 1) throw ValidationError("thread count must be at least 1");
  }

  [[nodiscard]] std::vector<Kind> active_kinds() const {
    if (kinds.empty()) return {kAllKinds.begin(), kAllKinds.end()};
    return kinds;
  }
};

/// Thread count is left out: reports must not depend on it.
inline json trial_config_to_json(const TrialConfig& c) {
  json kinds = json::array();
  for (const Kind k : c.active_kinds()) kinds.push_back(kind_name(k));
  return {{"seed", c.seed},
          {"trials", c.trials},
          {"axis_size", {c.axis_size_min, c.axis_size_max}},
          {"n", {c.n_min, c.n_max}},
          {"weight_range", {c.weight_min, c.weight_max}},
          {"value_range", {c.value_min, c.value_max}},
          {"zero_probability", c.zero_probability},
          {"tolerance", c.tolerance},
          {"kinds", kinds}};
}

inline TrialConfig trial_config_from_json(const json& doc) {
  return detail::guarded("sweep config", [&] {
    if (!doc.is_object()) throw ValidationError("malformed sweep config document: expected an object");
    TrialConfig c;
    if (!doc.contains("seed")) throw ValidationError("sweep config needs a \"seed\"");
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.trials = doc.value("trials", c.trials);
    auto range = [&](const char* key, auto& lo, auto& hi) {
      if (!doc.contains(key)) return;
      const auto& r = doc.at(key);
      if (!r.is_array() || r.size() != 2) throw ValidationError(std::string("\"") + key + "\" must be a [min, max] pair");
      lo = r[0].get<std::remove_reference_t<decltype(lo)>>();
      hi = r[1].get<std::remove_reference_t<decltype(hi)>>();
    };
    range("axis_size", c.axis_size_min, c.axis_size_max);
    range("n", c.n_min, c.n_max);
    range("weight_range", c.weight_min, c.weight_max);
    range("value_range", c.value_min, c.value_max);
    c.zero_probability = doc.value("zero_probability", c.zero_probability);
    c.tolerance = doc.value("tolerance", c.tolerance);
    if (doc.contains("kinds")) {
      for (const auto& k : doc.at("kinds")) c.kinds.push_back(kind_from_name(k.get<std::string>()));
    }
    c.threads = doc.value("threads", c.threads);
    c.validate();
    return c;
  });
}

struct RandomInputs {
  SpacePtr space;
  std::vector<Tensor> tensors;
};

/// Space over `axes` plus `arity` tensors; weights and values log-uniform.
inline RandomInputs random_inputs(const TrialConfig& cfg, std::uint64_t trial, std::size_t arity,
                                  const std::vector<std::string>& axes) {
  Rng rng(derive_seed(cfg.seed, {trial, 1}));
  std::vector<Axis> ax;
  for (const auto& id : axes) {
    const auto size = static_cast<std::size_t>(
        rng.integer(static_cast<std::int64_t>(cfg.axis_size_min), static_cast<std::int64_t>(cfg.axis_size_max)));
    Axis a{id, {}};
    for (std::size_t i = 0; i < size; ++i) a.weights.push_back(rng.log_uniform(cfg.weight_min, cfg.weight_max));
    ax.push_back(std::move(a));
  }
  RandomInputs out;
  out.space = make_space(std::move(ax));
  for (std::size_t t = 0; t < arity; ++t) {
    std::vector<double> v(out.space->size());
    for (auto& x : v) {
      const bool zero = cfg.zero_probability > 0 && rng.chance(cfg.zero_probability);
      const double draw = rng.log_uniform(cfg.value_min, cfg.value_max);
      x = zero ? 0.0 : draw;
    }
    out.tensors.emplace_back(out.space, std::move(v));
  }
  return out;
}

namespace detail {

/// a/b with a in [1,12], b in [1,4]; occasionally inf.
inline Exponent random_exponent(Rng& rng, bool allow_infinite = true) {
  if (allow_infinite && rng.chance(0.08)) return Exponent::infinity();
  return Exponent(Rational(rng.integer(1, 12), rng.integer(1, 4)));
}

/// Small exponent pool so that ties (equal exponents) are common.
inline std::vector<Exponent> random_row(Rng& rng, std::size_t n) {
  std::vector<Exponent> pool;
  const auto distinct = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(n)));
  for (std::size_t i = 0; i < distinct; ++i) pool.push_back(random_exponent(rng));
  std::vector<Exponent> row;
  for (std::size_t i = 0; i < n; ++i) row.push_back(pool[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(distinct) - 1))]);
  return row;
}

/// Nonnegative integers b_1..b_len with sum <= D (sum == D when `exact`).
inline std::vector<std::int64_t> random_parts(Rng& rng, std::size_t len, std::int64_t D, bool exact) {
  std::vector<std::int64_t> b(len, 0);
  const std::int64_t total = exact ? D : rng.integer(0, D);
  for (std::int64_t u = 0; u < total; ++u) ++b[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(len) - 1))];
  return b;
}

inline std::vector<Exponent> random_q(Rng& rng, std::size_t len) {
  const std::int64_t D = rng.integer(static_cast<std::int64_t>(std::max<std::size_t>(len, 1)), 24);
  std::vector<Exponent> q;
  for (const auto bj : random_parts(rng, len, D, false)) q.push_back(Exponent::from_reciprocal(Rational(bj, D)));
  return q;
}

/// Composes random adjacent swaps that each pass the criterion for `dir`.
inline Permutation random_monotone_permutation(Rng& rng, const NormSpec& spec, Direction dir) {
  const std::size_t n = spec.size();
  Permutation cur = Permutation::identity(n);
  if (n < 2) return cur;
  const auto steps = rng.integer(0, static_cast<std::int64_t>(n * n));
  for (std::int64_t s = 0; s < steps; ++s) {
    const NormSpec state = apply_permutation(spec, cur);
    std::vector<std::size_t> ok;
    for (std::size_t k = 1; k < n; ++k) {
      if (adjacent_swap_ok(state, k, dir)) ok.push_back(k);
    }
    if (ok.empty()) break;
    const std::size_t k = ok[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(ok.size()) - 1))];
    const Permutation next = cur * Permutation::adjacent(n, k - 1);
    if (direction_witness(next, spec, dir)) continue;  // undoing an earlier swap of tied exponents
    cur = next;
  }
  return cur;
}

inline std::size_t draw_n(Rng& rng, const TrialConfig& cfg, std::size_t lo, std::size_t hi) {
  lo = std::max(lo, cfg.n_min);
  hi = std::min(hi, cfg.n_max);
  if (lo > hi) {
    throw ValidationError("configured n range [" + std::to_string(cfg.n_min) + ", " + std::to_string(cfg.n_max) +
                          "] is empty for this kind");
  }
  return static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

}  // namespace detail

/// A valid random parameterization of `kind` for trial `trial`.
inline InequalityInstance random_instance(Kind kind, const TrialConfig& cfg, std::uint64_t trial) {
  Rng rng(derive_seed(cfg.seed, {trial, 2, static_cast<std::uint64_t>(kind)}));
  switch (kind) {
    case Kind::holder_mixed: {
      const std::size_t n = detail::draw_n(rng, cfg, 1, 5);
      const auto m = static_cast<std::size_t>(rng.integer(1, 4));
      std::vector<std::vector<Exponent>> rows(m, std::vector<Exponent>(n, Exponent(1)));
      for (std::size_t j = 0; j < n; ++j) {
        const std::int64_t D = rng.integer(1, 12);
        const auto parts = detail::random_parts(rng, m, D, true);
        for (std::size_t i = 0; i < m; ++i) rows[i][j] = Exponent::from_reciprocal(Rational(parts[i], D));
      }
      return make_holder_mixed(rows);
    }
    case Kind::minkowski_raise: {
      const std::size_t n = detail::draw_n(rng, cfg, 1, 5);
      const NormSpec spec(detail::random_row(rng, n), NormSpec::default_axes(n));
      const Direction dir = rng.chance(0.5) ? Direction::raise : Direction::lower;
      return make_minkowski(spec.exponents(), detail::random_monotone_permutation(rng, spec, dir), dir);
    }
    case Kind::sorted_sandwich: return make_sorted_sandwich(detail::random_row(rng, detail::draw_n(rng, cfg, 1, 5)));
    case Kind::symmetric_holder:
    case Kind::symmetric_gm:
    case Kind::symmetric_gm1: {
      auto row = detail::random_row(rng, detail::draw_n(rng, cfg, 1, 4));
      if (kind != Kind::symmetric_holder) std::sort(row.begin(), row.end(), std::greater<>());
      return make_symmetric(kind, row);
    }
    case Kind::littlewood43:
      detail::draw_n(rng, cfg, 2, 2);  // checks that n = 2 is allowed
      return make_littlewood43();
    case Kind::blei21:
    case Kind::blei_qp: {
      const auto J = static_cast<std::int64_t>(detail::draw_n(rng, cfg, 2, 5));
      const auto K = rng.integer(1, J - 1);
      if (kind == Kind::blei21) return make_blei21(J, K);
      Exponent p = detail::random_exponent(rng, false);
      Exponent q = detail::random_exponent(rng);
      while (!(p < q)) {
        p = detail::random_exponent(rng, false);
        q = detail::random_exponent(rng);
      }
      return make_blei_qp(J, K, p, q);
    }
    case Kind::popa_sinnamon_first:
    case Kind::popa_sinnamon_second: {
      const std::size_t n = detail::draw_n(rng, cfg, 2, 5);
      return make_popa_sinnamon(kind == Kind::popa_sinnamon_second, detail::random_q(rng, n));
    }
    case Kind::blei_ps: {
      const std::size_t n = detail::draw_n(rng, cfg, 2, 5);
      const auto k = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(n) - 1));
      const auto c = rng.chance(0.25) ? uniform_coefficients(n, k) : random_feasible_coefficients(n, k, rng.next());
      return make_blei_ps(n, k, detail::random_q(rng, detail::binomial(n, k)), c);
    }
    case Kind::quad6:
      detail::draw_n(rng, cfg, 4, 4);
      return make_quad6();
  }
  throw ValidationError("unhandled kind");
}

}  // namespace mixnorm
