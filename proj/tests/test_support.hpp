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

// Independent oracles and small generators shared by the unit tests.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mixnorm/mixnorm.hpp"

namespace mixnorm::testing {

/// Mixed norm by explicit recursion on the outermost column, over full
/// multi-indices. Shares no code with the library's reduction.
inline double oracle_mixed_norm(const Tensor& f, const NormSpec& spec) {
  const ProductSpace& space = f.space();
  const std::size_t n = space.rank();
  std::vector<std::size_t> idx(n, 0);
  std::function<double(std::size_t)> level = [&](std::size_t c) -> double {
    if (c == static_cast<std::size_t>(-1)) {
      std::size_t flat = 0;
      for (std::size_t a = 0; a < n; ++a) flat = flat * space.axis(a).size() + idx[a];
      return f[flat];
    }
    const Column& col = spec[c];
    const std::size_t a = *space.index_of(col.axis);
    const Axis& ax = space.axis(a);
    if (col.p.is_infinite()) {
      double m = 0.0;
      for (std::size_t i = 0; i < ax.size(); ++i) {
        idx[a] = i;
        m = std::max(m, level(c - 1));
      }
      return m;
    }
    const double p = col.p.value();
    long double s = 0.0L;
    for (std::size_t i = 0; i < ax.size(); ++i) {
      idx[a] = i;
      s += static_cast<long double>(ax.weights[i]) * std::pow(static_cast<long double>(level(c - 1)), p);
    }
    return static_cast<double>(std::pow(s, 1.0L / p));
  };
  return level(spec.size() - 1);
}

inline SpacePtr random_space(Rng& rng, std::size_t n, std::size_t max_size = 3, double wlo = 0.1, double whi = 10.0) {
  std::vector<Axis> axes;
  for (std::size_t a = 0; a < n; ++a) {
    Axis ax{"x" + std::to_string(a + 1), {}};
    const auto size = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(max_size)));
    for (std::size_t i = 0; i < size; ++i) ax.weights.push_back(rng.log_uniform(wlo, whi));
    axes.push_back(std::move(ax));
  }
  return make_space(std::move(axes));
}

inline Tensor random_tensor(Rng& rng, const SpacePtr& space, double lo = 0.01, double hi = 10.0, double zero_p = 0.0) {
  std::vector<double> v(space->size());
  for (auto& x : v) x = rng.chance(zero_p) ? 0.0 : rng.log_uniform(lo, hi);
  return {space, std::move(v)};
}

/// Exponent row drawn from a small pool so that ties are frequent.
inline std::vector<Exponent> random_exponent_row(Rng& rng, std::size_t n, bool allow_infinite = true) {
  std::vector<Exponent> pool = {Exponent(1), Exponent(2), Exponent(3), Exponent(Rational(3, 2)), Exponent(Rational(1, 2))};
  if (allow_infinite) pool.push_back(Exponent::infinity());
  std::vector<Exponent> row;
  for (std::size_t i = 0; i < n; ++i) row.push_back(pool[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(pool.size()) - 1))]);
  return row;
}

inline NormSpec spec_of(std::vector<Exponent> p) { return {p, NormSpec::default_axes(p.size())}; }

/// Relative difference with a floor of 1 on the scale.
inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace mixnorm::testing
