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

// Mixed norms on finite weighted product spaces.
//
// Each column of a NormSpec reduces one axis of the current array against
// that axis's own atom weights: (sum_a w_a f(a)^p)^(1/p), or max_a f(a) for
// p = inf. Column 0 is reduced first. Two numerically independent routes are
// provided: the direct power-sum route and a log-domain route (log-sum-exp),
// which stays finite for large exponents such as 12th powers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "mixnorm/error.hpp"
#include "mixnorm/norm_spec.hpp"
#include "mixnorm/space.hpp"

namespace mixnorm {

enum class EvalPath { direct, log_domain };

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

namespace detail {

/// Reduces dimension `pos` of a row-major array; `reduce` sees one strided fibre.
template <class Reduce>
std::vector<double> reduce_axis(const std::vector<double>& in, const std::vector<std::size_t>& dims,
                                std::size_t pos, Reduce&& reduce) {
  std::size_t outer = 1;
  std::size_t inner = 1;
  for (std::size_t d = 0; d < pos; ++d) outer *= dims[d];
  for (std::size_t d = pos + 1; d < dims.size(); ++d) inner *= dims[d];
  const std::size_t len = dims[pos];

  std::vector<double> out(outer * inner);
  std::vector<double> fibre(len);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * len * inner + i;
      for (std::size_t a = 0; a < len; ++a) fibre[a] = in[base + a * inner];
      out[o * inner + i] = reduce(std::span<const double>(fibre));
    }
  }
  return out;
}

inline double direct_power_sum(std::span<const double> v, std::span<const double> w, const Exponent& p) {
  if (p.is_infinite()) return *std::max_element(v.begin(), v.end());
  const double e = p.value();
  double s = 0.0;
  if (e == 1.0) {
    for (std::size_t a = 0; a < v.size(); ++a) s += w[a] * v[a];
    return s;
  }
  if (e == 2.0) {
    for (std::size_t a = 0; a < v.size(); ++a) s += w[a] * v[a] * v[a];
    return std::sqrt(s);
  }
  for (std::size_t a = 0; a < v.size(); ++a) {
    if (v[a] > 0.0) s += w[a] * std::pow(v[a], e);
  }
  return s > 0.0 ? std::pow(s, 1.0 / e) : 0.0;
}

/// Log of the weighted p-power mean; kLogZero entries are masked out.
inline double log_power_sum(std::span<const double> l, std::span<const double> log_w, const Exponent& p) {
  if (p.is_infinite()) return *std::max_element(l.begin(), l.end());
  const double e = p.value();
  double peak = kLogZero;
  for (std::size_t a = 0; a < l.size(); ++a) {
    if (l[a] != kLogZero) peak = std::max(peak, e * l[a] + log_w[a]);
  }
  if (peak == kLogZero) return kLogZero;
  double s = 0.0;
  for (std::size_t a = 0; a < l.size(); ++a) {
    if (l[a] != kLogZero) s += std::exp(e * l[a] + log_w[a] - peak);
  }
  return (peak + std::log(s)) / e;
}

template <class Step>
double iterate_columns(std::vector<double> data, const ProductSpace& space, const NormSpec& spec, Step&& step) {
  spec.validate_for(space);
  std::vector<std::size_t> remaining(space.rank());  // space axis index per live dimension
  std::vector<std::size_t> dims = space.shape();
  for (std::size_t a = 0; a < remaining.size(); ++a) remaining[a] = a;

  for (const Column& col : spec) {
    const std::size_t axis = *space.index_of(col.axis);
    const auto pos = static_cast<std::size_t>(std::find(remaining.begin(), remaining.end(), axis) - remaining.begin());
    data = reduce_axis(data, dims, pos, [&](std::span<const double> fibre) { return step(fibre, axis, col.p); });
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pos));
    dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return data.front();
}

inline std::vector<std::vector<double>> log_weights(const ProductSpace& space) {
  std::vector<std::vector<double>> out;
  for (const auto& ax : space.axes()) {
    std::vector<double> lw;
    for (double w : ax.weights) lw.push_back(std::log(w));
    out.push_back(std::move(lw));
  }
  return out;
}

}  // namespace detail

/// Pointwise natural logs, with kLogZero marking zero entries.
inline std::vector<double> log_values(const Tensor& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] > 0.0 ? std::log(f[i]) : kLogZero;
  return out;
}

/// Log of the mixed norm of the function whose pointwise logs are `logs`.
inline double log_mixed_norm_of_logs(std::vector<double> logs, const ProductSpace& space, const NormSpec& spec) {
  if (logs.size() != space.size()) throw ValidationError("log array does not match the space");
  const auto lw = detail::log_weights(space);
  return detail::iterate_columns(std::move(logs), space, spec,
                                 [&](std::span<const double> fibre, std::size_t axis, const Exponent& p) {
                                   return detail::log_power_sum(fibre, lw[axis], p);
                                 });
}

/// log ||f||_P evaluated entirely in the log domain; kLogZero when f == 0.
inline double log_mixed_norm(const Tensor& f, const NormSpec& spec) {
  return log_mixed_norm_of_logs(log_values(f), f.space(), spec);
}

/// ||f||_P.
inline double eval_mixed_norm(const Tensor& f, const NormSpec& spec, EvalPath path = EvalPath::direct) {
  if (path == EvalPath::log_domain) {
    const double l = log_mixed_norm(f, spec);
    return l == kLogZero ? 0.0 : std::exp(l);
  }
  const ProductSpace& space = f.space();
  std::vector<double> data(f.values().begin(), f.values().end());
  return detail::iterate_columns(std::move(data), space, spec,
                                 [&](std::span<const double> fibre, std::size_t axis, const Exponent& p) {
                                   return detail::direct_power_sum(fibre, space.axis(axis).weights, p);
                                 });
}

/// Plain L^p norm over the whole product space.
inline double lp_norm(const Tensor& f, const Exponent& p, EvalPath path = EvalPath::direct) {
  return eval_mixed_norm(f, NormSpec::uniform(p, f.space().ids()), path);
}

/// Measure of every atom of the product space, row-major.
inline std::vector<double> atom_measures(const ProductSpace& space) {
  std::vector<double> out(space.size(), 1.0);
  for (std::size_t a = 0; a < space.rank(); ++a) {
    const auto& w = space.axis(a).weights;
    const std::size_t stride = space.stride(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[(i / stride) % w.size()];
  }
  return out;
}

namespace detail {
inline void require_shared_space(std::span<const Tensor> fs, const char* what) {
  if (fs.empty()) throw ValidationError(std::string(what) + " needs at least one tensor");
  for (std::size_t i = 1; i < fs.size(); ++i) {
    if (!fs[i].same_space(fs[0])) {
      throw ValidationError(std::string(what) + ": tensor " + std::to_string(i) + " is on a different space");
    }
  }
}
}  // namespace detail

/// Integral over the product space of the pointwise product of fs.
inline double integrate_product(std::span<const Tensor> fs) {
  detail::require_shared_space(fs, "integrate_product");
  const auto mu = atom_measures(fs[0].space());
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double v = mu[i];
    for (const Tensor& f : fs) v *= f[i];
    s += v;
  }
  return s;
}

/// Log of the integral of the product of the functions with pointwise logs `logs`.
inline double log_integrate_product_of_logs(std::span<const std::vector<double>> logs, const ProductSpace& space) {
  std::vector<double> terms(space.size(), 0.0);
  const auto mu = atom_measures(space);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    double t = std::log(mu[i]);
    for (const auto& l : logs) {
      if (l[i] == kLogZero) {
        t = kLogZero;
        break;
      }
      t += l[i];
    }
    terms[i] = t;
  }
  double peak = kLogZero;
  for (double t : terms) peak = std::max(peak, t);
  if (peak == kLogZero) return kLogZero;
  double s = 0.0;
  for (double t : terms) {
    if (t != kLogZero) s += std::exp(t - peak);
  }
  return peak + std::log(s);
}

inline double log_integrate_product(std::span<const Tensor> fs) {
  detail::require_shared_space(fs, "integrate_product");
  std::vector<std::vector<double>> logs;
  for (const Tensor& f : fs) logs.push_back(log_values(f));
  return log_integrate_product_of_logs(logs, fs[0].space());
}

/// Pointwise (f_1 ... f_m)^(1/m); zero wherever any factor is zero.
inline Tensor geometric_mean(std::span<const Tensor> fs) {
  detail::require_shared_space(fs, "geometric_mean");
  if (fs.size() == 1) return fs[0];
  const double inv_m = 1.0 / static_cast<double>(fs.size());
  std::vector<double> out(fs[0].size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double l = 0.0;
    bool zero = false;
    for (const Tensor& f : fs) {
      if (f[i] == 0.0) {
        zero = true;
        break;
      }
      l += std::log(f[i]);
    }
    out[i] = zero ? 0.0 : std::exp(l * inv_m);
  }
  return {fs[0].space_ptr(), std::move(out)};
}

}  // namespace mixnorm
