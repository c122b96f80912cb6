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

// Permutation actions on norm specs and the raise/lower calculus.
//
// A permutation s acts on a spec P in three ways:
//   both       P.s  : column j of the result is column s(j) of P
//   exponents  P^s  : only the exponent row is permuted, axes stay put
//   variables  P_s  : only the axis row is permuted, exponents stay put
//
// s raises P when, for every pair of columns i < j that s reverses, p_i <= p_j.
// Raising permutations never decrease a mixed norm; lowering ones never
// increase it. decompose() produces the adjacent-swap certificate of that
// fact, one swap per inversion.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"
#include "mixnorm/norm_spec.hpp"
#include "mixnorm/permutation.hpp"
#include "mixnorm/rational.hpp"

namespace mixnorm {

enum class Action { both, exponents, variables };
enum class Direction { raise, lower };

inline const char* to_string(Direction d) { return d == Direction::raise ? "raise" : "lower"; }
inline const char* to_string(Action a) {
  switch (a) {
    case Action::both: return "both";
    case Action::exponents: return "exponents";
    case Action::variables: return "variables";
  }
  return "?";
}

inline NormSpec apply_permutation(const NormSpec& spec, const Permutation& s, Action mode = Action::both) {
  if (s.size() != spec.size()) {
    throw ValidationError("permutation of size " + std::to_string(s.size()) + " applied to a spec with " +
                          std::to_string(spec.size()) + " columns");
  }
  std::vector<Column> out;
  out.reserve(spec.size());
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const Column& src = spec[s(j)];
    switch (mode) {
      case Action::both: out.push_back(src); break;
      case Action::exponents: out.push_back({src.p, spec[j].axis}); break;
      case Action::variables: out.push_back({spec[j].p, src.axis}); break;
    }
  }
  return NormSpec(std::move(out));
}

/// First column pair (i, j), 0-based with i < j, that s reverses against
/// the requested direction; nullopt when s raises (lowers) the norm spec.
inline std::optional<std::pair<std::size_t, std::size_t>> direction_witness(const Permutation& s,
                                                                            const NormSpec& spec,
                                                                            Direction dir) {
  if (s.size() != spec.size()) throw ValidationError("permutation and spec differ in size");
  const Permutation inv = s.inverse();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.size(); ++j) {
      if (!(inv(j) < inv(i))) continue;
      const bool ok = dir == Direction::raise ? spec[i].p <= spec[j].p : spec[j].p <= spec[i].p;
      if (!ok) return std::pair{i, j};
    }
  }
  return std::nullopt;
}

inline bool raises(const Permutation& s, const NormSpec& spec) {
  return !direction_witness(s, spec, Direction::raise);
}
inline bool lowers(const Permutation& s, const NormSpec& spec) {
  return !direction_witness(s, spec, Direction::lower);
}

/// The adjacent criterion: swapping columns swap_at and swap_at+1 (1-based)
/// raises `state` iff p_j <= p_{j+1}, lowers it iff p_{j+1} <= p_j.
inline bool adjacent_swap_ok(const NormSpec& state, std::size_t swap_at, Direction dir) {
  if (swap_at < 1 || swap_at >= state.size()) return false;
  const Exponent& left = state[swap_at - 1].p;
  const Exponent& right = state[swap_at].p;
  return dir == Direction::raise ? left <= right : right <= left;
}

struct TraceStep {
  std::size_t swap_at;  // 1-based position j of the transposition (j j+1)
  NormSpec state;       // spec after applying it
  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// Certificate that a permutation raises (lowers) a spec: a chain of
/// adjacent swaps, each of which raises (lowers) the state before it.
struct RaiseTrace {
  Direction direction = Direction::raise;
  NormSpec initial;
  std::vector<TraceStep> steps;

  /// tau_1 tau_2 ... tau_m.
  [[nodiscard]] Permutation composed() const {
    auto s = Permutation::identity(initial.size());
    for (const auto& st : steps) s = s * Permutation::adjacent(initial.size(), st.swap_at - 1);
    return s;
  }

  [[nodiscard]] const NormSpec& final_state() const { return steps.empty() ? initial : steps.back().state; }

  /// Every step passes the adjacent criterion and records the correct state.
  [[nodiscard]] bool valid() const {
    NormSpec cur = initial;
    for (const auto& st : steps) {
      if (!adjacent_swap_ok(cur, st.swap_at, direction)) return false;
      cur = apply_permutation(cur, Permutation::adjacent(cur.size(), st.swap_at - 1));
      if (!(cur == st.state)) return false;
    }
    return true;
  }
};

/// Writes s as tau_1 ... tau_m with each tau_k raising (lowering)
/// P.tau_1...tau_{k-1}. Repeatedly peels the leftmost inverted adjacent pair
/// k off the right of s (s = (s tau_k) tau_k), so m equals the inversion count.
inline RaiseTrace decompose(const Permutation& s, const NormSpec& spec, Direction dir) {
  if (const auto w = direction_witness(s, spec, dir)) {
    const auto [i, j] = *w;
    throw ValidationError(std::string("permutation does not ") + to_string(dir) + " the norm spec: columns (" +
                          std::to_string(i + 1) + "," + std::to_string(j + 1) + ") are reversed with p_" +
                          std::to_string(i + 1) + " = " + spec[i].p.str() + " and p_" + std::to_string(j + 1) +
                          " = " + spec[j].p.str());
  }
  const std::size_t n = s.size();
  std::vector<std::size_t> positions;  // collected right to left
  Permutation cur = s;
  while (!cur.is_identity()) {
    std::size_t k = 0;
    while (!(cur(k + 1) < cur(k))) ++k;
    positions.push_back(k);
    cur = cur * Permutation::adjacent(n, k);
  }
  std::reverse(positions.begin(), positions.end());

  RaiseTrace trace{dir, spec, {}};
  NormSpec state = spec;
  for (const std::size_t k : positions) {
    state = apply_permutation(state, Permutation::adjacent(n, k));
    trace.steps.push_back({k + 1, state});
  }
  return trace;
}

struct SortingPermutations {
  Permutation descending;  // raises P; exponents of P.descending are nonincreasing
  Permutation ascending;   // lowers P; exponents of P.ascending are nondecreasing
};

/// Stable sorts of the exponent row; ties keep their original order.
inline SortingPermutations sorting_permutations(const NormSpec& spec) {
  std::vector<std::size_t> desc(spec.size());
  std::iota(desc.begin(), desc.end(), std::size_t{0});
  std::vector<std::size_t> asc = desc;
  std::stable_sort(desc.begin(), desc.end(), [&](std::size_t a, std::size_t b) { return spec[a].p > spec[b].p; });
  std::stable_sort(asc.begin(), asc.end(), [&](std::size_t a, std::size_t b) { return spec[a].p < spec[b].p; });
  return {Permutation(std::move(desc)), Permutation(std::move(asc))};
}

inline bool is_nonincreasing(const NormSpec& spec) {
  for (std::size_t j = 1; j < spec.size(); ++j) {
    if (spec[j - 1].p < spec[j].p) return false;
  }
  return true;
}

struct OrbitInfo {
  std::vector<Exponent> values;             // distinct exponents, decreasing
  std::vector<std::size_t> multiplicities;  // parallel to values
  std::uint64_t m = 1;                      // n! / (n_1! ... n_r!)
  Exponent pbar = Exponent(1);              // harmonic mean, 1/inf = 0
  bool exact = true;                        // pbar computed in rational arithmetic
};

namespace detail {
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) throw RationalOverflow("binomial overflow");
  }
  return static_cast<std::uint64_t>(r);
}
}  // namespace detail

/// Harmonic mean of exponents: exact when every exponent is rational or inf.
inline Exponent harmonic_mean(const std::vector<Exponent>& ps, bool* exact = nullptr) {
  if (ps.empty()) throw ValidationError("harmonic mean of an empty exponent row");
  const auto n = static_cast<std::int64_t>(ps.size());
  bool all_exact = std::all_of(ps.begin(), ps.end(), [](const Exponent& p) { return p.exact_reciprocal().has_value(); });
  if (exact) *exact = all_exact;
  if (all_exact) {
    Rational s = 0;
    for (const auto& p : ps) s += *p.exact_reciprocal();
    return Exponent::from_reciprocal(s / Rational(n));
  }
  double s = 0.0;
  for (const auto& p : ps) s += p.reciprocal_value();
  if (s == 0.0) return Exponent::infinity();
  return Exponent::real(static_cast<double>(n) / s);
}

inline OrbitInfo orbit_info(const NormSpec& spec) {
  OrbitInfo info;
  std::vector<Exponent> sorted = spec.exponents();
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (const auto& p : sorted) {
    if (info.values.empty() || !(info.values.back() == p)) {
      info.values.push_back(p);
      info.multiplicities.push_back(1);
    } else {
      ++info.multiplicities.back();
    }
  }
  std::uint64_t placed = 0;
  for (const auto nk : info.multiplicities) {
    placed += nk;
    const std::uint64_t c = detail::binomial(placed, nk);
    if (info.m > std::numeric_limits<std::uint64_t>::max() / c) throw RationalOverflow("orbit size overflow");
    info.m *= c;
  }
  info.pbar = harmonic_mean(spec.exponents(), &info.exact);
  return info;
}

/// Distinct permutations of the exponent row over fixed axes (mode exponents),
/// or distinct axis assignments modulo reordering inside equal-exponent blocks
/// (mode variables, which needs a nonincreasing exponent row). Both lists are
/// lexicographic: by exponent row, resp. by axis-id row.
inline std::vector<NormSpec> orbit(const NormSpec& spec, Action mode) {
  const std::size_t n = spec.size();
  std::vector<NormSpec> out;
  if (mode == Action::exponents) {
    const OrbitInfo info = orbit_info(spec);
    // values are decreasing; rank 0 = smallest so next_permutation walks ascending rows
    const std::size_t r = info.values.size();
    std::vector<std::size_t> ranks;
    for (std::size_t k = 0; k < r; ++k) ranks.insert(ranks.end(), info.multiplicities[r - 1 - k], k);
    const auto axes = spec.axes();
    do {
      std::vector<Exponent> row;
      for (const auto k : ranks) row.push_back(info.values[r - 1 - k]);
      out.emplace_back(row, axes);
    } while (std::next_permutation(ranks.begin(), ranks.end()));
    return out;
  }
  if (mode == Action::variables) {
    if (!is_nonincreasing(spec)) {
      throw ValidationError("variable orbit needs a nonincreasing exponent row, got " + spec.str());
    }
    std::vector<std::size_t> block_of(n);
    std::vector<std::size_t> labels;
    for (std::size_t j = 0, b = 0; j < n; ++j) {
      if (j > 0 && !(spec[j].p == spec[j - 1].p)) ++b;
      block_of[j] = b;
      labels.push_back(b);
    }
    const std::size_t blocks = n == 0 ? 0 : block_of.back() + 1;
    const auto exps = spec.exponents();
    do {
      // labels[t] = block receiving the axis in column t; within a block
      // axes keep their column order (the canonical representative).
      std::vector<std::string> row;
      for (std::size_t b = 0; b < blocks; ++b) {
        for (std::size_t t = 0; t < n; ++t) {
          if (labels[t] == b) row.push_back(spec[t].axis);
        }
      }
      out.emplace_back(exps, row);
    } while (std::next_permutation(labels.begin(), labels.end()));
    std::sort(out.begin(), out.end(), [](const NormSpec& a, const NormSpec& b) { return a.axes() < b.axes(); });
    return out;
  }
  throw ValidationError("orbit mode must be exponents or variables");
}

}  // namespace mixnorm
