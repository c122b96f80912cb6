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

// Catalog of mixed-norm inequalities, each generated from exponent data.
//
// An instance is a list of legs; each leg states
//     lhs <= prod_i ||f_{slot_i}||_{P_i}^{power_i}
// where lhs is one of
//     integral_of_product   int f_0 ... f_{arity-1}
//     geometric_mean_lp     || (f_0 ... f_{arity-1})^{1/arity} ||_{L^p}
//     mixed_norm            ||f_slot||_{P}
// Most kinds have one leg; the sorted sandwich has two. Every derived
// exponent is computed in exact rational arithmetic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixnorm/documents.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"
#include "mixnorm/norm_spec.hpp"
#include "mixnorm/perm_calculus.hpp"
#include "mixnorm/permutation.hpp"
#include "mixnorm/rational.hpp"
#include "mixnorm/subset_system.hpp"

namespace mixnorm {

enum class Kind {
  holder_mixed,
  minkowski_raise,
  sorted_sandwich,
  symmetric_holder,
  symmetric_gm,
  symmetric_gm1,
  littlewood43,
  blei21,
  blei_qp,
  popa_sinnamon_first,
  popa_sinnamon_second,
  blei_ps,
  quad6,
};

inline constexpr std::array<Kind, 13> kAllKinds = {
    Kind::holder_mixed,        Kind::minkowski_raise,      Kind::sorted_sandwich, Kind::symmetric_holder,
    Kind::symmetric_gm,        Kind::symmetric_gm1,        Kind::littlewood43,    Kind::blei21,
    Kind::blei_qp,             Kind::popa_sinnamon_first,  Kind::popa_sinnamon_second, Kind::blei_ps,
    Kind::quad6,
};

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::holder_mixed: return "holder_mixed";
    case Kind::minkowski_raise: return "minkowski_raise";
    case Kind::sorted_sandwich: return "sorted_sandwich";
    case Kind::symmetric_holder: return "symmetric_holder";
    case Kind::symmetric_gm: return "symmetric_gm";
    case Kind::symmetric_gm1: return "symmetric_gm1";
    case Kind::littlewood43: return "littlewood43";
    case Kind::blei21: return "blei21";
    case Kind::blei_qp: return "blei_qp";
    case Kind::popa_sinnamon_first: return "popa_sinnamon_first";
    case Kind::popa_sinnamon_second: return "popa_sinnamon_second";
    case Kind::blei_ps: return "blei_ps";
    case Kind::quad6: return "quad6";
  }
  return "?";
}

inline Kind kind_from_name(const std::string& name) {
  for (const Kind k : kAllKinds) {
    if (name == kind_name(k)) return k;
  }
  std::string known;
  for (const Kind k : kAllKinds) known += std::string(known.empty() ? "" : ", ") + kind_name(k);
  throw ValidationError("unknown inequality kind '" + name + "' (known: " + known + ")");
}

// ---- Hölder systems -----------------------------------------------------

struct HolderCheck {
  bool ok = false;
  bool exact = false;
  std::vector<std::string> axes;
  std::vector<double> residuals;          // per axis: sum_i 1/p_{i,j} - 1
  std::vector<Rational> exact_residuals;  // filled when exact
};

/// sum_i 1/p_{i,j} == 1 for every axis j (exactly, or within 1e-12 when
/// some exponent is floating). Specs may list the axes in different orders.
inline HolderCheck check_holder_system(const std::vector<NormSpec>& specs) {
  if (specs.empty()) throw ValidationError("Hölder system needs at least one spec");
  HolderCheck chk;
  chk.axes = specs[0].axes();
  std::sort(chk.axes.begin(), chk.axes.end());
  for (std::size_t i = 1; i < specs.size(); ++i) {
    auto ax = specs[i].axes();
    std::sort(ax.begin(), ax.end());
    if (ax != chk.axes) throw ValidationError("Hölder system spec " + std::to_string(i + 1) + " is over different axes");
  }
  chk.exact = true;
  for (const auto& s : specs) {
    for (const auto& c : s) chk.exact = chk.exact && c.p.exact_reciprocal().has_value();
  }
  chk.ok = true;
  for (const auto& axis : chk.axes) {
    Rational er = -1;
    double r = -1.0;
    for (const auto& s : specs) {
      for (const auto& c : s) {
        if (c.axis != axis) continue;
        r += c.p.reciprocal_value();
        if (chk.exact) er += *c.p.exact_reciprocal();
      }
    }
    if (chk.exact) {
      chk.exact_residuals.push_back(er);
      chk.residuals.push_back(er.to_double());
      chk.ok = chk.ok && er.is_zero();
    } else {
      chk.residuals.push_back(r);
      chk.ok = chk.ok && std::abs(r) <= 1e-12;
    }
  }
  return chk;
}

// ---- instances ----------------------------------------------------------

enum class LhsForm { integral_of_product, geometric_mean_lp, mixed_norm };

struct NormFactor {
  NormSpec spec;
  Rational power;
  std::size_t slot = 0;
};

struct Leg {
  LhsForm form = LhsForm::integral_of_product;
  Exponent lhs_exponent = Exponent(1);  // geometric_mean_lp
  NormSpec lhs_spec;                    // mixed_norm
  std::size_t lhs_slot = 0;             // mixed_norm
  std::vector<NormFactor> rhs;
};

struct InequalityInstance {
  Kind kind = Kind::holder_mixed;
  std::vector<std::string> axes;
  std::size_t arity = 1;  // number of input functions; 1 may always be broadcast
  json params = json::object();
  json derived = json::object();
  std::vector<Leg> legs;
  std::vector<NormSpec> holder_system;  // system the inequality rests on, when there is one
};

namespace detail {

inline json rational_pair(const Rational& r) { return {{"exact", r.str()}, {"float", r.to_double()}}; }

inline json exponent_pair(const Exponent& p) {
  if (p.is_infinite()) return {{"exact", "inf"}, {"float", "inf"}};
  return {{"exact", p.str()}, {"float", p.value()}};
}

inline json float_mirror(const std::vector<Exponent>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(p.is_infinite() ? json("inf") : json(p.value()));
  return out;
}

inline json float_mirror(const std::vector<Rational>& rs) {
  json out = json::array();
  for (const auto& r : rs) out.push_back(r.to_double());
  return out;
}

inline const char* form_name(LhsForm f) {
  switch (f) {
    case LhsForm::integral_of_product: return "integral_of_product";
    case LhsForm::geometric_mean_lp: return "geometric_mean_lp";
    case LhsForm::mixed_norm: return "mixed_norm";
  }
  return "?";
}

inline json legs_to_json(const std::vector<Leg>& legs) {
  json out = json::array();
  for (const auto& leg : legs) {
    json lhs = {{"form", form_name(leg.form)}};
    if (leg.form == LhsForm::geometric_mean_lp) lhs["p"] = exponent_pair(leg.lhs_exponent);
    if (leg.form == LhsForm::mixed_norm) {
      lhs["spec"] = normspec_to_json(leg.lhs_spec);
      lhs["slot"] = leg.lhs_slot;
    }
    json rhs = json::array();
    for (const auto& f : leg.rhs) rhs.push_back({{"spec", normspec_to_json(f.spec)}, {"power", f.power.str()}, {"slot", f.slot}});
    out.push_back({{"lhs", lhs}, {"rhs", rhs}});
  }
  return out;
}

inline std::vector<std::string> axes_param(const json& params, std::size_t n) {
  if (params.contains("axes")) {
    auto axes = params.at("axes").get<std::vector<std::string>>();
    if (axes.size() != n) throw ValidationError("\"axes\" lists " + std::to_string(axes.size()) + " ids, expected " + std::to_string(n));
    return axes;
  }
  return NormSpec::default_axes(n);
}

inline Rational exact_reciprocal_or_throw(const Exponent& p, const char* what) {
  auto r = p.exact_reciprocal();
  if (!r) throw ValidationError(std::string(what) + " needs exact exponents; " + p.str() + " has no exact value");
  return *r;
}

inline void finish(InequalityInstance& inst) {
  inst.derived["n"] = inst.axes.size();
  inst.derived["arity"] = inst.arity;
  inst.derived["axes"] = inst.axes;
  inst.derived["legs"] = legs_to_json(inst.legs);
  if (!inst.holder_system.empty()) {
    json hs = json::array();
    for (const auto& s : inst.holder_system) hs.push_back(normspec_to_json(s));
    inst.derived["holder_system"] = hs;
  }
}

inline json subsets_to_json(const std::vector<Subset>& subsets) {
  json out = json::array();
  for (const auto& s : subsets) {
    json one = json::array();
    for (const auto j : s) one.push_back(j + 1);
    out.push_back(one);
  }
  return out;
}

}  // namespace detail

// ---- builders -----------------------------------------------------------

/// int f_1...f_m <= prod ||f_i||_{P_i} for a coordinatewise Hölder system.
inline InequalityInstance make_holder_mixed(const std::vector<std::vector<Exponent>>& rows,
                                            std::vector<std::string> axes = {}) {
  if (rows.empty()) throw ValidationError("holder_mixed needs at least one exponent row");
  const std::size_t n = rows[0].size();
  if (axes.empty()) axes = NormSpec::default_axes(n);
  InequalityInstance inst;
  inst.kind = Kind::holder_mixed;
  inst.axes = axes;
  inst.arity = rows.size();
  Leg leg;
  json prow = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) throw ValidationError("holder_mixed exponent rows differ in length");
    NormSpec spec(rows[i], axes);
    inst.holder_system.push_back(spec);
    leg.rhs.push_back({spec, Rational(1), i});
    prow.push_back(exponent_list_to_json(rows[i]));
  }
  const HolderCheck chk = check_holder_system(inst.holder_system);
  if (!chk.ok) {
    for (std::size_t j = 0; j < chk.axes.size(); ++j) {
      if (chk.exact ? !chk.exact_residuals[j].is_zero() : std::abs(chk.residuals[j]) > 1e-12) {
        throw ValidationError("holder_mixed: reciprocal exponents on axis '" + chk.axes[j] +
                              "' do not sum to 1 (residual " +
                              (chk.exact ? chk.exact_residuals[j].str() : std::to_string(chk.residuals[j])) + ")");
      }
    }
  }
  inst.legs.push_back(std::move(leg));
  inst.params = {{"exponents", prow}, {"axes", axes}};
  detail::finish(inst);
  return inst;
}

/// ||f||_P <= ||f||_{P.s} for s raising P, or ||f||_{P.s} <= ||f||_P for s lowering P.
inline InequalityInstance make_minkowski(const std::vector<Exponent>& p, const Permutation& s, Direction dir,
                                         std::vector<std::string> axes = {}) {
  if (axes.empty()) axes = NormSpec::default_axes(p.size());
  const NormSpec spec(p, axes);
  const RaiseTrace trace = decompose(s, spec, dir);  // throws with a witness pair
  const NormSpec moved = apply_permutation(spec, s);
  InequalityInstance inst;
  inst.kind = Kind::minkowski_raise;
  inst.axes = axes;
  inst.arity = 1;
  Leg leg;
  leg.form = LhsForm::mixed_norm;
  leg.lhs_spec = dir == Direction::raise ? spec : moved;
  leg.rhs.push_back({dir == Direction::raise ? moved : spec, Rational(1), 0});
  inst.legs.push_back(std::move(leg));
  inst.params = {{"p", exponent_list_to_json(p)}, {"sigma", s.one_based()}, {"direction", to_string(dir)}, {"axes", axes}};
  inst.derived["target"] = normspec_to_json(moved);
  inst.derived["inversions"] = s.inversions();
  inst.derived["trace"] = trace_to_json(trace);
  detail::finish(inst);
  return inst;
}

/// ||f||_{P.rho} <= ||f||_P <= ||f||_{P.sigma} with sigma, rho the stable sorts.
inline InequalityInstance make_sorted_sandwich(const std::vector<Exponent>& p, std::vector<std::string> axes = {}) {
  if (axes.empty()) axes = NormSpec::default_axes(p.size());
  const NormSpec spec(p, axes);
  const auto sorts = sorting_permutations(spec);
  const NormSpec up = apply_permutation(spec, sorts.descending);
  const NormSpec down = apply_permutation(spec, sorts.ascending);
  InequalityInstance inst;
  inst.kind = Kind::sorted_sandwich;
  inst.axes = axes;
  inst.arity = 1;
  Leg lower;
  lower.form = LhsForm::mixed_norm;
  lower.lhs_spec = down;
  lower.rhs.push_back({spec, Rational(1), 0});
  Leg upper;
  upper.form = LhsForm::mixed_norm;
  upper.lhs_spec = spec;
  upper.rhs.push_back({up, Rational(1), 0});
  inst.legs = {lower, upper};
  inst.params = {{"p", exponent_list_to_json(p)}, {"axes", axes}};
  inst.derived["sigma_desc"] = sorts.descending.one_based();
  inst.derived["rho_asc"] = sorts.ascending.one_based();
  inst.derived["raise_trace"] = trace_to_json(decompose(sorts.descending, spec, Direction::raise));
  inst.derived["lower_trace"] = trace_to_json(decompose(sorts.ascending, spec, Direction::lower));
  detail::finish(inst);
  return inst;
}

/// Q_i = m P_i / pbar over the exponent orbit P_1..P_m; empty unless pbar is
/// exact and finite.
inline std::vector<NormSpec> scaled_orbit_system(const NormSpec& spec) {
  const OrbitInfo info = orbit_info(spec);
  if (!info.pbar.is_rational()) return {};
  const Rational scale = Rational(static_cast<std::int64_t>(info.m)) / info.pbar.rational();
  std::vector<NormSpec> out;
  for (const auto& s : orbit(spec, Action::exponents)) {
    std::vector<Column> cols;
    for (const auto& c : s) cols.push_back({c.p.is_infinite() ? c.p : Exponent(c.p.rational() * scale), c.axis});
    out.emplace_back(std::move(cols));
  }
  return out;
}

/// Symmetric geometric-mean estimates:
///   || prod f_i^{1/m} ||_{L^pbar} <= prod ||f_i||_{P_i}^{1/m}
/// over the exponent orbit (symmetric_holder) or, for a nonincreasing row,
/// the variable orbit (symmetric_gm, and symmetric_gm1 with one function).
/// `lhs_scale` != 1 multiplies the left exponent and yields a false variant.
inline InequalityInstance make_symmetric(Kind kind, const std::vector<Exponent>& p, std::vector<std::string> axes = {},
                                         const Rational& lhs_scale = Rational(1)) {
  if (kind != Kind::symmetric_holder && kind != Kind::symmetric_gm && kind != Kind::symmetric_gm1) {
    throw ValidationError("make_symmetric: kind must be symmetric_holder, symmetric_gm or symmetric_gm1");
  }
  if (p.empty()) throw ValidationError(std::string(kind_name(kind)) + " needs a nonempty exponent row");
  if (lhs_scale.sign() <= 0) throw ValidationError("lhs_scale must be positive");
  if (axes.empty()) axes = NormSpec::default_axes(p.size());
  const NormSpec spec(p, axes);
  const Action mode = kind == Kind::symmetric_holder ? Action::exponents : Action::variables;
  const std::vector<NormSpec> specs = orbit(spec, mode);  // rejects unsorted rows in variables mode
  const OrbitInfo info = orbit_info(spec);

  Exponent lhs_p = info.pbar;
  if (!(lhs_scale == Rational(1)) && lhs_p.is_finite()) {
    lhs_p = lhs_p.is_rational() ? Exponent(lhs_p.rational() * lhs_scale) : Exponent::real(lhs_p.value() * lhs_scale.to_double());
  }

  InequalityInstance inst;
  inst.kind = kind;
  inst.axes = axes;
  inst.arity = kind == Kind::symmetric_gm1 ? 1 : specs.size();
  Leg leg;
  leg.form = LhsForm::geometric_mean_lp;
  leg.lhs_exponent = lhs_p;
  const Rational power(1, static_cast<std::int64_t>(specs.size()));
  for (std::size_t i = 0; i < specs.size(); ++i) {
    leg.rhs.push_back({specs[i], power, kind == Kind::symmetric_gm1 ? 0 : i});
  }
  inst.legs.push_back(std::move(leg));
  inst.holder_system = scaled_orbit_system(spec);
  inst.params = {{"p", exponent_list_to_json(p)}, {"axes", axes}};
  if (!(lhs_scale == Rational(1))) {
    inst.params["lhs_scale"] = lhs_scale.str();
    inst.derived["perturbed"] = true;
  }
  inst.derived["m"] = info.m;
  inst.derived["pbar"] = info.pbar.str();
  inst.derived["pbar_float"] = exponent_to_json(Exponent(info.pbar));
  inst.derived["pbar_exact"] = info.exact;
  inst.derived["lhs_exponent"] = detail::exponent_pair(lhs_p);
  inst.derived["orbit_values"] = exponent_list_to_json(info.values);
  inst.derived["multiplicities"] = info.multiplicities;
  detail::finish(inst);
  return inst;
}

/// ||f||_{4/3} <= ||f||_{(2,1 | x1,x2)}^{1/2} ||f||_{(2,1 | x2,x1)}^{1/2}.
inline InequalityInstance make_littlewood43() {
  InequalityInstance inst = make_symmetric(Kind::symmetric_gm1, {Exponent(2), Exponent(1)});
  inst.kind = Kind::littlewood43;
  inst.params = json::object();
  return inst;
}

/// Row with `low_count` copies of `low` after `total - low_count` copies of `high`.
inline std::vector<Exponent> two_value_row(std::size_t total, std::size_t low_count, const Exponent& high,
                                           const Exponent& low) {
  std::vector<Exponent> row(total - low_count, high);
  row.insert(row.end(), low_count, low);
  return row;
}

/// 2J/(K+J).
inline Rational blei21_exponent(std::int64_t J, std::int64_t K) { return {2 * J, K + J}; }

/// Jpq/(pJ + (q-p)K), with the q = inf limit Jp/K.
inline Exponent blei_qp_exponent(std::int64_t J, std::int64_t K, const Exponent& p, const Exponent& q) {
  const Rational pr = p.rational();
  if (q.is_infinite()) return Exponent(Rational(J) * pr / Rational(K));
  const Rational qr = q.rational();
  return Exponent(Rational(J) * pr * qr / (pr * Rational(J) + (qr - pr) * Rational(K)));
}

namespace detail {
inline void require_jk(std::int64_t J, std::int64_t K, const char* kind) {
  if (!(J > K && K > 0)) {
    throw ValidationError(std::string(kind) + " needs integers J > K > 0, got J=" + std::to_string(J) +
                          ", K=" + std::to_string(K));
  }
  if (J > 20) throw ValidationError(std::string(kind) + ": J > 20 is not supported");
}

inline void annotate_blei(InequalityInstance& inst, std::int64_t J, std::int64_t K, const Exponent& formula) {
  const auto N = binomial(static_cast<std::uint64_t>(J), static_cast<std::uint64_t>(K));
  if (inst.derived.at("m").get<std::uint64_t>() != N) throw std::logic_error("orbit size differs from C(J,K)");
  if (!(inst.legs[0].lhs_exponent == formula)) throw std::logic_error("harmonic mean differs from the closed form");
  inst.derived["N"] = N;
  inst.derived["lhs_exponent_formula"] = formula.str();
  inst.derived["lhs_exponent_formula_float"] = formula.value();
  // S_alpha: axes carrying the smaller exponent in each orbit element
  json subsets = json::array();
  const std::size_t low_from = static_cast<std::size_t>(J - K);
  for (const auto& f : inst.legs[0].rhs) {
    json s = json::array();
    for (std::size_t t = low_from; t < f.spec.size(); ++t) s.push_back(f.spec[t].axis);
    subsets.push_back(s);
  }
  inst.derived["subsets"] = subsets;
}
}  // namespace detail

/// Exponent 2 on J-K axes, 1 on K axes; lhs exponent 2J/(K+J).
inline InequalityInstance make_blei21(std::int64_t J, std::int64_t K) {
  detail::require_jk(J, K, "blei21");
  auto row = two_value_row(static_cast<std::size_t>(J), static_cast<std::size_t>(K), Exponent(2), Exponent(1));
  InequalityInstance inst = make_symmetric(Kind::symmetric_gm1, row);
  inst.kind = Kind::blei21;
  inst.params = {{"J", J}, {"K", K}};
  detail::annotate_blei(inst, J, K, Exponent(blei21_exponent(J, K)));
  return inst;
}

/// Exponent q on J-K axes, p on K axes, 0 < p < q <= inf.
inline InequalityInstance make_blei_qp(std::int64_t J, std::int64_t K, const Exponent& p, const Exponent& q) {
  detail::require_jk(J, K, "blei_qp");
  if (!p.is_rational() || !(q.is_rational() || q.is_infinite())) throw ValidationError("blei_qp needs exact exponents");
  if (!(p < q)) throw ValidationError("blei_qp needs 0 < p < q <= inf, got p=" + p.str() + ", q=" + q.str());
  auto row = two_value_row(static_cast<std::size_t>(J), static_cast<std::size_t>(K), q, p);
  InequalityInstance inst = make_symmetric(Kind::symmetric_gm1, row);
  inst.kind = Kind::blei_qp;
  inst.params = {{"J", J}, {"K", K}, {"p", p.str()}, {"q", q.str()}};
  detail::annotate_blei(inst, J, K, blei_qp_exponent(J, K, p, q));
  return inst;
}

struct PopaSinnamonExponents {
  Rational epsilon;          // 1 - sum 1/q_k
  std::vector<Exponent> p;   // 1/p_j = 1/q_j + epsilon
  std::vector<Exponent> s;   // 1/s_j = 1/q_j + epsilon/(n-1)
};

inline PopaSinnamonExponents popa_sinnamon_exponents(const std::vector<Exponent>& q) {
  const std::size_t n = q.size();
  if (n < 2) throw ValidationError("popa_sinnamon needs n >= 2 exponents");
  Rational sum = 0;
  std::vector<Rational> rq;
  for (const auto& e : q) {
    rq.push_back(detail::exact_reciprocal_or_throw(e, "popa_sinnamon"));
    sum += rq.back();
  }
  if (sum > Rational(1)) throw ValidationError("popa_sinnamon needs sum 1/q_j <= 1, got " + sum.str());
  PopaSinnamonExponents out;
  out.epsilon = Rational(1) - sum;
  const Rational spread = out.epsilon / Rational(static_cast<std::int64_t>(n - 1));
  for (std::size_t j = 0; j < n; ++j) {
    out.p.push_back(Exponent::from_reciprocal(rq[j] + out.epsilon));
    out.s.push_back(Exponent::from_reciprocal(rq[j] + spread));
  }
  return out;
}

/// first:  int f_1...f_n <= prod_j || f_j ||_{(q_j on every other axis, then p_j on axis j)}
/// second: int f_1...f_n <= prod_j || f_j ||_{(q_j on axis j, then s_j on every other axis)}
inline InequalityInstance make_popa_sinnamon(bool second, const std::vector<Exponent>& q,
                                             std::vector<std::string> axes = {}) {
  const std::size_t n = q.size();
  const PopaSinnamonExponents ex = popa_sinnamon_exponents(q);
  if (axes.empty()) axes = NormSpec::default_axes(n);
  if (axes.size() != n) throw ValidationError("popa_sinnamon: axes and q differ in length");
  InequalityInstance inst;
  inst.kind = second ? Kind::popa_sinnamon_second : Kind::popa_sinnamon_first;
  inst.axes = axes;
  inst.arity = n;
  Leg leg;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Column> holder;
    std::vector<Column> others;
    for (std::size_t k = 0; k < n; ++k) {
      const Exponent& own = second ? q[j] : ex.p[j];
      const Exponent& rest = second ? ex.s[j] : q[j];
      holder.push_back({k == j ? own : rest, axes[k]});
      if (k != j) others.push_back({rest, axes[k]});
    }
    inst.holder_system.emplace_back(holder);
    std::vector<Column> cols;
    if (second) {
      cols.push_back({q[j], axes[j]});
      cols.insert(cols.end(), others.begin(), others.end());
    } else {
      cols = others;
      cols.push_back({ex.p[j], axes[j]});
    }
    leg.rhs.push_back({NormSpec(std::move(cols)), Rational(1), j});
  }
  inst.legs.push_back(std::move(leg));
  std::size_t infinite_q = 0;
  for (const auto& e : q) infinite_q += e.is_infinite();
  inst.params = {{"q", exponent_list_to_json(q)}, {"axes", axes}};
  inst.derived["epsilon"] = ex.epsilon.str();
  inst.derived["epsilon_float"] = ex.epsilon.to_double();
  inst.derived[second ? "s" : "p"] = exponent_list_to_json(second ? ex.s : ex.p);
  inst.derived[second ? "s_float" : "p_float"] = detail::float_mirror(second ? ex.s : ex.p);
  inst.derived["infinite_q_count"] = infinite_q;
  detail::finish(inst);
  return inst;
}

struct BleiPsExponents {
  std::vector<Subset> subsets;
  Rational epsilon;
  std::vector<Exponent> p;  // 1/p_i = 1/q_i + c_i epsilon
};

inline BleiPsExponents blei_ps_exponents(std::size_t n, std::size_t k, const std::vector<Exponent>& q,
                                         const std::vector<Rational>& c) {
  detail::require_subset_shape(n, k);
  BleiPsExponents out;
  out.subsets = k_subsets(n, k);
  const std::size_t M = out.subsets.size();
  if (q.size() != M) throw ValidationError("blei_ps needs M = C(n,k) = " + std::to_string(M) + " exponents q_i, got " + std::to_string(q.size()));
  solve_subset_coefficients(n, k, CoefficientStrategy::user, 0, c);  // validates
  Rational sum = 0;
  std::vector<Rational> rq;
  for (const auto& e : q) {
    rq.push_back(detail::exact_reciprocal_or_throw(e, "blei_ps"));
    sum += rq.back();
  }
  if (sum > Rational(1)) throw ValidationError("blei_ps needs sum 1/q_i <= 1, got " + sum.str());
  out.epsilon = Rational(1) - sum;
  for (std::size_t i = 0; i < M; ++i) {
    const Rational rp = rq[i] + c[i] * out.epsilon;
    if (rp > Rational(1) || rp < rq[i]) {
      throw ValidationError("blei_ps: derived p_" + std::to_string(i + 1) + " violates 1 <= p_i <= q_i");
    }
    out.p.push_back(Exponent::from_reciprocal(rp));
  }
  return out;
}

/// int f_1...f_M <= prod_i || f_i ||_{(q_i on axes outside S_i, then p_i on S_i)}.
/// `broadcast` builds the single-function form (every f_i = f).
inline InequalityInstance make_blei_ps(std::size_t n, std::size_t k, const std::vector<Exponent>& q,
                                       const std::vector<Rational>& c, std::vector<std::string> axes = {},
                                       bool broadcast = false) {
  const BleiPsExponents ex = blei_ps_exponents(n, k, q, c);
  if (axes.empty()) axes = NormSpec::default_axes(n);
  if (axes.size() != n) throw ValidationError("blei_ps: axes must list n ids");
  InequalityInstance inst;
  inst.kind = Kind::blei_ps;
  inst.axes = axes;
  inst.arity = broadcast ? 1 : ex.subsets.size();
  Leg leg;
  for (std::size_t i = 0; i < ex.subsets.size(); ++i) {
    const Subset& S = ex.subsets[i];
    std::vector<Column> holder;
    for (std::size_t j = 0; j < n; ++j) {
      holder.push_back({std::binary_search(S.begin(), S.end(), j) ? ex.p[i] : q[i], axes[j]});
    }
    inst.holder_system.emplace_back(holder);
    std::vector<Column> cols;
    for (const auto j : complement(S, n)) cols.push_back({q[i], axes[j]});
    for (const auto j : S) cols.push_back({ex.p[i], axes[j]});
    leg.rhs.push_back({NormSpec(std::move(cols)), Rational(1), broadcast ? 0 : i});
  }
  inst.legs.push_back(std::move(leg));
  json cj = json::array();
  for (const auto& ci : c) cj.push_back(ci.str());
  inst.params = {{"n", n}, {"k", k}, {"q", exponent_list_to_json(q)}, {"c", cj}, {"axes", axes}};
  if (broadcast) inst.params["broadcast"] = true;
  inst.derived["M"] = ex.subsets.size();
  inst.derived["subsets"] = detail::subsets_to_json(ex.subsets);
  inst.derived["epsilon"] = ex.epsilon.str();
  inst.derived["epsilon_float"] = ex.epsilon.to_double();
  inst.derived["p"] = exponent_list_to_json(ex.p);
  inst.derived["p_float"] = detail::float_mirror(ex.p);
  inst.derived["c"] = cj;
  inst.derived["c_float"] = detail::float_mirror(c);
  detail::finish(inst);
  return inst;
}

/// Coefficients of the quadruple-index instance over {12},{13},{14},{23},{24},{34}.
inline std::vector<Rational> quad6_coefficients() {
  return {Rational(1, 2), Rational(1, 3), Rational(1, 6), Rational(1, 6), Rational(1, 3), Rational(1, 2)};
}

/// n=4, k=2, q_i=12: sum x^6 <= A B C with p = (3,4,6,6,4,3), single function.
inline InequalityInstance make_quad6() {
  InequalityInstance inst =
      make_blei_ps(4, 2, std::vector<Exponent>(6, Exponent(12)), quad6_coefficients(), {}, /*broadcast=*/true);
  inst.kind = Kind::quad6;
  inst.params = json::object();
  return inst;
}

// ---- generic entry points -----------------------------------------------

inline InequalityInstance build_instance(Kind kind, const json& params) {
  return detail::guarded("instance params", [&]() -> InequalityInstance {
    const json& pr = params.is_null() ? json::object() : params;
    if (!pr.is_object()) throw ValidationError("instance params must be a JSON object");
    auto row = [&](const char* key) { return exponent_list_from_json(pr.at(key)); };
    switch (kind) {
      case Kind::holder_mixed: {
        std::vector<std::vector<Exponent>> rows;
        for (const auto& r : pr.at("exponents")) rows.push_back(exponent_list_from_json(r));
        if (rows.empty()) throw ValidationError("holder_mixed needs at least one exponent row");
        return make_holder_mixed(rows, detail::axes_param(pr, rows[0].size()));
      }
      case Kind::minkowski_raise: {
        const auto p = row("p");
        const Direction dir = pr.value("direction", std::string("raise")) == "lower" ? Direction::lower : Direction::raise;
        if (pr.contains("direction") && pr.at("direction") != "raise" && pr.at("direction") != "lower") {
          throw ValidationError("direction must be \"raise\" or \"lower\"");
        }
        return make_minkowski(p, permutation_from_json(pr.at("sigma")), dir, detail::axes_param(pr, p.size()));
      }
      case Kind::sorted_sandwich: {
        const auto p = row("p");
        return make_sorted_sandwich(p, detail::axes_param(pr, p.size()));
      }
      case Kind::symmetric_holder:
      case Kind::symmetric_gm:
      case Kind::symmetric_gm1: {
        const auto p = row("p");
        const Rational scale = pr.contains("lhs_scale") ? rational_from_json(pr.at("lhs_scale")) : Rational(1);
        return make_symmetric(kind, p, detail::axes_param(pr, p.size()), scale);
      }
      case Kind::littlewood43: return make_littlewood43();
      case Kind::blei21: return make_blei21(pr.at("J").get<std::int64_t>(), pr.at("K").get<std::int64_t>());
      case Kind::blei_qp:
        return make_blei_qp(pr.at("J").get<std::int64_t>(), pr.at("K").get<std::int64_t>(), exponent_from_json(pr.at("p")),
                            exponent_from_json(pr.at("q")));
      case Kind::popa_sinnamon_first:
      case Kind::popa_sinnamon_second: {
        const auto q = row("q");
        return make_popa_sinnamon(kind == Kind::popa_sinnamon_second, q, detail::axes_param(pr, q.size()));
      }
      case Kind::blei_ps: {
        const auto n = pr.at("n").get<std::size_t>();
        const auto k = pr.at("k").get<std::size_t>();
        detail::require_subset_shape(n, k);
        const std::size_t M = detail::binomial(n, k);
        std::vector<Exponent> q;
        if (pr.at("q").is_array()) {
          q = row("q");
        } else {
          q.assign(M, exponent_from_json(pr.at("q")));
        }
        std::vector<Rational> c;
        if (pr.contains("c")) {
          for (const auto& ci : pr.at("c")) c.push_back(rational_from_json(ci));
        } else {
          const auto strategy = strategy_from_name(pr.value("strategy", std::string("uniform")));
          if (strategy == CoefficientStrategy::seeded_random && !pr.contains("seed")) {
            throw ValidationError("blei_ps with strategy random needs a \"seed\"");
          }
          c = solve_subset_coefficients(n, k, strategy, pr.value("seed", std::uint64_t{0}));
        }
        return make_blei_ps(n, k, q, c, detail::axes_param(pr, n), pr.value("broadcast", false));
      }
      case Kind::quad6: return make_quad6();
    }
    throw ValidationError("unhandled kind");
  });
}

inline json instance_to_json(const InequalityInstance& inst) {
  return {{"kind", kind_name(inst.kind)}, {"params", inst.params}, {"derived", inst.derived}};
}

/// Rebuilds from kind and params; a supplied "derived" block must match the
/// recomputed one exactly.
inline InequalityInstance instance_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc.at("kind").is_string()) {
    throw ValidationError("malformed instance document: missing \"kind\"");
  }
  InequalityInstance inst =
      build_instance(kind_from_name(doc.at("kind").get<std::string>()), doc.value("params", json::object()));
  if (doc.contains("derived") && doc.at("derived") != inst.derived) {
    std::string key = "?";
    for (const auto& [k, v] : inst.derived.items()) {
      if (!doc.at("derived").contains(k) || doc.at("derived").at(k) != v) {
        key = k;
        break;
      }
    }
    if (key == "?") {
      for (const auto& [k, v] : doc.at("derived").items()) {
        if (!inst.derived.contains(k)) key = k;
      }
    }
    throw ValidationError("instance \"derived\" block does not match the recomputed values (first mismatch: \"" + key + "\")");
  }
  return inst;
}

/// Structural checks run before evaluation; empty when the instance is sound.
inline std::vector<std::string> precondition_issues(const InequalityInstance& inst) {
  std::vector<std::string> issues;
  auto sorted_axes = inst.axes;
  std::sort(sorted_axes.begin(), sorted_axes.end());
  auto check_spec = [&](const NormSpec& s, const std::string& where) {
    auto ax = s.axes();
    std::sort(ax.begin(), ax.end());
    if (ax != sorted_axes) issues.push_back(where + ": spec " + s.str() + " is not over the instance axes");
  };
  for (std::size_t l = 0; l < inst.legs.size(); ++l) {
    const Leg& leg = inst.legs[l];
    const std::string where = "leg " + std::to_string(l + 1);
    if (leg.form == LhsForm::mixed_norm) {
      check_spec(leg.lhs_spec, where + " lhs");
      if (leg.lhs_slot >= inst.arity) issues.push_back(where + ": lhs slot out of range");
    }
    for (const auto& f : leg.rhs) {
      check_spec(f.spec, where + " rhs");
      if (f.slot >= inst.arity) issues.push_back(where + ": rhs slot out of range");
    }
  }
  if (!inst.holder_system.empty()) {
    try {
      const HolderCheck chk = check_holder_system(inst.holder_system);
      if (!chk.ok) {
        for (std::size_t j = 0; j < chk.axes.size(); ++j) {
          if (chk.residuals[j] != 0.0) {
            issues.push_back("Hölder system residual on axis '" + chk.axes[j] + "' is " +
                             (chk.exact ? chk.exact_residuals[j].str() : std::to_string(chk.residuals[j])));
          }
        }
      }
    } catch (const ValidationError& e) {
      issues.push_back(e.what());
    }
  }
  return issues;
}

}  // namespace mixnorm
