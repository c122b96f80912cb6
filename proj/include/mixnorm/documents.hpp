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

// JSON and CSV documents for spaces, tensors, norm specs, permutations and
// raise traces.
//
//   space:      { "axes": [ { "id": "x1", "weights": [1, 2] }, ... ] }
//   tensor:     { "space": <space> | "<ref>", "shape": [..], "values": [..] }
//   tensor csv: "# shape: d1,d2,...", then row-major values
//   norm spec:  { "columns": [ { "p": 2 | "inf", "axis": "x1" }, ... ] }
//
// Exponents that are non-integer rationals additionally carry "p_exact":
// "a/b", which takes precedence on read.

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"
#include "mixnorm/norm_spec.hpp"
#include "mixnorm/perm_calculus.hpp"
#include "mixnorm/permutation.hpp"
#include "mixnorm/rational.hpp"
#include "mixnorm/space.hpp"

namespace mixnorm {

using json = nlohmann::json;

namespace detail {
template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ") + what + " document: " + e.what());
  }
}
}  // namespace detail

// ---- scalars -------------------------------------------------------------

inline json rational_to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) {
    if (auto r = Rational::from_double(j.get<double>())) return *r;
  }
  throw ValidationError("expected a rational number, got " + j.dump());
}

/// Integer, double, or "inf"; exactness is carried separately by exponent_exact_json.
inline json exponent_to_json(const Exponent& p) {
  if (p.is_infinite()) return "inf";
  if (p.is_rational() && p.rational().is_integer()) return p.rational().num();
  return p.value();
}

inline Exponent exponent_from_json(const json& j) {
  if (j.is_string()) return Exponent::parse(j.get<std::string>());
  if (j.is_number_integer()) return Exponent(Rational(j.get<std::int64_t>()));
  if (j.is_number()) return Exponent::from_double(j.get<double>());
  throw ValidationError("expected an exponent (number, \"a/b\" or \"inf\"), got " + j.dump());
}

/// Exact spelling for exponents whose float mirror would lose precision.
inline json exponent_string(const Exponent& p) { return p.str(); }

inline json exponent_list_to_json(const std::vector<Exponent>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(exponent_string(p));
  return out;
}

inline std::vector<Exponent> exponent_list_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("expected an array of exponents, got " + j.dump());
  std::vector<Exponent> out;
  for (const auto& e : j) out.push_back(exponent_from_json(e));
  return out;
}

// ---- spaces --------------------------------------------------------------

inline json space_to_json(const ProductSpace& space) {
  json axes = json::array();
  for (const auto& ax : space.axes()) axes.push_back({{"id", ax.id}, {"weights", ax.weights}});
  return {{"axes", axes}};
}

inline ProductSpace space_from_json(const json& doc) {
  std::vector<Axis> axes = detail::guarded("space", [&] {
    if (!doc.is_object() || !doc.contains("axes") || !doc.at("axes").is_array()) {
      throw ValidationError("malformed space document: expected { \"axes\": [...] }");
    }
    std::vector<Axis> out;
    for (const auto& a : doc.at("axes")) {
      Axis ax;
      ax.id = a.at("id").get<std::string>();
      for (const auto& w : a.at("weights")) {
        if (!w.is_number()) throw ValidationError("axis '" + ax.id + "': weights must be numbers");
        ax.weights.push_back(w.get<double>());
      }
      out.push_back(std::move(ax));
    }
    return out;
  });
  return ProductSpace(std::move(axes));
}

// ---- tensors -------------------------------------------------------------

inline json tensor_to_json(const Tensor& f) {
  json shape = json::array();
  for (const auto d : f.space().shape()) shape.push_back(d);
  return {{"space", space_to_json(f.space())},
          {"shape", shape},
          {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

namespace detail {
inline Tensor tensor_on(SpacePtr space, const json& doc) {
  return guarded("tensor", [&] {
    if (!doc.is_object() || !doc.contains("values")) throw ValidationError("malformed tensor document: missing \"values\"");
    if (doc.contains("shape")) {
      const auto shape = doc.at("shape").get<std::vector<std::size_t>>();
      if (shape != space->shape()) {
        throw ValidationError("tensor shape does not match the space (expected " + json(space->shape()).dump() +
                              ", got " + json(shape).dump() + ")");
      }
    }
    std::vector<double> values;
    for (const auto& v : doc.at("values")) {
      if (!v.is_number()) {
        throw ValidationError("tensor value at flat index " + std::to_string(values.size()) + " is not a number");
      }
      values.push_back(v.get<double>());
    }
    return Tensor(std::move(space), std::move(values));
  });
}
}  // namespace detail

/// Validates a space document and a tensor document against it.
///
/// `space_doc` may be null when the tensor carries its space inline; when
/// both are present they must agree. A string "space" is a reference that
/// the caller has already resolved into `space_doc`.
inline std::pair<SpacePtr, Tensor> load_validated(const json& space_doc, const json& tensor_doc) {
  if (!tensor_doc.is_object()) throw ValidationError("malformed tensor document: expected an object");
  SpacePtr space;
  if (!space_doc.is_null()) space = std::make_shared<const ProductSpace>(space_from_json(space_doc));
  if (tensor_doc.contains("space") && tensor_doc.at("space").is_object()) {
    auto inline_space = std::make_shared<const ProductSpace>(space_from_json(tensor_doc.at("space")));
    if (space && !(*space == *inline_space)) throw ValidationError("inline tensor space differs from the supplied space");
    if (!space) space = std::move(inline_space);
  }
  if (!space) throw ValidationError("tensor document has no inline space and none was supplied");
  Tensor t = detail::tensor_on(space, tensor_doc);
  return {space, std::move(t)};
}

inline Tensor tensor_from_json(const json& doc, const SpacePtr& space = nullptr) {
  if (space) {
    if (doc.contains("space") && doc.at("space").is_object() && !(space_from_json(doc.at("space")) == *space)) {
      throw ValidationError("inline tensor space differs from the supplied space");
    }
    return detail::tensor_on(space, doc);
  }
  return load_validated(json(), doc).second;
}

/// "# shape: d1,d2,..." header followed by row-major values separated by
/// commas, whitespace or newlines.
inline Tensor tensor_from_csv(const std::string& text, const SpacePtr& space) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::size_t> shape;
  bool have_shape = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("shape:");
      if (pos == std::string::npos) continue;
      std::string dims = line.substr(pos + 6);
      for (char& c : dims) c = c == ',' ? ' ' : c;
      std::istringstream ds(dims);
      std::size_t d = 0;
      while (ds >> d) shape.push_back(d);
      have_shape = true;
      continue;
    }
    for (char& c : line) c = (c == ',' || c == ';' || c == '\t' || c == '\r') ? ' ' : c;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::logic_error&) {
        throw ValidationError("malformed CSV tensor: bad value '" + tok + "' at flat index " +
                              std::to_string(values.size()));
      }
    }
  }
  if (!have_shape) throw ValidationError("malformed CSV tensor: missing '# shape:' header");
  if (shape != space->shape()) {
    throw ValidationError("CSV tensor shape " + json(shape).dump() + " does not match the space " +
                          json(space->shape()).dump());
  }
  return {space, std::move(values)};
}

inline std::string tensor_to_csv(const Tensor& f) {
  std::string out = "# shape: ";
  const auto shape = f.space().shape();
  for (std::size_t i = 0; i < shape.size(); ++i) out += (i ? "," : "") + std::to_string(shape[i]);
  out += '\n';
  const std::size_t row = shape.back();
  for (std::size_t i = 0; i < f.size(); ++i) {
    out += json(f[i]).dump();
    out += (i + 1) % row == 0 ? "\n" : ",";
  }
  return out;
}

// ---- norm specs and permutations ---------------------------------------

inline json normspec_to_json(const NormSpec& spec) {
  json cols = json::array();
  for (const auto& c : spec) {
    json col = {{"p", exponent_to_json(c.p)}, {"axis", c.axis}};
    if (c.p.is_rational() && !c.p.rational().is_integer()) col["p_exact"] = c.p.str();
    cols.push_back(std::move(col));
  }
  return {{"columns", cols}};
}

inline NormSpec normspec_from_json(const json& doc) {
  return detail::guarded("norm spec", [&] {
    if (!doc.is_object() || !doc.contains("columns")) throw ValidationError("malformed norm spec document: missing \"columns\"");
    std::vector<Column> cols;
    for (const auto& c : doc.at("columns")) {
      const Exponent p = c.contains("p_exact") ? exponent_from_json(c.at("p_exact")) : exponent_from_json(c.at("p"));
      cols.push_back({p, c.at("axis").get<std::string>()});
    }
    return NormSpec(std::move(cols));
  });
}

inline json permutation_to_json(const Permutation& s) { return s.one_based(); }

inline Permutation permutation_from_json(const json& doc) {
  return detail::guarded("permutation", [&] {
    if (!doc.is_array()) throw ValidationError("malformed permutation document: expected an array of 1-based images");
    return Permutation::from_one_based(doc.get<std::vector<std::int64_t>>());
  });
}

/// The Minkowski certificate: [ { "swap_at": j, "state": <norm spec> }, ... ].
inline json trace_to_json(const RaiseTrace& trace) {
  json out = json::array();
  for (const auto& st : trace.steps) out.push_back({{"swap_at", st.swap_at}, {"state", normspec_to_json(st.state)}});
  return out;
}

inline RaiseTrace trace_from_json(const json& doc, const NormSpec& initial, Direction dir) {
  return detail::guarded("trace", [&] {
    RaiseTrace t{dir, initial, {}};
    for (const auto& st : doc) t.steps.push_back({st.at("swap_at").get<std::size_t>(), normspec_from_json(st.at("state"))});
    return t;
  });
}

}  // namespace mixnorm
