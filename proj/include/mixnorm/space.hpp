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

#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixnorm/error.hpp"

namespace mixnorm {

/// One factor of a product space: a finite set of atoms with positive measure.
struct Axis {
  std::string id;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
  [[nodiscard]] double total_weight() const noexcept {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
  }
  friend bool operator==(const Axis&, const Axis&) = default;
};

/// Finite weighted product measure space. Immutable after construction.
class ProductSpace {
 public:
  explicit ProductSpace(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw ValidationError("product space needs at least one axis");
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      const Axis& ax = axes_[a];
      if (ax.id.empty()) throw ValidationError("axis " + std::to_string(a) + " has an empty id");
      for (std::size_t b = 0; b < a; ++b) {
        if (axes_[b].id == ax.id) throw ValidationError("duplicate axis id '" + ax.id + "'");
      }
      if (ax.weights.empty()) throw ValidationError("axis '" + ax.id + "' has no atoms");
      for (std::size_t i = 0; i < ax.weights.size(); ++i) {
        const double w = ax.weights[i];
        if (!std::isfinite(w) || !(w > 0.0)) {
          throw ValidationError("axis '" + ax.id + "' atom " + std::to_string(i) +
                                ": weight must be positive and finite, got " + std::to_string(w));
        }
      }
    }
    strides_.assign(axes_.size(), 1);
    for (std::size_t a = axes_.size(); a-- > 1;) strides_[a - 1] = strides_[a] * axes_[a].size();
    size_ = strides_[0] * axes_[0].size();
  }

  /// n axes named x1..xn, each with the given unit-weight atom counts.
  static ProductSpace unit(const std::vector<std::size_t>& shape) {
    std::vector<Axis> axes;
    for (std::size_t a = 0; a < shape.size(); ++a) {
      axes.push_back({"x" + std::to_string(a + 1), std::vector<double>(shape[a], 1.0)});
    }
    return ProductSpace(std::move(axes));
  }

  [[nodiscard]] std::size_t rank() const noexcept { return axes_.size(); }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] const std::vector<Axis>& axes() const noexcept { return axes_; }
  [[nodiscard]] const Axis& axis(std::size_t a) const { return axes_.at(a); }
  [[nodiscard]] std::size_t stride(std::size_t a) const { return strides_.at(a); }

  [[nodiscard]] std::vector<std::size_t> shape() const {
    std::vector<std::size_t> s;
    for (const auto& ax : axes_) s.push_back(ax.size());
    return s;
  }

  [[nodiscard]] std::optional<std::size_t> index_of(const std::string& id) const {
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      if (axes_[a].id == id) return a;
    }
    return std::nullopt;
  }

  [[nodiscard]] std::vector<std::string> ids() const {
    std::vector<std::string> out;
    for (const auto& ax : axes_) out.push_back(ax.id);
    return out;
  }

  friend bool operator==(const ProductSpace& a, const ProductSpace& b) { return a.axes_ == b.axes_; }

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

using SpacePtr = std::shared_ptr<const ProductSpace>;

/// Dense nonnegative function on a ProductSpace, row-major over the space's axes.
class Tensor {
 public:
  Tensor(SpacePtr space, std::vector<double> values)
      : space_(std::move(space)), values_(std::move(values)) {
    if (!space_) throw ValidationError("tensor without a space");
    if (values_.size() != space_->size()) {
      throw ValidationError("tensor has " + std::to_string(values_.size()) +
                            " values but the space has " + std::to_string(space_->size()) +
                            " atoms");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double v = values_[i];
      if (std::isnan(v)) throw ValidationError("tensor value at flat index " + std::to_string(i) + " is NaN");
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("tensor value at flat index " + std::to_string(i) +
                              " must be nonnegative and finite, got " + std::to_string(v));
      }
    }
  }

  static Tensor constant(SpacePtr space, double c) {
    const std::size_t n = space ? space->size() : 0;
    return {std::move(space), std::vector<double>(n, c)};
  }

  [[nodiscard]] const ProductSpace& space() const noexcept { return *space_; }
  [[nodiscard]] const SpacePtr& space_ptr() const noexcept { return space_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] Tensor scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return {space_, std::move(v)};
  }

  [[nodiscard]] bool same_space(const Tensor& other) const {
    return space_ == other.space_ || *space_ == *other.space_;
  }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.same_space(b) && a.values_ == b.values_;
  }

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

inline SpacePtr make_space(std::vector<Axis> axes) {
  return std::make_shared<const ProductSpace>(std::move(axes));
}

}  // namespace mixnorm
