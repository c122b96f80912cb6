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
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "mixnorm/error.hpp"

namespace mixnorm {

/// Bijection on {0, ..., n-1}. Documents use 1-based images.
///
/// Composition follows function composition, (s * r)(j) = s(r(j)), which
/// makes P.(s r) = (P.s).r for the column action on norm specs.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size(), false);
    for (std::size_t j = 0; j < img_.size(); ++j) {
      if (img_[j] >= img_.size() || seen[img_[j]]) {
        throw ValidationError("not a permutation: image list is not a bijection on 1.." +
                              std::to_string(img_.size()));
      }
      seen[img_[j]] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return Permutation(std::move(v));
  }

  /// Transposition of positions j and j+1 (0-based j).
  static Permutation adjacent(std::size_t n, std::size_t j) {
    if (j + 1 >= n) throw ValidationError("adjacent transposition out of range");
    auto p = identity(n);
    std::swap(p.img_[j], p.img_[j + 1]);
    return p;
  }

  static Permutation from_one_based(const std::vector<std::int64_t>& images) {
    std::vector<std::size_t> v;
    for (const auto x : images) {
      if (x < 1) throw ValidationError("permutation images are 1-based; got " + std::to_string(x));
      v.push_back(static_cast<std::size_t>(x - 1));
    }
    return Permutation(std::move(v));
  }

  /// Every permutation of size n in lexicographic order of images.
  static std::vector<Permutation> all(std::size_t n) {
    std::vector<Permutation> out;
    auto v = identity(n).img_;
    do {
      out.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
  }

  [[nodiscard]] std::size_t size() const noexcept { return img_.size(); }
  [[nodiscard]] std::size_t operator()(std::size_t j) const { return img_.at(j); }
  [[nodiscard]] const std::vector<std::size_t>& images() const noexcept { return img_; }

  [[nodiscard]] std::vector<std::int64_t> one_based() const {
    std::vector<std::int64_t> out;
    for (const auto x : img_) out.push_back(static_cast<std::int64_t>(x) + 1);
    return out;
  }

  [[nodiscard]] Permutation inverse() const {
    std::vector<std::size_t> inv(img_.size());
    for (std::size_t j = 0; j < img_.size(); ++j) inv[img_[j]] = j;
    return Permutation(std::move(inv));
  }

  [[nodiscard]] bool is_identity() const noexcept {
    for (std::size_t j = 0; j < img_.size(); ++j) {
      if (img_[j] != j) return false;
    }
    return true;
  }

  /// Number of pairs i < j with s(j) < s(i).
  [[nodiscard]] std::size_t inversions() const noexcept {
    std::size_t count = 0;
    for (std::size_t i = 0; i < img_.size(); ++i) {
      for (std::size_t j = i + 1; j < img_.size(); ++j) count += img_[j] < img_[i];
    }
    return count;
  }

  friend Permutation operator*(const Permutation& s, const Permutation& r) {
    if (s.size() != r.size()) throw ValidationError("cannot compose permutations of different sizes");
    std::vector<std::size_t> v(s.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = s.img_[r.img_[j]];
    return Permutation(std::move(v));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> img_;
};

}  // namespace mixnorm
