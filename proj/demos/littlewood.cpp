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

// Checks ||x||_{4/3} <= ||x||_{(2,1)}^{1/2} ||x||_{(2,1 | x2,x1)}^{1/2} on a
// random nonnegative matrix and prints both sides.

#include <cstdlib>
#include <iostream>

#include "mixnorm/mixnorm.hpp"

int main(int argc, char** argv) {
  using namespace mixnorm;
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

  const InequalityInstance inst = make_littlewood43();
  Rng rng(seed);
  auto space = make_space({{"x1", std::vector<double>(6, 1.0)}, {"x2", std::vector<double>(4, 1.0)}});
  std::vector<double> values(space->size());
  for (auto& v : values) v = rng.uniform(0.0, 5.0);
  const std::vector<Tensor> f = {Tensor(space, values)};

  const VerificationReport r = evaluate_instance(inst, f);
  std::cout << "lhs   " << r.lhs << "\n"
            << "rhs   " << r.rhs << "\n"
            << "ratio " << r.ratio << (r.pass ? "  (holds)" : "  (VIOLATED)") << "\n";
  return r.pass ? 0 : 1;
}
