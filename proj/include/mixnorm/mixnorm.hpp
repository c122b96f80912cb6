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

#include "mixnorm/catalog.hpp"
#include "mixnorm/documents.hpp"
#include "mixnorm/error.hpp"
#include "mixnorm/exponent.hpp"
#include "mixnorm/mixed_norm.hpp"
#include "mixnorm/norm_spec.hpp"
#include "mixnorm/perm_calculus.hpp"
#include "mixnorm/permutation.hpp"
#include "mixnorm/random.hpp"
#include "mixnorm/rational.hpp"
#include "mixnorm/rng.hpp"
#include "mixnorm/search.hpp"
#include "mixnorm/space.hpp"
#include "mixnorm/subset_system.hpp"
#include "mixnorm/verify.hpp"
