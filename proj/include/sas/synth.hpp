// Copyright 2026 The Authors.
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

#include <cstdint>
#include <vector>

#include "sas/pool.hpp"

namespace sas {

/// Parameters for a synthetic pool on the unit hypersphere.
///
/// Each image is normalize(concentration * prototype + N(0, I)), so 0 gives
/// directions uniform on the sphere and large values cluster tightly around
/// the prototype. A duplicate_fraction of each class is replaced by near
/// copies of other images in that class (a perturbation of norm 1e-3 before
/// renormalization).
struct SyntheticSpec {
  std::uint32_t dim = 32;
  std::uint32_t n_classes = 5;
  std::uint32_t per_class = 40;
  double concentration = 8.0;
  double duplicate_fraction = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticPool {
  EmbeddingPool pool;
  // False when dim < n_classes and prototypes are plain normalized Gaussians
  // instead of a Gram-Schmidt orthonormal set.
  bool orthonormal_prototypes = true;
  // For each image, the pool index it duplicates, or -1 for originals.
  std::vector<std::int64_t> duplicate_of;
};

inline constexpr double kDuplicatePerturbation = 1e-3;

// Throws ArgumentError on out-of-range fields.
void validate(const SyntheticSpec& spec);

// Deterministic in spec.seed; the result always passes validate(pool).
SyntheticPool generate_pool(const SyntheticSpec& spec);

}  // namespace sas
