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

#include "sas/pool.hpp"
#include "sas/sampler.hpp"
#include "sas/scoring.hpp"

namespace sas {

// Uniform sample of ipc images per class without replacement. Each class
// draws from its own generator stream keyed by (seed, class index), so
// adding classes never changes earlier classes' draws. Output order is draw
// order. Margins/diversities are filled from `table` for reporting.
Selection select_random(const EmbeddingPool& pool, const ScoreTable& table,
                        const SelectionConfig& config);
Selection select_random(const EmbeddingPool& pool, const SelectionConfig& config);

// Greedy farthest-point selection in angular distance, per class. Starts
// at the most relevant image and repeatedly adds the image whose nearest
// selected neighbour is farthest away. Ties go to the lower pool index.
// Output order is greedy order.
Selection select_kcenter(const EmbeddingPool& pool, const ScoreTable& table,
                         const SelectionConfig& config);
Selection select_kcenter(const EmbeddingPool& pool, const SelectionConfig& config);

namespace detail {
// select_random without the selector-kind check; used by the all-off
// ablation of the two-stage sampler.
Selection random_selection(const EmbeddingPool& pool, const ScoreTable& table,
                           const SelectionConfig& config);
}  // namespace detail

}  // namespace sas
