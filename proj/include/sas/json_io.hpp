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

#include <string>

#include <json.hpp>

#include "sas/pool.hpp"
#include "sas/sampler.hpp"

namespace sas {

// Rounds to 9 significant digits; NaN/inf pass through.
double round_sig9(double v);
// printf("%.9g"), with NaN printed as "nan".
std::string format_sig9(double v);

// Keys mirror the CLI flags: ipc, ratio, selector, lambda, seed, no_rel,
// no_sep, no_div, plus pool_multiplier for sweeps. Missing keys take the
// defaults; unknown keys are an ArgumentError.
nlohmann::ordered_json config_to_json(const SelectionConfig& config);
SelectionConfig config_from_json(const nlohmann::json& j);

// {config, classes: [{class_name, selected: [...], removals: [...]}]}
// Floats are rounded to 9 significant digits; NaN becomes null.
nlohmann::ordered_json selection_to_json(const Selection& selection);
std::string selection_json_text(const Selection& selection);

// Inverse of selection_to_json; image ids are resolved against `pool`
// (unknown id -> ArgumentError). Cached floats keep their rounded values.
Selection selection_from_json(const nlohmann::json& j, const EmbeddingPool& pool);

}  // namespace sas
