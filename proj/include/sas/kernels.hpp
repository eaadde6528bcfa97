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

// Data-parallel distance kernels. Each has an OpenMP version and a serial
// reference; both evaluate every entry with angular_distance_unchecked, so
// the two agree bitwise.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sas/angular.hpp"

namespace sas::kernels {

/// Dense symmetric matrix of angular distances between selected rows.
struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> values;  // n x n, diagonal holds the clamped self-distance

  double operator()(std::size_t i, std::size_t j) const { return values[i * n + j]; }
};

DistanceMatrix pairwise_angular(const UnitRows& rows, std::span<const std::size_t> subset);
DistanceMatrix pairwise_angular_serial(const UnitRows& rows, std::span<const std::size_t> subset);

// For each image: -angle to its own prototype and min angle to the others.
void relevance_separation(const UnitRows& features, const UnitRows& prototypes,
                          std::span<const std::uint32_t> labels, std::span<double> relevance,
                          std::span<double> separation);
void relevance_separation_serial(const UnitRows& features, const UnitRows& prototypes,
                                 std::span<const std::uint32_t> labels,
                                 std::span<double> relevance, std::span<double> separation);

// Mean distance from each member to the other members of its class.
// `classes[c]` lists the rows of class c; singleton classes yield NaN.
void class_mean_distances(const UnitRows& features,
                          const std::vector<std::vector<std::size_t>>& classes,
                          std::span<double> out);
void class_mean_distances_serial(const UnitRows& features,
                                 const std::vector<std::vector<std::size_t>>& classes,
                                 std::span<double> out);

}  // namespace sas::kernels
