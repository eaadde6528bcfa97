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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sas {

/// The image pool: unit-norm image embeddings with class labels, plus one
/// unit-norm text prototype per class. Matrices are row-major float32.
///
/// The struct is a plain aggregate; `validate` enforces the invariants and
/// every reader/writer calls it. Treat a validated pool as immutable.
struct EmbeddingPool {
  std::uint32_t dim = 0;
  std::vector<std::string> class_names;
  std::vector<float> prototypes;  // n_classes x dim
  std::vector<std::string> image_ids;
  std::vector<std::uint32_t> labels;
  std::vector<float> features;  // n_images x dim

  std::size_t n_classes() const { return class_names.size(); }
  std::size_t n_images() const { return image_ids.size(); }

  std::span<const float> prototype(std::size_t c) const {
    return {prototypes.data() + c * dim, dim};
  }
  std::span<const float> feature(std::size_t i) const {
    return {features.data() + i * dim, dim};
  }

  // Pool indices of every image of class `c`, ascending.
  std::vector<std::size_t> class_members(std::size_t c) const;
  // Per-class member lists, indexed by class.
  std::vector<std::vector<std::size_t>> members_by_class() const;

  friend bool operator==(const EmbeddingPool&, const EmbeddingPool&) = default;
};

inline constexpr char kSaseMagic[4] = {'S', 'A', 'S', 'E'};
inline constexpr std::uint32_t kSaseVersion = 1;
inline constexpr double kNormTolerance = 1e-4;

// Throws ValidationError naming the first failing field/row. Files always
// require every class to own at least one image; in-memory subsets may relax
// that with `require_every_class = false`.
void validate(const EmbeddingPool& pool, bool require_every_class = true);

// Exact size in bytes of the SASE encoding of `pool`.
std::size_t encoded_size(const EmbeddingPool& pool);

void write_pool(const EmbeddingPool& pool, std::ostream& out);
void write_pool(const EmbeddingPool& pool, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pool(const EmbeddingPool& pool);

EmbeddingPool read_pool(std::istream& in);
EmbeddingPool read_pool(const std::filesystem::path& path);
EmbeddingPool decode_pool(std::span<const std::uint8_t> bytes);

// Restricts the pool to `indices` (in that order). Prototypes and class
// names are kept in full, so classes may end up with no images; such a
// subset can be scored and sampled but not written to a file.
EmbeddingPool pool_subset(const EmbeddingPool& pool,
                          std::span<const std::size_t> indices);

}  // namespace sas
