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

#include "sas/synth.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "sas/errors.hpp"
#include "sas/rng.hpp"

namespace sas {

namespace {

double norm(const std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

std::vector<double> gaussian_vector(SplitMix64& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (double& x : v) x = rng.gaussian();
  return v;
}

void normalize_in_place(std::vector<double>& v) {
  const double n = norm(v);
  for (double& x : v) x /= n;
}

void append_float_row(std::vector<float>& out, const std::vector<double>& v) {
  for (double x : v) out.push_back(static_cast<float>(x));
}

std::vector<std::vector<double>> draw_prototypes(const SyntheticSpec& spec, bool orthonormal) {
  auto rng = SplitMix64::for_stream(spec.seed, 0);
  std::vector<std::vector<double>> protos;
  while (protos.size() < spec.n_classes) {
    auto v = gaussian_vector(rng, spec.dim);
    if (orthonormal) {
      // Modified Gram-Schmidt against the accepted prototypes.
      for (const auto& p : protos) {
        double dot = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) dot += v[k] * p[k];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= dot * p[k];
      }
    }
    if (norm(v) < 1e-6) continue;  // degenerate draw, try again
    normalize_in_place(v);
    protos.push_back(std::move(v));
  }
  return protos;
}

}  // namespace

void validate(const SyntheticSpec& spec) {
  if (spec.dim < 2) throw ArgumentError("synthetic dim must be >= 2");
  if (spec.n_classes < 2) throw ArgumentError("synthetic pool needs >= 2 classes");
  if (spec.per_class < 1) throw ArgumentError("per_class must be >= 1");
  if (!(spec.concentration >= 0.0) || !std::isfinite(spec.concentration)) {
    throw ArgumentError("concentration must be a finite value >= 0");
  }
  if (!(spec.duplicate_fraction >= 0.0 && spec.duplicate_fraction < 1.0)) {
    throw ArgumentError("duplicate fraction must lie in [0, 1)");
  }
}

SyntheticPool generate_pool(const SyntheticSpec& spec) {
  validate(spec);
  SyntheticPool out;
  out.orthonormal_prototypes = spec.dim >= spec.n_classes;
  const auto protos = draw_prototypes(spec, out.orthonormal_prototypes);

  EmbeddingPool& pool = out.pool;
  pool.dim = spec.dim;
  char name[64];
  for (std::uint32_t c = 0; c < spec.n_classes; ++c) {
    std::snprintf(name, sizeof name, "class_%03u", c);
    pool.class_names.emplace_back(name);
    append_float_row(pool.prototypes, protos[c]);
  }

  const auto n_dup = static_cast<std::size_t>(
      std::floor(spec.duplicate_fraction * static_cast<double>(spec.per_class)));
  const std::size_t n_orig = spec.per_class - n_dup;
  for (std::uint32_t c = 0; c < spec.n_classes; ++c) {
    auto rng = SplitMix64::for_stream(spec.seed, std::uint64_t{c} + 1);
    const std::size_t base = pool.n_images();
    std::vector<std::vector<double>> rows;
    rows.reserve(spec.per_class);
    for (std::size_t i = 0; i < n_orig; ++i) {
      auto v = gaussian_vector(rng, spec.dim);
      for (std::size_t k = 0; k < v.size(); ++k) v[k] += spec.concentration * protos[c][k];
      if (norm(v) == 0.0) v[0] = 1.0;
      normalize_in_place(v);
      rows.push_back(std::move(v));
      out.duplicate_of.push_back(-1);
    }
    for (std::size_t i = 0; i < n_dup; ++i) {
      const std::size_t src = rng.below(n_orig);
      auto noise = gaussian_vector(rng, spec.dim);
      normalize_in_place(noise);
      auto v = rows[src];
      for (std::size_t k = 0; k < v.size(); ++k) v[k] += kDuplicatePerturbation * noise[k];
      normalize_in_place(v);
      rows.push_back(std::move(v));
      out.duplicate_of.push_back(static_cast<std::int64_t>(base + src));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::snprintf(name, sizeof name, "class_%03u/img_%05zu", c, i);
      pool.image_ids.emplace_back(name);
      pool.labels.push_back(c);
      append_float_row(pool.features, rows[i]);
    }
  }
  validate(pool);
  return out;
}

}  // namespace sas
