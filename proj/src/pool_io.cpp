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

#include "sas/pool.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include "sas/errors.hpp"

namespace sas {

namespace {

class ByteWriter {
 public:
  explicit ByteWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }
  void raw(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }

 private:
  std::vector<std::uint8_t>& out_;
};

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  void need(std::uint64_t n, const char* what) const {
    if (n > in_.size() - pos_) {
      const std::uint64_t expected = n > UINT64_MAX - pos_ ? UINT64_MAX : pos_ + n;
      std::ostringstream msg;
      msg << "truncated " << what << ": expected at least " << expected
          << " bytes, file has " << in_.size() << " (short by "
          << (expected - in_.size()) << ")";
      throw FormatError(msg.str());
    }
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t{in_[pos_ + k]} << (8 * k);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t{in_[pos_ + k]} << (8 * k);
    pos_ += 8;
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  std::string str(const char* what) {
    const std::uint32_t len = u32(what);
    need(len, what);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  void floats(std::vector<float>& out, std::uint64_t count, const char* what) {
    if (count > (in_.size() - pos_) / 4) need(saturating_mul(count, 4), what);
    out.resize(count);
    for (auto& v : out) v = f32(what);
  }
  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    need(n, what);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

bool valid_utf8(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b = static_cast<unsigned char>(s[i]);
    int extra = 0;
    if (b < 0x80) {
      extra = 0;
    } else if ((b & 0xE0) == 0xC0 && b >= 0xC2) {
      extra = 1;
    } else if ((b & 0xF0) == 0xE0) {
      extra = 2;
    } else if ((b & 0xF8) == 0xF0 && b <= 0xF4) {
      extra = 3;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (int k = 1; k <= extra; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

void check_unit_rows(const std::vector<float>& m, std::size_t rows, std::size_t dim,
                     const char* name) {
  for (std::size_t r = 0; r < rows; ++r) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double x = m[r * dim + k];
      if (!std::isfinite(x)) {
        throw ValidationError(std::string(name) + " row " + std::to_string(r) +
                              " has a non-finite value");
      }
      sq += x * x;
    }
    if (std::abs(std::sqrt(sq) - 1.0) > kNormTolerance) {
      throw ValidationError(std::string(name) + " row " + std::to_string(r) +
                            " not unit norm");
    }
  }
}

}  // namespace

std::vector<std::size_t> EmbeddingPool::class_members(std::size_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == c) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> EmbeddingPool::members_by_class() const {
  std::vector<std::vector<std::size_t>> out(n_classes());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < out.size()) out[labels[i]].push_back(i);
  }
  return out;
}

void validate(const EmbeddingPool& pool, bool require_every_class) {
  if (pool.dim < 2) throw ValidationError("dim must be >= 2, got " + std::to_string(pool.dim));
  const std::size_t nc = pool.n_classes();
  const std::size_t ni = pool.n_images();
  if (nc < 2) throw ValidationError("need at least 2 classes, got " + std::to_string(nc));
  if (pool.prototypes.size() != nc * pool.dim) {
    throw ValidationError("prototypes has " + std::to_string(pool.prototypes.size()) +
                          " values, expected " + std::to_string(nc * pool.dim));
  }
  if (pool.labels.size() != ni) {
    throw ValidationError("labels has " + std::to_string(pool.labels.size()) +
                          " entries, expected " + std::to_string(ni));
  }
  if (pool.features.size() != ni * pool.dim) {
    throw ValidationError("features has " + std::to_string(pool.features.size()) +
                          " values, expected " + std::to_string(ni * pool.dim));
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (!valid_utf8(pool.class_names[c])) {
      throw ValidationError("class name " + std::to_string(c) + " is not valid UTF-8");
    }
  }
  std::unordered_set<std::string> seen;
  seen.reserve(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    if (!valid_utf8(pool.image_ids[i])) {
      throw ValidationError("image id " + std::to_string(i) + " is not valid UTF-8");
    }
    if (!seen.insert(pool.image_ids[i]).second) {
      throw ValidationError("duplicate image id \"" + pool.image_ids[i] + "\" at row " +
                            std::to_string(i));
    }
  }
  std::vector<std::size_t> counts(nc, 0);
  for (std::size_t i = 0; i < ni; ++i) {
    if (pool.labels[i] >= nc) {
      throw ValidationError("label row " + std::to_string(i) + " is " +
                            std::to_string(pool.labels[i]) + ", n_classes is " +
                            std::to_string(nc));
    }
    ++counts[pool.labels[i]];
  }
  for (std::size_t c = 0; c < nc && require_every_class; ++c) {
    if (counts[c] == 0) {
      throw ValidationError("class " + std::to_string(c) + " (\"" + pool.class_names[c] +
                            "\") has no images");
    }
  }
  check_unit_rows(pool.prototypes, nc, pool.dim, "prototype");
  check_unit_rows(pool.features, ni, pool.dim, "feature");
}

std::size_t encoded_size(const EmbeddingPool& pool) {
  std::size_t n = 4 + 4 + 4 + 4 + 8;
  for (const auto& s : pool.class_names) n += 4 + s.size();
  n += pool.prototypes.size() * 4;
  for (const auto& s : pool.image_ids) n += 4 + s.size();
  n += pool.labels.size() * 4;
  n += pool.features.size() * 4;
  return n;
}

std::vector<std::uint8_t> encode_pool(const EmbeddingPool& pool) {
  validate(pool);
  std::vector<std::uint8_t> bytes;
  bytes.reserve(encoded_size(pool));
  ByteWriter w(bytes);
  w.raw(kSaseMagic, 4);
  w.u32(kSaseVersion);
  w.u32(pool.dim);
  w.u32(static_cast<std::uint32_t>(pool.n_classes()));
  w.u64(pool.n_images());
  for (const auto& s : pool.class_names) w.str(s);
  for (float v : pool.prototypes) w.f32(v);
  for (const auto& s : pool.image_ids) w.str(s);
  for (auto l : pool.labels) w.u32(l);
  for (float v : pool.features) w.f32(v);
  return bytes;
}

void write_pool(const EmbeddingPool& pool, std::ostream& out) {
  const auto bytes = encode_pool(pool);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing SASE stream");
}

void write_pool(const EmbeddingPool& pool, const std::filesystem::path& path) {
  const auto bytes = encode_pool(pool);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

EmbeddingPool decode_pool(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  auto magic = r.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), kSaseMagic)) throw FormatError("bad magic");
  const std::uint32_t version = r.u32("version");
  if (version != kSaseVersion) {
    throw FormatError("unsupported version " + std::to_string(version));
  }
  EmbeddingPool pool;
  pool.dim = r.u32("header");
  const std::uint32_t nc = r.u32("header");
  const std::uint64_t ni = r.u64("header");
  if (pool.dim < 2) throw ValidationError("dim must be >= 2, got " + std::to_string(pool.dim));
  if (nc < 2) throw ValidationError("need at least 2 classes, got " + std::to_string(nc));
  // Every image needs at least 4 (id length) + 4 (label) + 4*dim bytes.
  if (ni > r.remaining() / (8 + 4ull * pool.dim)) {
    r.need(saturating_mul(ni, 8 + 4ull * pool.dim), "image records");
  }
  // Each class needs a name length and a prototype row.
  if (nc > r.remaining() / (4 + 4ull * pool.dim)) {
    r.need(saturating_mul(nc, 4 + 4ull * pool.dim), "class records");
  }
  pool.class_names.reserve(nc);
  for (std::uint32_t c = 0; c < nc; ++c) pool.class_names.push_back(r.str("class names"));
  r.floats(pool.prototypes, std::uint64_t{nc} * pool.dim, "prototypes");
  pool.image_ids.reserve(ni);
  for (std::uint64_t i = 0; i < ni; ++i) pool.image_ids.push_back(r.str("image ids"));
  pool.labels.resize(ni);
  for (auto& l : pool.labels) l = r.u32("labels");
  r.floats(pool.features, ni * pool.dim, "feature matrix");
  if (r.remaining() != 0) {
    throw FormatError("trailing data: " + std::to_string(r.remaining()) +
                      " bytes after feature matrix");
  }
  validate(pool);
  return pool;
}

EmbeddingPool read_pool(std::istream& in) {
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  if (in.bad()) throw IoError("failed reading SASE stream");
  return decode_pool(bytes);
}

EmbeddingPool read_pool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_pool(in);
}

EmbeddingPool pool_subset(const EmbeddingPool& pool, std::span<const std::size_t> indices) {
  if (indices.empty()) throw ArgumentError("empty subset not allowed");
  std::vector<bool> used(pool.n_images(), false);
  EmbeddingPool out;
  out.dim = pool.dim;
  out.class_names = pool.class_names;
  out.prototypes = pool.prototypes;
  out.image_ids.reserve(indices.size());
  out.labels.reserve(indices.size());
  out.features.reserve(indices.size() * pool.dim);
  for (std::size_t i : indices) {
    if (i >= pool.n_images()) {
      throw ArgumentError("subset index " + std::to_string(i) + " out of range (n_images " +
                          std::to_string(pool.n_images()) + ")");
    }
    if (used[i]) throw ArgumentError("duplicate subset index " + std::to_string(i));
    used[i] = true;
    out.image_ids.push_back(pool.image_ids[i]);
    out.labels.push_back(pool.labels[i]);
    const auto row = pool.feature(i);
    out.features.insert(out.features.end(), row.begin(), row.end());
  }
  validate(out, /*require_every_class=*/false);
  return out;
}

}  // namespace sas
