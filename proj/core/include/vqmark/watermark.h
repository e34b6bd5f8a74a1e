// Copyright 2026 The vqmark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Keyed embedding of a binary watermark into the member bits of the
// first-channel (R) indices of an encoded image, and its extraction from
// either the indices or a decoded image.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vqmark/codebook.h"
#include "vqmark/image.h"
#include "vqmark/partition.h"
#include "vqmark/vq_codec.h"

namespace vqmark {

// side x side bitmap, raster order, each entry 0 or 1.
class Watermark {
 public:
  Watermark() = default;
  explicit Watermark(std::size_t side);
  // Throws ValidationError unless bits.size() == side * side and every
  // entry is 0 or 1.
  Watermark(std::size_t side, std::vector<std::uint8_t> bits);

  std::size_t side() const noexcept { return side_; }
  std::size_t size() const noexcept { return bits_.size(); }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::uint8_t& operator[](std::size_t i) { return bits_[i]; }

  friend bool operator==(const Watermark&, const Watermark&) = default;

 private:
  std::size_t side_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Square P5 file; pixel >= 128 is bit 1. Saved marks use 0 / 255.
Watermark load_watermark(const std::filesystem::path& path);
Watermark watermark_from_image(const RasterImage& img);
RasterImage watermark_to_image(const Watermark& wm);
void save_watermark(const Watermark& wm, const std::filesystem::path& path);

// The secret key K. Zero is a valid key (the generator remaps it).
struct EmbedKey {
  std::uint64_t seed = 0;
};

// Partial Fisher-Yates over [0, total_blocks) driven by XorShift64Star(key):
// for i < count, j = i + next() % (total_blocks - i), swap. Returns the first
// `count` entries in draw order. Throws CapacityError if count > total_blocks.
std::vector<std::size_t> select_positions(EmbedKey key, std::size_t total_blocks,
                                          std::size_t count);

// Index channel that carries the mark.
inline constexpr std::size_t kMarkedChannel = 0;

// Sets the member bit of each selected index to the matching watermark bit
// (watermark raster order follows selection draw order). Other indices and
// channels are left untouched.
EncodedImage embed(const EncodedImage& enc, const PartitionedCodebook& partition,
                   const Watermark& wm, EmbedKey key);

Watermark extract_from_indices(const EncodedImage& enc,
                               const PartitionedCodebook& partition,
                               EmbedKey key, std::size_t side);

// Re-encodes the marked channel of `img` against the full codebook, then reads
// member bits as extract_from_indices does.
Watermark extract_from_image(const RasterImage& img, const Codebook& codebook,
                             const PartitionedCodebook& partition, EmbedKey key,
                             std::size_t side);

}  // namespace vqmark
