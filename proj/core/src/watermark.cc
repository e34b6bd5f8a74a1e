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

#include "vqmark/watermark.h"

#include <numeric>
#include <string>

#include "vqmark/error.h"
#include "vqmark/prng.h"

namespace vqmark {
namespace {

void check_partition(const EncodedImage& enc,
                     const PartitionedCodebook& partition) {
  if (enc.codebook_hash != partition.codebook_hash()) {
    throw CodebookMismatchError(
        "encoded image and partition come from different codebooks");
  }
  if (enc.channels.empty()) throw ValidationError("encoded image has no channels");
}

Watermark read_member_bits(std::span<const std::uint16_t> indices,
                           const PartitionedCodebook& partition, EmbedKey key,
                           std::size_t side) {
  const auto positions = select_positions(key, indices.size(), side * side);
  std::vector<std::uint8_t> bits(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    bits[i] = partition.index_to_code(indices[positions[i]]).member;
  }
  return Watermark(side, std::move(bits));
}

}  // namespace

Watermark::Watermark(std::size_t side) : side_(side), bits_(side * side, 0) {}

Watermark::Watermark(std::size_t side, std::vector<std::uint8_t> bits)
    : side_(side), bits_(std::move(bits)) {
  if (bits_.size() != side * side) {
    throw ValidationError("watermark bit count does not match side " +
                          std::to_string(side));
  }
  for (auto b : bits_) {
    if (b > 1) throw ValidationError("watermark bits must be 0 or 1");
  }
}

Watermark watermark_from_image(const RasterImage& img) {
  if (img.channels() != 1) {
    throw ValidationError("watermark image must be grayscale (P5)");
  }
  if (img.width() != img.height() || img.width() == 0) {
    throw ValidationError("watermark image must be square, got " +
                          std::to_string(img.width()) + "x" +
                          std::to_string(img.height()));
  }
  std::vector<std::uint8_t> bits(img.sample_count());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = img.data()[i] >= 128;
  return Watermark(img.width(), std::move(bits));
}

Watermark load_watermark(const std::filesystem::path& path) {
  return watermark_from_image(load_image(path));
}

RasterImage watermark_to_image(const Watermark& wm) {
  std::vector<std::uint8_t> pixels(wm.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = wm[i] ? 255 : 0;
  return RasterImage(wm.side(), wm.side(), 1, std::move(pixels));
}

void save_watermark(const Watermark& wm, const std::filesystem::path& path) {
  save_image(watermark_to_image(wm), path);
}

std::vector<std::size_t> select_positions(EmbedKey key, std::size_t total_blocks,
                                          std::size_t count) {
  if (count > total_blocks) {
    throw CapacityError("watermark needs " + std::to_string(count) +
                        " positions but only " + std::to_string(total_blocks) +
                        " blocks are available");
  }
  std::vector<std::size_t> pool(total_blocks);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  XorShift64Star rng(key.seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(total_blocks - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

EncodedImage embed(const EncodedImage& enc, const PartitionedCodebook& partition,
                   const Watermark& wm, EmbedKey key) {
  check_partition(enc, partition);
  EncodedImage out = enc;
  auto& marked = out.channels[kMarkedChannel];
  const auto positions = select_positions(key, marked.size(), wm.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    auto& index = marked[positions[i]];
    const IndexCode code = partition.index_to_code(index);
    index = partition.code_to_index(code.division, wm[i]);
  }
  return out;
}

Watermark extract_from_indices(const EncodedImage& enc,
                               const PartitionedCodebook& partition,
                               EmbedKey key, std::size_t side) {
  check_partition(enc, partition);
  return read_member_bits(enc.channels[kMarkedChannel], partition, key, side);
}

Watermark extract_from_image(const RasterImage& img, const Codebook& codebook,
                             const PartitionedCodebook& partition, EmbedKey key,
                             std::size_t side) {
  if (codebook_hash(codebook) != partition.codebook_hash()) {
    throw CodebookMismatchError("partition was built from another codebook");
  }
  const IndexList indices =
      encode_plane(extract_channel(img, kMarkedChannel), codebook);
  return read_member_bits(indices, partition, key, side);
}

}  // namespace vqmark
