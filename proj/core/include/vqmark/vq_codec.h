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

// VQ encoding of planes and images into codeword-index grids, decoding back
// to pixels, and the VQIX container for encoded images.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "vqmark/codebook.h"
#include "vqmark/image.h"

namespace vqmark {

using IndexList = std::vector<std::uint16_t>;

// Compressed representation: one raster-order index list per channel.
struct EncodedImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t block_side = 0;
  std::uint64_t codebook_hash = 0;
  std::vector<IndexList> channels;

  std::size_t grid_cols() const noexcept { return width / block_side; }
  std::size_t grid_rows() const noexcept { return height / block_side; }
  std::size_t blocks_per_channel() const noexcept {
    return grid_cols() * grid_rows();
  }

  friend bool operator==(const EncodedImage&, const EncodedImage&) = default;
};

// Nearest codeword per block (ties to the lowest index).
IndexList encode_plane(const Plane& plane, const Codebook& codebook);

Plane decode_plane(std::span<const std::uint16_t> indices,
                   const Codebook& codebook, std::size_t width,
                   std::size_t height);

EncodedImage encode_image(const RasterImage& img, const Codebook& codebook);

// Throws CodebookMismatchError when enc was produced with another codebook.
RasterImage decode_image(const EncodedImage& enc, const Codebook& codebook);

// VQIX: "VQIX", version u8, width u32, height u32, blockSide u8, channels u8,
// codebookHash u64, then channels * rows * cols u16 indices. Little-endian.
std::vector<std::uint8_t> serialize_encoded(const EncodedImage& enc);
EncodedImage parse_encoded(std::span<const std::uint8_t> bytes);
void save_encoded(const EncodedImage& enc, const std::filesystem::path& path);
EncodedImage load_encoded(const std::filesystem::path& path);

// True when the bytes start with the VQIX magic.
bool is_encoded_container(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace vqmark
