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

#include "vqmark/vq_codec.h"

#include <algorithm>
#include <string>

#include "byte_io.h"
#include "vqmark/error.h"

namespace vqmark {
namespace {

constexpr std::uint8_t kContainerVersion = 1;
constexpr std::string_view kMagic = "VQIX";

}  // namespace

IndexList encode_plane(const Plane& plane, const Codebook& codebook) {
  const BlockGrid grid = to_blocks(plane, codebook.block_side());
  IndexList indices(grid.blocks.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    indices[i] = static_cast<std::uint16_t>(
        nearest_codeword(grid.blocks[i], codebook).index);
  }
  return indices;
}

Plane decode_plane(std::span<const std::uint16_t> indices,
                   const Codebook& codebook, std::size_t width,
                   std::size_t height) {
  const std::size_t side = codebook.block_side();
  if (width % side != 0 || height % side != 0) {
    throw ValidationError("decode dimensions are not divisible by block side");
  }
  BlockGrid grid;
  grid.block_side = side;
  grid.cols = width / side;
  grid.rows = height / side;
  if (indices.size() != grid.rows * grid.cols) {
    throw ValidationError("index count " + std::to_string(indices.size()) +
                          " does not match a " + std::to_string(grid.cols) +
                          "x" + std::to_string(grid.rows) + " block grid");
  }
  grid.blocks = VectorSet(codebook.dim());
  for (std::uint16_t index : indices) {
    if (index >= codebook.size()) {
      throw ValidationError("codeword index " + std::to_string(index) +
                            " out of range for codebook of size " +
                            std::to_string(codebook.size()));
    }
    grid.blocks.push_back(codebook[index]);
  }
  return from_blocks(grid);
}

EncodedImage encode_image(const RasterImage& img, const Codebook& codebook) {
  EncodedImage enc;
  enc.width = img.width();
  enc.height = img.height();
  enc.block_side = codebook.block_side();
  enc.codebook_hash = codebook_hash(codebook);
  for (std::size_t c = 0; c < img.channels(); ++c) {
    enc.channels.push_back(encode_plane(extract_channel(img, c), codebook));
  }
  return enc;
}

RasterImage decode_image(const EncodedImage& enc, const Codebook& codebook) {
  if (enc.codebook_hash != codebook_hash(codebook)) {
    throw CodebookMismatchError(
        "encoded image was produced with a different codebook");
  }
  if (enc.block_side != codebook.block_side()) {
    throw CodebookMismatchError("encoded block side does not match codebook");
  }
  RasterImage img(enc.width, enc.height, enc.channels.size());
  for (std::size_t c = 0; c < enc.channels.size(); ++c) {
    img = replace_channel(
        img, c, decode_plane(enc.channels[c], codebook, enc.width, enc.height));
  }
  return img;
}

std::vector<std::uint8_t> serialize_encoded(const EncodedImage& enc) {
  if (enc.block_side == 0 || enc.block_side > 0xFF ||
      enc.width > 0xFFFFFFFFu || enc.height > 0xFFFFFFFFu ||
      (enc.channels.size() != 1 && enc.channels.size() != 3)) {
    throw ValidationError("encoded image header out of range for VQIX");
  }
  internal::ByteWriter w;
  w.bytes(kMagic);
  w.u8(kContainerVersion);
  w.u32(static_cast<std::uint32_t>(enc.width));
  w.u32(static_cast<std::uint32_t>(enc.height));
  w.u8(static_cast<std::uint8_t>(enc.block_side));
  w.u8(static_cast<std::uint8_t>(enc.channels.size()));
  w.u64(enc.codebook_hash);
  for (const auto& channel : enc.channels) {
    if (channel.size() != enc.blocks_per_channel()) {
      throw ValidationError("channel index count does not match block grid");
    }
    for (std::uint16_t index : channel) w.u16(index);
  }
  return w.take();
}

EncodedImage parse_encoded(std::span<const std::uint8_t> bytes) {
  internal::ByteReader r(bytes, "VQIX");
  r.expect_magic(kMagic);
  const std::size_t version_at = r.pos();
  if (r.u8() != kContainerVersion) {
    throw FormatError("unsupported VQIX version", version_at);
  }
  EncodedImage enc;
  enc.width = r.u32();
  enc.height = r.u32();
  const std::size_t side_at = r.pos();
  enc.block_side = r.u8();
  const std::size_t channels_at = r.pos();
  const std::size_t channels = r.u8();
  enc.codebook_hash = r.u64();
  if (enc.block_side == 0 || enc.width % enc.block_side != 0 ||
      enc.height % enc.block_side != 0) {
    throw FormatError("VQIX dimensions not divisible by block side", side_at);
  }
  if (channels != 1 && channels != 3) {
    throw FormatError("VQIX channel count must be 1 or 3", channels_at);
  }
  const std::size_t per_channel = enc.blocks_per_channel();
  if (r.remaining() != channels * per_channel * 2) {
    throw FormatError("VQIX payload length mismatch: expected " +
                          std::to_string(channels * per_channel * 2) +
                          " bytes",
                      r.pos());
  }
  enc.channels.assign(channels, IndexList(per_channel));
  for (auto& channel : enc.channels) {
    for (auto& index : channel) index = r.u16();
  }
  return enc;
}

void save_encoded(const EncodedImage& enc, const std::filesystem::path& path) {
  internal::write_file(path, serialize_encoded(enc));
}

EncodedImage load_encoded(const std::filesystem::path& path) {
  return parse_encoded(internal::read_file(path));
}

bool is_encoded_container(std::span<const std::uint8_t> bytes) noexcept {
  return bytes.size() >= kMagic.size() &&
         std::equal(kMagic.begin(), kMagic.end(), bytes.begin());
}

}  // namespace vqmark
