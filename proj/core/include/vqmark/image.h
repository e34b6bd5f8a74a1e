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

// Raster images, single planes, netpbm (P5/P6) I/O and block segmentation.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace vqmark {

// 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels, row-major.
class RasterImage {
 public:
  RasterImage() = default;
  // Zero-filled image. Throws ValidationError for channels not in {1, 3}.
  RasterImage(std::size_t width, std::size_t height, std::size_t channels);
  RasterImage(std::size_t width, std::size_t height, std::size_t channels,
              std::vector<std::uint8_t> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t channels() const noexcept { return channels_; }
  std::size_t sample_count() const noexcept { return data_.size(); }

  std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const {
    return data_[(y * width_ + x) * channels_ + c];
  }
  std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) {
    return data_[(y * width_ + x) * channels_ + c];
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  bool same_shape(const RasterImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::size_t channels_ = 1;
  std::vector<std::uint8_t> data_;
};

// One 8-bit channel.
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t width, std::size_t height);
  Plane(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }

  std::uint8_t at(std::size_t x, std::size_t y) const {
    return data_[y * width_ + x];
  }
  std::uint8_t& at(std::size_t x, std::size_t y) {
    return data_[y * width_ + x];
  }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> data_;
};

// A list of equal-length real vectors stored contiguously.
class VectorSet {
 public:
  VectorSet() = default;
  explicit VectorSet(std::size_t dim) : dim_(dim) {}
  VectorSet(std::size_t dim, std::vector<double> flat);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept {
    return dim_ == 0 ? 0 : data_.size() / dim_;
  }
  bool empty() const noexcept { return size() == 0; }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> operator[](std::size_t i) {
    return {data_.data() + i * dim_, dim_};
  }

  // Throws ValidationError when v.size() != dim().
  void push_back(std::span<const double> v);
  void append(const VectorSet& other);

  std::span<const double> flat() const noexcept { return data_; }

  friend bool operator==(const VectorSet&, const VectorSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// Non-overlapping blockSide x blockSide tiles of a plane in raster order.
// Elements inside a block are row-major, so dim() == blockSide^2.
struct BlockGrid {
  std::size_t block_side = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  VectorSet blocks;

  std::size_t width() const noexcept { return cols * block_side; }
  std::size_t height() const noexcept { return rows * block_side; }
};

enum class BlockPadding {
  kReject,     // non-divisible dimensions are an error
  kReplicate,  // extend right/bottom edges by replicating the last row/column
};

// Netpbm binary PGM (P5) / PPM (P6) with maxval 255. Throws FormatError on a
// malformed header or truncated payload, IoError when the file can't be read.
RasterImage load_image(const std::filesystem::path& path);
RasterImage decode_netpbm(std::span<const std::uint8_t> bytes);

void save_image(const RasterImage& img, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_netpbm(const RasterImage& img);

Plane extract_channel(const RasterImage& img, std::size_t channel);
RasterImage replace_channel(const RasterImage& img, std::size_t channel,
                            const Plane& plane);

BlockGrid to_blocks(const Plane& plane, std::size_t block_side,
                    BlockPadding padding = BlockPadding::kReject);

// Reassembles a plane. Values are rounded half-up and clamped to [0, 255].
Plane from_blocks(const BlockGrid& grid);

// Round-half-up then clamp to the 8-bit range.
std::uint8_t to_pixel(double v) noexcept;

}  // namespace vqmark
