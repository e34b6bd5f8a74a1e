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

#include "vqmark/image.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "byte_io.h"
#include "vqmark/error.h"

namespace vqmark {
namespace {

void check_channels(std::size_t channels) {
  if (channels != 1 && channels != 3) {
    throw ValidationError("image must have 1 or 3 channels, got " +
                          std::to_string(channels));
  }
}

// Cursor over a netpbm header: whitespace and '#' comments separate tokens.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }

  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' &&
               bytes_[pos_] != '\r') {
          ++pos_;
        }
      } else if (is_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (std::size_t{1} << 31)) {
        throw FormatError(std::string("netpbm ") + what + " out of range",
                          start);
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw FormatError(std::string("netpbm header: expected ") + what, start);
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
      throw FormatError("netpbm header: expected whitespace before raster",
                        pos_);
    }
    ++pos_;
  }

 private:
  static bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

RasterImage::RasterImage(std::size_t width, std::size_t height,
                         std::size_t channels)
    : width_(width), height_(height), channels_(channels) {
  check_channels(channels);
  data_.assign(width * height * channels, 0);
}

RasterImage::RasterImage(std::size_t width, std::size_t height,
                         std::size_t channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels),
      data_(std::move(data)) {
  check_channels(channels);
  if (data_.size() != width * height * channels) {
    throw ValidationError("image data length " + std::to_string(data_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height) + "x" +
                          std::to_string(channels));
  }
}

Plane::Plane(std::size_t width, std::size_t height)
    : width_(width), height_(height), data_(width * height, 0) {}

Plane::Plane(std::size_t width, std::size_t height,
             std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (data_.size() != width * height) {
    throw ValidationError("plane data length does not match dimensions");
  }
}

VectorSet::VectorSet(std::size_t dim, std::vector<double> flat)
    : dim_(dim), data_(std::move(flat)) {
  if (dim_ == 0 || data_.size() % dim_ != 0) {
    throw ValidationError("vector data length is not a multiple of dim");
  }
}

void VectorSet::push_back(std::span<const double> v) {
  if (v.size() != dim_) {
    throw ValidationError("vector of dimension " + std::to_string(v.size()) +
                          " added to set of dimension " +
                          std::to_string(dim_));
  }
  data_.insert(data_.end(), v.begin(), v.end());
}

void VectorSet::append(const VectorSet& other) {
  if (other.empty()) return;
  if (empty() && data_.empty()) dim_ = other.dim_;
  if (other.dim_ != dim_) {
    throw ValidationError("cannot append vector sets of different dimension");
  }
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
}

RasterImage decode_netpbm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    throw FormatError("not a binary PGM/PPM file (expected P5 or P6 magic)", 0);
  }
  const std::size_t channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader reader(bytes.subspan(2));
  const std::size_t width = reader.read_uint("width");
  const std::size_t height = reader.read_uint("height");
  const std::size_t maxval_offset = reader.pos();
  const std::size_t maxval = reader.read_uint("maxval");
  if (maxval != 255) {
    throw FormatError("unsupported maxval " + std::to_string(maxval) +
                          " (only 255 is supported)",
                      2 + maxval_offset);
  }
  reader.expect_single_space();
  const std::size_t payload_offset = 2 + reader.pos();
  const std::size_t expected = width * height * channels;
  const std::size_t available = bytes.size() - payload_offset;
  if (available < expected) {
    throw FormatError("truncated payload: expected " + std::to_string(expected) +
                          " bytes, found " + std::to_string(available),
                      bytes.size());
  }
  std::vector<std::uint8_t> data(bytes.begin() + payload_offset,
                                 bytes.begin() + payload_offset + expected);
  return RasterImage(width, height, channels, std::move(data));
}

RasterImage load_image(const std::filesystem::path& path) {
  const auto bytes = internal::read_file(path);
  try {
    return decode_netpbm(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what(), e.offset());
  }
}

std::vector<std::uint8_t> encode_netpbm(const RasterImage& img) {
  const std::string header = std::string(img.channels() == 1 ? "P5" : "P6") +
                             "\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data().begin(), img.data().end());
  return out;
}

void save_image(const RasterImage& img, const std::filesystem::path& path) {
  internal::write_file(path, encode_netpbm(img));
}

Plane extract_channel(const RasterImage& img, std::size_t channel) {
  if (channel >= img.channels()) {
    throw ValidationError("channel " + std::to_string(channel) +
                          " out of range for " +
                          std::to_string(img.channels()) + "-channel image");
  }
  Plane plane(img.width(), img.height());
  auto dst = plane.data();
  const auto src = img.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = src[i * img.channels() + channel];
  }
  return plane;
}

RasterImage replace_channel(const RasterImage& img, std::size_t channel,
                            const Plane& plane) {
  if (channel >= img.channels()) {
    throw ValidationError("channel " + std::to_string(channel) +
                          " out of range for " +
                          std::to_string(img.channels()) + "-channel image");
  }
  if (plane.width() != img.width() || plane.height() != img.height()) {
    throw ValidationError("plane dimensions do not match image dimensions");
  }
  RasterImage out = img;
  auto dst = out.data();
  const auto src = plane.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i * img.channels() + channel] = src[i];
  }
  return out;
}

BlockGrid to_blocks(const Plane& plane, std::size_t block_side,
                    BlockPadding padding) {
  if (block_side == 0) throw ValidationError("block side must be positive");
  const bool divisible = plane.width() % block_side == 0 &&
                         plane.height() % block_side == 0;
  if (!divisible && padding == BlockPadding::kReject) {
    throw ValidationError(
        "plane " + std::to_string(plane.width()) + "x" +
        std::to_string(plane.height()) + " is not divisible by block side " +
        std::to_string(block_side));
  }
  if (plane.width() == 0 || plane.height() == 0) {
    throw ValidationError("cannot segment an empty plane");
  }
  BlockGrid grid;
  grid.block_side = block_side;
  grid.cols = (plane.width() + block_side - 1) / block_side;
  grid.rows = (plane.height() + block_side - 1) / block_side;
  const std::size_t dim = block_side * block_side;
  std::vector<double> flat(grid.rows * grid.cols * dim);
  std::size_t k = 0;
  for (std::size_t br = 0; br < grid.rows; ++br) {
    for (std::size_t bc = 0; bc < grid.cols; ++bc) {
      for (std::size_t y = 0; y < block_side; ++y) {
        const std::size_t py = std::min(br * block_side + y, plane.height() - 1);
        for (std::size_t x = 0; x < block_side; ++x) {
          const std::size_t px =
              std::min(bc * block_side + x, plane.width() - 1);
          flat[k++] = plane.at(px, py);
        }
      }
    }
  }
  grid.blocks = VectorSet(dim, std::move(flat));
  return grid;
}

std::uint8_t to_pixel(double v) noexcept {
  if (!(v >= 0.0)) return 0;  // also maps NaN to 0
  const double r = std::floor(v + 0.5);
  return r >= 255.0 ? 255 : static_cast<std::uint8_t>(r);
}

Plane from_blocks(const BlockGrid& grid) {
  const std::size_t side = grid.block_side;
  if (grid.blocks.size() != grid.rows * grid.cols ||
      grid.blocks.dim() != side * side) {
    throw ValidationError("block grid is inconsistent with its dimensions");
  }
  Plane plane(grid.width(), grid.height());
  for (std::size_t br = 0; br < grid.rows; ++br) {
    for (std::size_t bc = 0; bc < grid.cols; ++bc) {
      const auto block = grid.blocks[br * grid.cols + bc];
      for (std::size_t y = 0; y < side; ++y) {
        for (std::size_t x = 0; x < side; ++x) {
          plane.at(bc * side + x, br * side + y) = to_pixel(block[y * side + x]);
        }
      }
    }
  }
  return plane;
}

}  // namespace vqmark
