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

// Codebooks for block vector quantization and the two trainers that build
// them: a Kohonen self-organizing feature map and the LBG (generalized
// Lloyd) baseline.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "vqmark/image.h"

namespace vqmark {

enum class Trainer : std::uint8_t { kSofm = 0, kLbg = 1 };

std::string_view trainer_name(Trainer t) noexcept;
// Accepts "sofm" or "lbg"; throws ValidationError otherwise.
Trainer parse_trainer(std::string_view name);

// Ordered list of codewords, each a flattened block_side x block_side block.
// Size is at least 2 and even (codewords are later paired into divisions).
class Codebook {
 public:
  Codebook() = default;
  // Throws ValidationError if the dimension is not a perfect square, the
  // size is odd or below 2, or any element is non-finite.
  Codebook(VectorSet codewords, Trainer trainer, std::uint64_t seed);

  std::size_t size() const noexcept { return codewords_.size(); }
  std::size_t dim() const noexcept { return codewords_.dim(); }
  std::size_t block_side() const noexcept { return block_side_; }
  Trainer trainer() const noexcept { return trainer_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::span<const double> operator[](std::size_t i) const {
    return codewords_[i];
  }
  const VectorSet& codewords() const noexcept { return codewords_; }

  friend bool operator==(const Codebook&, const Codebook&) = default;

 private:
  VectorSet codewords_;
  std::size_t block_side_ = 0;
  Trainer trainer_ = Trainer::kSofm;
  std::uint64_t seed_ = 0;
};

struct NearestCodeword {
  std::size_t index = 0;
  double distance2 = 0.0;  // squared Euclidean distance
};

// Exhaustive search with partial-distance early exit. Ties resolve to the
// lowest index. `hint` (a likely winner, e.g. the previous assignment) only
// tightens the initial bound; the result is the same for any hint.
NearestCodeword nearest_codeword(std::span<const double> x,
                                 const VectorSet& codewords,
                                 std::size_t hint = 0);
inline NearestCodeword nearest_codeword(std::span<const double> x,
                                        const Codebook& codebook) {
  return nearest_codeword(x, codebook.codewords());
}

// Mean over `vectors` of the squared distance to the nearest codeword.
double average_distortion(const VectorSet& vectors, const Codebook& codebook);

struct SofmParams {
  std::size_t grid_rows = 16;
  std::size_t grid_cols = 16;
  std::size_t epochs = 6;
  double eta0 = 0.5;
  double eta_final = 0.05;
  double sigma0 = 8.0;
  double sigma_final = 0.1;
  std::uint64_t seed = 1;

  // Near-square grid holding `size` neurons, sigma0 = max(rows, cols) / 2.
  static SofmParams for_size(std::size_t size, std::uint64_t seed);

  std::size_t size() const noexcept { return grid_rows * grid_cols; }
  void validate() const;
};

// Kohonen training. Each presented vector x pulls every neuron i toward it by
// eta(t) * h(i, c) * (x - w_i), where c is the winning neuron and
// h = exp(-d_grid(i, c)^2 / (2 sigma(t)^2)). eta and sigma decay
// exponentially over all epochs * N presentations; each epoch presents the
// vectors in a fresh seeded shuffle. Weights start uniform in [0, 255]^k.
// Codewords are the final weights in row-major grid order.
Codebook train_sofm(const VectorSet& vectors, const SofmParams& params);

struct LbgParams {
  std::size_t size = 256;
  double epsilon = 1e-3;
  std::size_t max_iters = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

// LBG: seeded sampling of `size` distinct training vectors, then alternating
// nearest-neighbour partition and centroid update until the relative drop
// in distortion falls below epsilon. An empty cell is re-seeded from the
// centroid of the most populous cell plus 1e-3 in every element.
// When `distortion_trace` is given it receives the average distortion of
// every partition step; the sequence is non-increasing.
Codebook train_lbg(const VectorSet& vectors, const LbgParams& params,
                   std::vector<double>* distortion_trace = nullptr);

// Rounds every codeword onto the 8-bit pixel lattice and nudges collisions
// apart, so that decoded blocks are themselves codewords and re-encode to
// the same index.
Codebook snap_to_pixel_lattice(const Codebook& codebook);

// Blocks of `channel` from every image, concatenated in image order.
VectorSet collect_training_blocks(std::span<const RasterImage> images,
                                  std::size_t block_side,
                                  std::size_t channel = 0);

// VQCB container: "VQCB", version u8, blockSide u8, dim u16, size u16,
// trainer u8, seed u64, then size*dim float64. Little-endian throughout.
std::vector<std::uint8_t> serialize_codebook(const Codebook& codebook);
Codebook parse_codebook(std::span<const std::uint8_t> bytes);
void save_codebook(const Codebook& codebook, const std::filesystem::path& path);
Codebook load_codebook(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept;
// FNV-1a over the serialized VQCB bytes.
std::uint64_t codebook_hash(const Codebook& codebook);

}  // namespace vqmark
