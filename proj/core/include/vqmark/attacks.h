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

// Deterministic image attacks used to probe watermark robustness: filtering,
// noise, cropping, histogram enhancement and a block-DCT lossy round trip.
// Every attack works per channel and preserves the image shape. Windowed
// filters replicate the border pixels.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vqmark/image.h"

namespace vqmark {

enum class AttackKind {
  kWiener,
  kMedian,
  kGaussianFilter,
  kSharpen,
  kBlur,
  kSaltPepper,
  kGaussianNoise,
  kCropQuarter,
  kCropBorder,
  kIntercept,
  kEnhance,
  kJpegLike,
};

// What replaces the cropped top-left quadrant.
enum class CropFill { kWhite, kBlack, kOriginal };

std::string_view attack_kind_name(AttackKind kind) noexcept;
std::span<const std::string_view> attack_kind_names() noexcept;
// Throws ValidationError listing the known kinds.
AttackKind parse_attack_kind(std::string_view name);

// Union of every kind's parameters; only the ones relevant to `kind` are
// read or serialized.
struct AttackParams {
  int window = 3;              // wiener, median: odd n for an n x n window
  double sigma = 0.0;          // gaussianFilter, sharpen, blur, gaussianNoise
  double amount = 1.0;         // sharpen: out = x + amount * (x - blur(x))
  double density = 0.05;       // saltPepper: fraction of corrupted samples
  CropFill fill = CropFill::kWhite;  // cropQuarter
  int border = 25;             // cropBorder: frame width in pixels
  int gray = 128;              // intercept: fill value
  double area = 0.5;           // intercept: fraction of the image area
  double q = 64.0;             // jpegLike: DCT quantization step
};

struct AttackSpec {
  AttackKind kind = AttackKind::kMedian;
  AttackParams params;
  std::uint64_t seed = 0;  // saltPepper, gaussianNoise

  // Spec for `kind` with its default parameters.
  static AttackSpec defaults(AttackKind kind, std::uint64_t seed = 0);

  void validate() const;
  // Short human-readable description, e.g. "median(window=3)".
  std::string label() const;
};

// `original` is required only for cropQuarter with CropFill::kOriginal.
RasterImage apply_attack(const RasterImage& img, const AttackSpec& spec,
                         const RasterImage* original = nullptr);

// {"kind": ..., "params": {...}, "seed": ...}. Missing params take the
// kind's defaults; unknown parameter names are rejected.
void to_json(nlohmann::json& j, const AttackSpec& spec);
void from_json(const nlohmann::json& j, AttackSpec& spec);

}  // namespace vqmark
