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

// Image fidelity (PSNR) and watermark similarity (NC, BCR, MAE) measures.

#pragma once

#include <cstddef>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "vqmark/image.h"
#include "vqmark/watermark.h"

namespace vqmark {

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

// 10 log10(255^2 / MSE) with MSE pooled over every sample of every channel.
// Returns kInfinitePsnr for identical images.
double psnr(const RasterImage& a, const RasterImage& b);

// Normalized correlation with bits taken as 0/1. Throws ValidationError if
// either mark is all zero.
double nc(const Watermark& original, const Watermark& extracted);

// Bit-correct rate in percent: (1 - errors / m) * 100.
double bcr(const Watermark& original, const Watermark& extracted);

// Fraction of differing bits.
double mae(const Watermark& original, const Watermark& extracted);

// Bits per pixel of a fixed-length index stream: ceil(log2 size) / side^2.
double index_bpp(std::size_t codebook_size, std::size_t block_side);

struct QualityReport {
  double psnr_db = kInfinitePsnr;
  std::optional<double> nc;  // empty when NC is undefined (all-zero mark)
  double bcr_percent = 0.0;
  double mae = 0.0;
  double bpp = 0.0;
};

QualityReport make_quality_report(const Watermark& original,
                                  const Watermark& extracted, double psnr_db,
                                  double bpp);

// PSNR as a JSON number, or the string "inf".
nlohmann::json psnr_to_json(double psnr_db);
double psnr_from_json(const nlohmann::json& j);

// Keys: psnr_db, nc, bcr_percent, mae, bpp.
void to_json(nlohmann::json& j, const QualityReport& report);
void from_json(const nlohmann::json& j, QualityReport& report);

}  // namespace vqmark
