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

#include "vqmark/metrics.h"

#include <cmath>
#include <cstdlib>
#include <string>

#include "vqmark/error.h"

namespace vqmark {
namespace {

void check_lengths(const Watermark& a, const Watermark& b) {
  if (a.size() != b.size()) {
    throw ValidationError("watermark lengths differ: " + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()));
  }
  if (a.size() == 0) throw ValidationError("watermarks are empty");
}

std::size_t bit_errors(const Watermark& a, const Watermark& b) {
  std::size_t errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i) errors += a[i] != b[i];
  return errors;
}

}  // namespace

double psnr(const RasterImage& a, const RasterImage& b) {
  if (!a.same_shape(b)) {
    throw ValidationError("PSNR needs images of identical shape");
  }
  if (a.sample_count() == 0) throw ValidationError("PSNR of empty images");
  double sum = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    const double d = static_cast<double>(da[i]) - static_cast<double>(db[i]);
    sum += d * d;
  }
  if (sum == 0.0) return kInfinitePsnr;
  const double mse = sum / static_cast<double>(da.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double nc(const Watermark& original, const Watermark& extracted) {
  check_lengths(original, extracted);
  double cross = 0.0, energy_a = 0.0, energy_b = 0.0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    cross += original[i] * extracted[i];
    energy_a += original[i] * original[i];
    energy_b += extracted[i] * extracted[i];
  }
  if (energy_a == 0.0 || energy_b == 0.0) {
    throw ValidationError("NC is undefined for an all-zero watermark");
  }
  return cross / std::sqrt(energy_a * energy_b);
}

double bcr(const Watermark& original, const Watermark& extracted) {
  check_lengths(original, extracted);
  const double m = static_cast<double>(original.size());
  return (1.0 - static_cast<double>(bit_errors(original, extracted)) / m) * 100.0;
}

double mae(const Watermark& original, const Watermark& extracted) {
  check_lengths(original, extracted);
  return static_cast<double>(bit_errors(original, extracted)) /
         static_cast<double>(original.size());
}

double index_bpp(std::size_t codebook_size, std::size_t block_side) {
  if (codebook_size < 2) throw ValidationError("codebook size must be >= 2");
  if (block_side == 0) throw ValidationError("block side must be positive");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < codebook_size) ++bits;
  return static_cast<double>(bits) /
         static_cast<double>(block_side * block_side);
}

QualityReport make_quality_report(const Watermark& original,
                                  const Watermark& extracted, double psnr_db,
                                  double bpp) {
  QualityReport r;
  r.psnr_db = psnr_db;
  try {
    r.nc = nc(original, extracted);
  } catch (const ValidationError&) {
    check_lengths(original, extracted);
    r.nc.reset();
  }
  r.bcr_percent = bcr(original, extracted);
  r.mae = mae(original, extracted);
  r.bpp = bpp;
  return r;
}

nlohmann::json psnr_to_json(double psnr_db) {
  if (std::isinf(psnr_db)) return "inf";
  return psnr_db;
}

double psnr_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinitePsnr;
  return j.get<double>();
}

void to_json(nlohmann::json& j, const QualityReport& report) {
  j = nlohmann::json{
      {"psnr_db", psnr_to_json(report.psnr_db)},
      {"nc", report.nc ? nlohmann::json(*report.nc) : nlohmann::json(nullptr)},
      {"bcr_percent", report.bcr_percent},
      {"mae", report.mae},
      {"bpp", report.bpp},
  };
}

void from_json(const nlohmann::json& j, QualityReport& report) {
  report.psnr_db = psnr_from_json(j.at("psnr_db"));
  if (j.at("nc").is_null()) {
    report.nc.reset();
  } else {
    report.nc = j.at("nc").get<double>();
  }
  report.bcr_percent = j.at("bcr_percent").get<double>();
  report.mae = j.at("mae").get<double>();
  report.bpp = j.at("bpp").get<double>();
}

}  // namespace vqmark
