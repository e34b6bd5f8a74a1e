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

// End-to-end helpers: train a coding-ready codebook, embed a mark into a
// host, and run an attack suite against the watermarked result.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vqmark/attacks.h"
#include "vqmark/codebook.h"
#include "vqmark/image.h"
#include "vqmark/metrics.h"
#include "vqmark/partition.h"
#include "vqmark/vq_codec.h"
#include "vqmark/watermark.h"

namespace vqmark {

struct TrainingRequest {
  Trainer trainer = Trainer::kSofm;
  std::size_t size = 256;
  std::uint64_t seed = 1;
  std::optional<std::size_t> epochs;  // SOFM override
  std::optional<double> epsilon;      // LBG override
  std::optional<std::size_t> max_iters;
};

struct TrainingResult {
  Codebook codebook;  // snapped to the pixel lattice
  double distortion = 0.0;  // average distortion of the snapped codebook
  std::vector<double> lbg_trace;
  double seconds = 0.0;  // trainer wall time, excluding snapping
};

TrainingResult train_codebook(const VectorSet& blocks,
                              const TrainingRequest& request);

struct EmbeddedImage {
  EncodedImage plain;   // VQ indices before marking
  EncodedImage marked;  // the compressed watermarked image
  RasterImage decoded;  // decode of `marked`
};

EmbeddedImage embed_host(const RasterImage& host, const Codebook& codebook,
                         const PartitionedCodebook& partition,
                         const Watermark& wm, EmbedKey key);

struct EvaluationRow {
  std::string label;
  std::optional<AttackSpec> attack;  // empty for the no-attack baseline
  QualityReport quality;  // psnr_db is attacked image vs host
};

struct EvaluationReport {
  std::string version;
  std::uint64_t codebook_hash = 0;
  std::size_t codebook_size = 0;
  std::size_t block_side = 0;
  std::uint64_t key = 0;
  std::size_t watermark_side = 0;
  double plain_psnr_db = 0.0;        // host vs VQ decode without the mark
  double watermarked_psnr_db = 0.0;  // host vs decoded watermarked image
  double bpp = 0.0;
  nlohmann::json config = nlohmann::json::object();
  std::vector<EvaluationRow> rows;  // baseline first, then suite order
};

// Embed, decode, then for each attack: attack, extract from the attacked
// image, and score against `wm`. Attacks run on up to `threads` workers;
// row order always follows the suite. A failing attack aborts the run with
// an Error naming it.
EvaluationReport evaluate(const RasterImage& host, const Codebook& codebook,
                          const Watermark& wm, EmbedKey key,
                          std::span<const AttackSpec> suite,
                          std::size_t threads = 1);

// `requested` if given, else VQMARK_THREADS; 0 means hardware concurrency.
std::size_t resolve_thread_count(std::optional<std::size_t> requested = {});

nlohmann::json report_to_json(const EvaluationReport& report);
// Plain-text table with NC / MAE / BCR / PSNR columns.
std::string render_table(const EvaluationReport& report);

std::vector<AttackSpec> parse_suite(const nlohmann::json& j);

}  // namespace vqmark
