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

#include "vqmark/evaluation.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "vqmark/error.h"
#include "vqmark/version.h"

namespace vqmark {

TrainingResult train_codebook(const VectorSet& blocks,
                              const TrainingRequest& request) {
  TrainingResult result;
  const auto start = std::chrono::steady_clock::now();
  Codebook raw;
  if (request.trainer == Trainer::kSofm) {
    SofmParams params = SofmParams::for_size(request.size, request.seed);
    if (request.epochs) params.epochs = *request.epochs;
    raw = train_sofm(blocks, params);
  } else {
    LbgParams params;
    params.size = request.size;
    params.seed = request.seed;
    if (request.epsilon) params.epsilon = *request.epsilon;
    if (request.max_iters) params.max_iters = *request.max_iters;
    raw = train_lbg(blocks, params, &result.lbg_trace);
  }
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  result.codebook = snap_to_pixel_lattice(raw);
  result.distortion = average_distortion(blocks, result.codebook);
  return result;
}

EmbeddedImage embed_host(const RasterImage& host, const Codebook& codebook,
                         const PartitionedCodebook& partition,
                         const Watermark& wm, EmbedKey key) {
  EmbeddedImage out;
  out.plain = encode_image(host, codebook);
  out.marked = embed(out.plain, partition, wm, key);
  out.decoded = decode_image(out.marked, codebook);
  return out;
}

std::size_t resolve_thread_count(std::optional<std::size_t> requested) {
  std::size_t n = 0;
  if (requested) {
    n = *requested;
  } else if (const char* env = std::getenv("VQMARK_THREADS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw ValidationError(std::string("VQMARK_THREADS is not a number: ") + env);
    }
    n = static_cast<std::size_t>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

EvaluationReport evaluate(const RasterImage& host, const Codebook& codebook,
                          const Watermark& wm, EmbedKey key,
                          std::span<const AttackSpec> suite,
                          std::size_t threads) {
  for (const auto& spec : suite) {
    try {
      spec.validate();
    } catch (const ValidationError& e) {
      throw ValidationError("attack " + spec.label() + " is invalid: " +
                            e.what());
    }
  }
  const PartitionedCodebook partition(codebook);
  const EmbeddedImage embedded = embed_host(host, codebook, partition, wm, key);

  EvaluationReport report;
  report.version = kVersion;
  report.codebook_hash = partition.codebook_hash();
  report.codebook_size = codebook.size();
  report.block_side = codebook.block_side();
  report.key = key.seed;
  report.watermark_side = wm.side();
  report.plain_psnr_db = psnr(host, decode_image(embedded.plain, codebook));
  report.watermarked_psnr_db = psnr(host, embedded.decoded);
  report.bpp = index_bpp(codebook.size(), codebook.block_side());

  const auto score = [&](const RasterImage& attacked) {
    const Watermark extracted =
        extract_from_image(attacked, codebook, partition, key, wm.side());
    return make_quality_report(wm, extracted, psnr(host, attacked), report.bpp);
  };

  EvaluationRow baseline;
  baseline.label = "none";
  baseline.quality = score(embedded.decoded);
  report.rows.push_back(std::move(baseline));

  std::vector<EvaluationRow> rows(suite.size());
  std::vector<std::exception_ptr> failures(suite.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < suite.size(); i = next++) {
      try {
        rows[i].label = suite[i].label();
        rows[i].attack = suite[i];
        rows[i].quality =
            score(apply_attack(embedded.decoded, suite[i], &host));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(suite.size(), 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < suite.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw Error("attack " + suite[i].label() + " failed: " + e.what());
    }
  }
  for (auto& row : rows) report.rows.push_back(std::move(row));
  return report;
}

nlohmann::json report_to_json(const EvaluationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["label"] = row.label;
    r["attack"] = row.attack ? nlohmann::json(*row.attack) : nlohmann::json(nullptr);
    r["quality"] = row.quality;
    rows.push_back(std::move(r));
  }
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << report.codebook_hash;
  return nlohmann::json{
      {"tool_version", report.version},
      {"codebook_hash", hash.str()},
      {"codebook_size", report.codebook_size},
      {"block_side", report.block_side},
      {"key", report.key},
      {"watermark_side", report.watermark_side},
      {"plain_psnr_db", psnr_to_json(report.plain_psnr_db)},
      {"watermarked_psnr_db", psnr_to_json(report.watermarked_psnr_db)},
      {"bpp", report.bpp},
      {"config", report.config},
      {"rows", rows},
  };
}

std::string render_table(const EvaluationReport& report) {
  std::size_t label_width = 13;
  for (const auto& row : report.rows) {
    label_width = std::max(label_width, row.label.size());
  }
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(label_width)) << "Attack Method"
     << "  " << std::right << std::setw(8) << "NC" << std::setw(9) << "MAE"
     << std::setw(10) << "BCR (%)" << std::setw(11) << "PSNR (dB)" << "\n";
  for (const auto& row : report.rows) {
    const auto& q = row.quality;
    os << std::left << std::setw(static_cast<int>(label_width)) << row.label
       << "  " << std::right << std::fixed;
    if (q.nc) {
      os << std::setw(8) << std::setprecision(4) << *q.nc;
    } else {
      os << std::setw(8) << "n/a";
    }
    os << std::setw(9) << std::setprecision(4) << q.mae << std::setw(10)
       << std::setprecision(4) << q.bcr_percent;
    if (std::isinf(q.psnr_db)) {
      os << std::setw(11) << "inf";
    } else {
      os << std::setw(11) << std::setprecision(4) << q.psnr_db;
    }
    os << "\n";
  }
  return os.str();
}

std::vector<AttackSpec> parse_suite(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("attack suite must be a JSON array");
  std::vector<AttackSpec> suite;
  for (const auto& item : j) suite.push_back(item.get<AttackSpec>());
  return suite;
}

}  // namespace vqmark
