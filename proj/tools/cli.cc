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

#include "cli.h"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vqmark/attacks.h"
#include "vqmark/codebook.h"
#include "vqmark/error.h"
#include "vqmark/evaluation.h"
#include "vqmark/metrics.h"
#include "vqmark/partition.h"
#include "vqmark/version.h"
#include "vqmark/vq_codec.h"
#include "vqmark/watermark.h"

namespace vqmark::cli {
namespace {

using nlohmann::json;

struct TrainArgs {
  std::vector<std::string> images;
  std::string trainer = "sofm";
  std::size_t size = 256;
  std::size_t block_side = 4;
  std::uint64_t seed = 1;
  std::optional<std::size_t> epochs;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_iters;
  std::size_t channel = 0;
  std::string out;
};

struct EmbedArgs {
  std::string host;
  std::string codebook;
  std::string watermark;
  std::uint64_t key = 0;
  std::string out;
  std::string preview;
};

struct ExtractArgs {
  std::string input;
  std::string codebook;
  std::uint64_t key = 0;
  std::optional<std::size_t> side;
  std::string out;
  std::string reference;
  std::string host;
  std::string report;
};

struct AttackArgs {
  std::string input;
  std::string spec;
  std::string spec_file;
  std::string original;
  std::string out;
};

struct EvaluateArgs {
  std::string host;
  std::string codebook;
  std::string watermark;
  std::uint64_t key = 0;
  std::string suite;
  std::string out;
  bool table = false;
  std::optional<std::size_t> threads;
};

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

void log_config(std::ostream& err, const std::string& command, const json& config) {
  err << "vqmark " << kVersion << " " << command << " config: " << config.dump()
      << "\n";
}

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  TrainingRequest request;
  request.trainer = parse_trainer(a.trainer);
  request.size = a.size;
  request.seed = a.seed;
  request.epochs = a.epochs;
  request.epsilon = a.epsilon;
  request.max_iters = a.max_iters;
  if (a.size < 2 || a.size % 2 != 0) {
    throw ValidationError("codebook size must be even and at least 2, got " +
                          std::to_string(a.size));
  }
  if (a.size > 0xFFFF) throw ValidationError("codebook size must be < 65536");
  if (a.block_side == 0 || a.block_side > 15) {
    throw ValidationError("block side must lie in [1, 15]");
  }
  if (a.channel > 2) throw ValidationError("channel must be 0, 1 or 2");
  if (request.epochs && *request.epochs == 0) {
    throw ValidationError("epochs must be positive");
  }
  if (request.epsilon && !(*request.epsilon > 0.0)) {
    throw ValidationError("epsilon must be positive");
  }

  log_config(err, "train",
             {{"images", a.images},
              {"trainer", a.trainer},
              {"size", a.size},
              {"block_side", a.block_side},
              {"seed", a.seed},
              {"epochs", a.epochs ? json(*a.epochs) : json(nullptr)},
              {"epsilon", a.epsilon ? json(*a.epsilon) : json(nullptr)},
              {"max_iters", a.max_iters ? json(*a.max_iters) : json(nullptr)},
              {"channel", a.channel},
              {"out", a.out}});

  std::vector<RasterImage> images;
  for (const auto& path : a.images) images.push_back(load_image(path));
  const VectorSet blocks = collect_training_blocks(images, a.block_side, a.channel);
  const TrainingResult result = train_codebook(blocks, request);
  save_codebook(result.codebook, a.out);

  out << "trainer: " << trainer_name(request.trainer) << "\n"
      << "codebook: " << result.codebook.size() << " x "
      << result.codebook.dim() << " -> " << a.out << "\n"
      << "codebook_hash: " << hex64(codebook_hash(result.codebook)) << "\n"
      << "training_vectors: " << blocks.size() << "\n"
      << "distortion: " << std::setprecision(10) << result.distortion << "\n"
      << "wall_time_s: " << result.seconds << "\n";
  if (!result.lbg_trace.empty()) {
    out << "lbg_distortion_trace:";
    for (double d : result.lbg_trace) out << " " << d;
    out << "\n";
  }
  return kOk;
}

int cmd_embed(const EmbedArgs& a, std::ostream& out, std::ostream& err) {
  log_config(err, "embed",
             {{"host", a.host},
              {"codebook", a.codebook},
              {"watermark", a.watermark},
              {"key", a.key},
              {"out", a.out},
              {"preview", a.preview}});
  const RasterImage host = load_image(a.host);
  const Codebook codebook = load_codebook(a.codebook);
  const Watermark wm = load_watermark(a.watermark);
  const PartitionedCodebook partition(codebook);
  const EmbeddedImage result =
      embed_host(host, codebook, partition, wm, EmbedKey{a.key});
  save_encoded(result.marked, a.out);
  if (!a.preview.empty()) save_image(result.decoded, a.preview);
  const double quality = psnr(host, result.decoded);
  out << "marked_positions: " << wm.size() << " of "
      << result.marked.blocks_per_channel() << "\n"
      << "psnr_db: " << psnr_to_json(quality).dump() << "\n"
      << "bpp: " << index_bpp(codebook.size(), codebook.block_side()) << "\n";
  return kOk;
}

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  if (a.side && *a.side == 0) throw ValidationError("side must be positive");
  log_config(err, "extract",
             {{"input", a.input},
              {"codebook", a.codebook},
              {"key", a.key},
              {"side", a.side ? json(*a.side) : json(nullptr)},
              {"out", a.out},
              {"reference", a.reference},
              {"host", a.host},
              {"report", a.report}});
  const Codebook codebook = load_codebook(a.codebook);
  const PartitionedCodebook partition(codebook);
  std::optional<Watermark> reference;
  if (!a.reference.empty()) reference = load_watermark(a.reference);
  const std::size_t side = a.side ? *a.side : reference ? reference->side() : 64;
  if (reference && reference->side() != side) {
    throw ValidationError("reference watermark side does not match --side");
  }

  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw IoError("cannot open " + a.input);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  Watermark extracted;
  std::optional<RasterImage> image;
  if (is_encoded_container(bytes)) {
    const EncodedImage enc = parse_encoded(bytes);
    extracted = extract_from_indices(enc, partition, EmbedKey{a.key}, side);
    if (!a.host.empty()) image = decode_image(enc, codebook);
    err << "input: VQIX container (index path)\n";
  } else if (bytes.size() >= 2 && bytes[0] == 'P' &&
             (bytes[1] == '5' || bytes[1] == '6')) {
    image = decode_netpbm(bytes);
    extracted = extract_from_image(*image, codebook, partition, EmbedKey{a.key}, side);
    err << "input: decoded image (re-encoding path)\n";
  } else {
    throw FormatError("unrecognized input format (expected VQIX, P5 or P6)", 0);
  }
  save_watermark(extracted, a.out);

  if (reference) {
    const double bpp = index_bpp(codebook.size(), codebook.block_side());
    double quality = kInfinitePsnr;
    if (!a.host.empty()) quality = psnr(load_image(a.host), *image);
    QualityReport report = make_quality_report(*reference, extracted, quality, bpp);
    json j = report;
    if (a.host.empty()) j["psnr_db"] = nullptr;
    out << j.dump(2) << "\n";
    if (!a.report.empty()) write_text(a.report, j.dump(2) + "\n");
  } else {
    out << "extracted " << side << "x" << side << " watermark -> " << a.out << "\n";
  }
  return kOk;
}

int cmd_attack(const AttackArgs& a, std::ostream& out, std::ostream& err) {
  if (a.spec.empty() == a.spec_file.empty()) {
    throw ValidationError("give exactly one of --spec or --spec-file");
  }
  json j;
  if (!a.spec.empty()) {
    try {
      j = json::parse(a.spec);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("invalid attack spec JSON: ") + e.what());
    }
  } else {
    j = read_json_file(a.spec_file);
  }
  const AttackSpec spec = j.get<AttackSpec>();
  log_config(err, "attack",
             {{"input", a.input}, {"spec", spec}, {"original", a.original}, {"out", a.out}});
  const RasterImage img = load_image(a.input);
  std::optional<RasterImage> original;
  if (!a.original.empty()) original = load_image(a.original);
  const RasterImage attacked =
      apply_attack(img, spec, original ? &*original : nullptr);
  save_image(attacked, a.out);
  out << "attack: " << spec.label() << " -> " << a.out << "\n"
      << "psnr_db: " << psnr_to_json(psnr(img, attacked)).dump() << "\n";
  return kOk;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const std::size_t threads = resolve_thread_count(a.threads);
  std::vector<AttackSpec> suite;
  if (!a.suite.empty()) suite = parse_suite(read_json_file(a.suite));
  json suite_json = json::array();
  for (const auto& s : suite) suite_json.push_back(s);
  const json config = {{"command", "evaluate"},
                       {"host", a.host},
                       {"codebook", a.codebook},
                       {"watermark", a.watermark},
                       {"key", a.key},
                       {"suite", suite_json},
                       {"threads", threads},
                       {"out", a.out}};
  log_config(err, "evaluate", config);

  const RasterImage host = load_image(a.host);
  const Codebook codebook = load_codebook(a.codebook);
  const Watermark wm = load_watermark(a.watermark);
  EvaluationReport report =
      evaluate(host, codebook, wm, EmbedKey{a.key}, suite, threads);
  report.config = config;
  const json j = report_to_json(report);
  if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
  if (a.table) {
    out << render_table(report);
  } else {
    out << j.dump(2) << "\n";
  }
  return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vqmark: SOFM vector-quantization image codec with codebook-partition watermarking"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a codebook (SOFM or LBG)");
  train_cmd->add_option("--image,-i", train.images, "Training image(s), PGM/PPM")->required();
  train_cmd->add_option("--trainer", train.trainer, "sofm or lbg")->capture_default_str();
  train_cmd->add_option("--size", train.size, "Codebook size (even)")->capture_default_str();
  train_cmd->add_option("--block-side", train.block_side, "Block side a")->capture_default_str();
  train_cmd->add_option("--seed", train.seed, "Training seed")->capture_default_str();
  train_cmd->add_option("--epochs", train.epochs, "SOFM epochs");
  train_cmd->add_option("--epsilon", train.epsilon, "LBG relative distortion threshold");
  train_cmd->add_option("--max-iters", train.max_iters, "LBG iteration cap");
  train_cmd->add_option("--channel", train.channel, "Channel the training blocks come from")
      ->capture_default_str();
  train_cmd->add_option("--out,-o", train.out, "Output VQCB file")->required();

  EmbedArgs embed_args;
  auto* embed_cmd = app.add_subcommand("embed", "Compress a host image and embed a watermark");
  embed_cmd->add_option("--host", embed_args.host, "Host image")->required();
  embed_cmd->add_option("--codebook", embed_args.codebook, "VQCB codebook")->required();
  embed_cmd->add_option("--watermark", embed_args.watermark, "Square P5 watermark")->required();
  embed_cmd->add_option("--key", embed_args.key, "Secret key K")->required();
  embed_cmd->add_option("--out,-o", embed_args.out, "Output VQIX container")->required();
  embed_cmd->add_option("--preview", embed_args.preview, "Write the decoded image here");

  ExtractArgs extract_args;
  auto* extract_cmd = app.add_subcommand("extract", "Extract a watermark from a VQIX file or image");
  extract_cmd->add_option("--input", extract_args.input, "VQIX container or PGM/PPM image")->required();
  extract_cmd->add_option("--codebook", extract_args.codebook, "VQCB codebook")->required();
  extract_cmd->add_option("--key", extract_args.key, "Secret key K")->required();
  extract_cmd->add_option("--side", extract_args.side, "Watermark side M (default: reference side or 64)");
  extract_cmd->add_option("--out,-o", extract_args.out, "Output watermark PGM")->required();
  extract_cmd->add_option("--reference", extract_args.reference, "Original watermark for NC/BCR/MAE");
  extract_cmd->add_option("--host", extract_args.host, "Original host, for PSNR in the report");
  extract_cmd->add_option("--report", extract_args.report, "Write the JSON quality report here");

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack", "Apply one attack to an image");
  attack_cmd->add_option("--input", attack_args.input, "Input image")->required();
  attack_cmd->add_option("--spec", attack_args.spec, "Attack spec as inline JSON");
  attack_cmd->add_option("--spec-file", attack_args.spec_file, "Attack spec JSON file");
  attack_cmd->add_option("--original", attack_args.original,
                         "Unmarked original (cropQuarter fill=original)");
  attack_cmd->add_option("--out,-o", attack_args.out, "Output image")->required();

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand("evaluate", "Embed, attack, extract and score");
  eval_cmd->add_option("--host", eval_args.host, "Host image")->required();
  eval_cmd->add_option("--codebook", eval_args.codebook, "VQCB codebook")->required();
  eval_cmd->add_option("--watermark", eval_args.watermark, "Square P5 watermark")->required();
  eval_cmd->add_option("--key", eval_args.key, "Secret key K")->required();
  eval_cmd->add_option("--suite", eval_args.suite, "JSON array of attack specs");
  eval_cmd->add_option("--out,-o", eval_args.out, "Write the JSON report here");
  eval_cmd->add_flag("--table", eval_args.table, "Print a text table instead of JSON");
  eval_cmd->add_option("--threads", eval_args.threads,
                       "Worker threads (default VQMARK_THREADS, 0 = auto)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*train_cmd) return cmd_train(train, out, err);
    if (*embed_cmd) return cmd_embed(embed_args, out, err);
    if (*extract_cmd) return cmd_extract(extract_args, out, err);
    if (*attack_cmd) return cmd_attack(attack_args, out, err);
    if (*eval_cmd) return cmd_evaluate(eval_args, out, err);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kCapacity;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kFormat;
  } catch (const CodebookMismatchError& e) {
    err << "codebook mismatch: " << e.what() << "\n";
    return kFormat;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace vqmark::cli
