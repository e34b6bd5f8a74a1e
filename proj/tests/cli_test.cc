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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.h"
#include "oracles.h"
#include "vqmark/codebook.h"
#include "vqmark/image.h"
#include "vqmark/watermark.h"

namespace vqmark {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "vqmark");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return testing::temp_path("cli_" + name).string(); }

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    save_image(testing::smooth_image(64, 64, 3, 1), tmp("host.ppm"));
    save_image(testing::smooth_image(32, 32, 1, 2), tmp("gray.pgm"));
    save_watermark(Watermark(16, testing::random_bits(256, 3)), tmp("wm.pgm"));
    save_watermark(Watermark(64, testing::random_bits(4096, 4)), tmp("wm64.pgm"));
    const Result r = run({"train", "-i", tmp("host.ppm"), "--size", "16", "--seed", "3",
                          "-o", tmp("cb.vqcb")});
    ASSERT_EQ(r.code, 0) << r.err;
  }
};

TEST_F(CliTest, TrainSofmWritesCodebook) {
  const Result r = run({"train", "-i", tmp("gray.pgm"), "--size", "32", "-o", tmp("g.vqcb")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("distortion:"), std::string::npos);
  EXPECT_NE(r.out.find("wall_time_s:"), std::string::npos);
  EXPECT_NE(r.err.find("\"trainer\":\"sofm\""), std::string::npos);
  const Codebook cb = load_codebook(tmp("g.vqcb"));
  EXPECT_EQ(cb.size(), 32u);
  EXPECT_EQ(cb.dim(), 16u);
}

TEST_F(CliTest, TrainLbgLogsNonIncreasingTrace) {
  const Result r = run({"train", "-i", tmp("host.ppm"), "--trainer", "lbg", "--size", "16",
                        "--epsilon", "1e-3", "-o", tmp("l.vqcb")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto at = r.out.find("lbg_distortion_trace:");
  ASSERT_NE(at, std::string::npos);
  std::istringstream is(r.out.substr(at + 21));
  std::string line;
  std::getline(is, line);
  std::istringstream values(line);
  std::vector<double> trace;
  for (double v; values >> v;) trace.push_back(v);
  ASSERT_GE(trace.size(), 2u);
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
}

TEST_F(CliTest, ValidationFailsBeforeIo) {
  Result r = run({"train", "-i", "/nonexistent.ppm", "--size", "255", "-o", tmp("x.vqcb")});
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_NE(r.err.find("even"), std::string::npos);
  r = run({"train", "-i", tmp("host.ppm"), "--trainer", "kmeans", "-o", tmp("x.vqcb")});
  EXPECT_EQ(r.code, cli::kValidation);
  r = run({"embed", "--host", tmp("host.ppm")});
  EXPECT_EQ(r.code, cli::kValidation);
  r = run({});
  EXPECT_EQ(r.code, cli::kValidation);
}

TEST_F(CliTest, IoErrorCode) {
  const Result r = run({"train", "-i", "/nonexistent.ppm", "--size", "16", "-o", tmp("x.vqcb")});
  EXPECT_EQ(r.code, cli::kIo);
}

TEST_F(CliTest, EmbedAndExtractBothPaths) {
  Result r = run({"embed", "--host", tmp("host.ppm"), "--codebook", tmp("cb.vqcb"),
                  "--watermark", tmp("wm.pgm"), "--key", "77", "-o", tmp("m.vqix"),
                  "--preview", tmp("m.ppm")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("psnr_db:"), std::string::npos);

  for (const char* input : {"m.vqix", "m.ppm"}) {
    r = run({"extract", "--input", tmp(input), "--codebook", tmp("cb.vqcb"), "--key", "77",
             "--reference", tmp("wm.pgm"), "-o", tmp("x.pgm"), "--report", tmp("r.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["nc"], 1.0) << input;
    EXPECT_EQ(j["bcr_percent"], 100.0);
    EXPECT_EQ(j["mae"], 0.0);
    EXPECT_EQ(load_watermark(tmp("x.pgm")), load_watermark(tmp("wm.pgm")));
    std::ifstream report(tmp("r.json"));
    EXPECT_EQ(json::parse(report), j);
  }

  r = run({"extract", "--input", tmp("m.vqix"), "--codebook", tmp("cb.vqcb"), "--key", "78",
           "--reference", tmp("wm.pgm"), "-o", tmp("x.pgm")});
  ASSERT_EQ(r.code, 0) << r.err;
  const double b = json::parse(r.out)["bcr_percent"];
  EXPECT_GT(b, 25.0);
  EXPECT_LT(b, 75.0);
}

TEST_F(CliTest, ExtractErrors) {
  run({"train", "-i", tmp("host.ppm"), "--size", "16", "--seed", "4", "-o", tmp("cb2.vqcb")});
  run({"embed", "--host", tmp("host.ppm"), "--codebook", tmp("cb.vqcb"), "--watermark",
       tmp("wm.pgm"), "--key", "1", "-o", tmp("e.vqix")});
  Result r = run({"extract", "--input", tmp("e.vqix"), "--codebook", tmp("cb2.vqcb"), "--key",
                  "1", "--side", "16", "-o", tmp("x.pgm")});
  EXPECT_EQ(r.code, cli::kFormat);
  EXPECT_NE(r.err.find("mismatch"), std::string::npos);

  std::ofstream(tmp("junk.bin")) << "GIF89a";
  r = run({"extract", "--input", tmp("junk.bin"), "--codebook", tmp("cb.vqcb"), "--key", "1",
           "--side", "16", "-o", tmp("x.pgm")});
  EXPECT_EQ(r.code, cli::kFormat);
}

TEST_F(CliTest, CapacityErrorCode) {
  const Result r = run({"embed", "--host", tmp("host.ppm"), "--codebook", tmp("cb.vqcb"),
                        "--watermark", tmp("wm64.pgm"), "--key", "1", "-o", tmp("c.vqix")});
  EXPECT_EQ(r.code, cli::kCapacity);
}

TEST_F(CliTest, Attack) {
  Result r = run({"attack", "--input", tmp("host.ppm"), "--spec",
                  R"({"kind":"median","params":{"window":3}})", "-o", tmp("a.ppm")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(load_image(tmp("a.ppm")).same_shape(load_image(tmp("host.ppm"))));

  r = run({"attack", "--input", tmp("host.ppm"), "--spec", R"({"kind":"rotate"})", "-o",
           tmp("a.ppm")});
  EXPECT_EQ(r.code, cli::kValidation);
  EXPECT_NE(r.err.find("jpegLike"), std::string::npos);
  EXPECT_NE(r.err.find("wiener"), std::string::npos);
}

TEST_F(CliTest, EvaluateReport) {
  std::ofstream(tmp("suite.json"))
      << R"([{"kind":"wiener","params":{"window":3}},{"kind":"median","params":{"window":3}},)"
      << R"({"kind":"jpegLike","params":{"q":8}}])";
  Result r = run({"evaluate", "--host", tmp("host.ppm"), "--codebook", tmp("cb.vqcb"),
                  "--watermark", tmp("wm.pgm"), "--key", "5", "--suite", tmp("suite.json"),
                  "--threads", "2", "-o", tmp("report.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["rows"][0]["quality"]["nc"], 1.0);
  EXPECT_EQ(j["rows"][2]["label"], "median(window=3)");
  EXPECT_EQ(j["config"]["key"], 5);
  EXPECT_TRUE(j.contains("tool_version"));
  EXPECT_EQ(j["codebook_hash"].get<std::string>().size(), 16u);

  r = run({"evaluate", "--host", tmp("host.ppm"), "--codebook", tmp("cb.vqcb"), "--watermark",
           tmp("wm.pgm"), "--key", "5", "--table"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("BCR"), std::string::npos);
}

}  // namespace
}  // namespace vqmark
