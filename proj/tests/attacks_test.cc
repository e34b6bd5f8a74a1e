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

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "oracles.h"
#include "vqmark/attacks.h"
#include "vqmark/error.h"
#include "vqmark/metrics.h"

namespace vqmark {
namespace {

using nlohmann::json;

std::vector<AttackSpec> all_defaults(std::uint64_t seed) {
  std::vector<AttackSpec> out;
  for (auto name : attack_kind_names()) {
    out.push_back(AttackSpec::defaults(parse_attack_kind(name), seed));
  }
  return out;
}

TEST(Attacks, MedianFixesConstantImage) {
  RasterImage img(9, 7, 3);
  std::fill(img.data().begin(), img.data().end(), 77);
  for (int w : {3, 5, 7}) {
    AttackSpec s = AttackSpec::defaults(AttackKind::kMedian);
    s.params.window = w;
    EXPECT_EQ(apply_attack(img, s), img);
  }
}

TEST(Attacks, MedianHandChecked) {
  // Single impulse is removed; replicate padding keeps the corner.
  RasterImage img(3, 3, 1, {10, 10, 10, 10, 255, 10, 10, 10, 10});
  const auto out = apply_attack(img, AttackSpec::defaults(AttackKind::kMedian));
  for (auto v : out.data()) EXPECT_EQ(v, 10);
}

TEST(Attacks, JpegLikeUnitStepIsNearIdentity) {
  const auto img = testing::random_image(37, 21, 3, 1);
  AttackSpec s = AttackSpec::defaults(AttackKind::kJpegLike);
  s.params.q = 1;
  const auto out = apply_attack(img, s);
  for (std::size_t i = 0; i < img.sample_count(); ++i) {
    EXPECT_LE(std::abs(int(img.data()[i]) - int(out.data()[i])), 1);
  }
}

TEST(Attacks, JpegLikePsnrMonotoneInStep) {
  for (std::uint32_t seed = 0; seed < 3; ++seed) {
    const auto img = testing::smooth_image(64, 64, 3, seed);
    double prev = kInfinitePsnr;
    for (double q : {1.0, 4.0, 8.0, 32.0, 64.0, 128.0}) {
      AttackSpec s = AttackSpec::defaults(AttackKind::kJpegLike);
      s.params.q = q;
      const double p = psnr(img, apply_attack(img, s));
      EXPECT_LE(p, prev) << "q " << q;
      prev = p;
    }
  }
}

TEST(Attacks, SaltPepperCountWithinBinomialBand) {
  RasterImage img(100, 100, 1);
  std::fill(img.data().begin(), img.data().end(), 128);
  AttackSpec s = AttackSpec::defaults(AttackKind::kSaltPepper, 17);
  const auto out = apply_attack(img, s);
  std::size_t impulses = 0, salt = 0;
  for (auto v : out.data()) {
    if (v != 128) ++impulses;
    if (v == 255) ++salt;
    EXPECT_TRUE(v == 0 || v == 128 || v == 255);
  }
  const double sigma = std::sqrt(10000 * 0.05 * 0.95);
  EXPECT_NEAR(double(impulses), 500.0, 3 * sigma);
  EXPECT_NEAR(double(salt), impulses / 2.0, 3 * std::sqrt(impulses * 0.25));
}

TEST(Attacks, PreserveShape) {
  const auto img = testing::smooth_image(50, 30, 3, 3);
  for (const auto& s : all_defaults(5)) {
    const auto out = apply_attack(img, s, &img);
    EXPECT_TRUE(out.same_shape(img)) << s.label();
  }
}

TEST(Attacks, ContractiveFilters) {
  const auto img = testing::random_image(40, 40, 1, 4);
  RasterImage narrow = img;
  for (auto& v : narrow.data()) v = static_cast<std::uint8_t>(60 + v / 4);
  for (auto kind : {AttackKind::kWiener, AttackKind::kMedian, AttackKind::kBlur}) {
    for (int w : {3, 5, 7}) {
      AttackSpec s = AttackSpec::defaults(kind);
      s.params.window = w;
      const auto out = apply_attack(narrow, s);
      const auto [imin, imax] = std::minmax_element(narrow.data().begin(), narrow.data().end());
      const auto [omin, omax] = std::minmax_element(out.data().begin(), out.data().end());
      EXPECT_GE(*omin, *imin) << s.label();
      EXPECT_LE(*omax, *imax) << s.label();
    }
  }
}

TEST(Attacks, DeterministicAndSeeded) {
  const auto img = testing::smooth_image(32, 32, 3, 6);
  for (const auto& s : all_defaults(11)) {
    EXPECT_EQ(apply_attack(img, s, &img), apply_attack(img, s, &img)) << s.label();
  }
  for (auto kind : {AttackKind::kSaltPepper, AttackKind::kGaussianNoise}) {
    EXPECT_NE(apply_attack(img, AttackSpec::defaults(kind, 1)),
              apply_attack(img, AttackSpec::defaults(kind, 2)));
  }
}

TEST(Attacks, CropVariants) {
  const auto img = testing::smooth_image(40, 40, 3, 7);
  const auto orig = testing::smooth_image(40, 40, 3, 8);
  AttackSpec s = AttackSpec::defaults(AttackKind::kCropQuarter);
  auto out = apply_attack(img, s);
  EXPECT_EQ(out.at(19, 19, 1), 255);
  EXPECT_EQ(out.at(20, 19, 1), img.at(20, 19, 1));
  s.params.fill = CropFill::kBlack;
  EXPECT_EQ(apply_attack(img, s).at(0, 0, 0), 0);
  s.params.fill = CropFill::kOriginal;
  EXPECT_THROW(apply_attack(img, s), ValidationError);
  out = apply_attack(img, s, &orig);
  EXPECT_EQ(out.at(5, 5, 2), orig.at(5, 5, 2));
  EXPECT_EQ(out.at(25, 25, 2), img.at(25, 25, 2));

  AttackSpec border = AttackSpec::defaults(AttackKind::kCropBorder);
  border.params.border = 5;
  out = apply_attack(img, border);
  EXPECT_EQ(out.at(4, 20, 0), 0);
  EXPECT_EQ(out.at(35, 20, 0), 0);
  EXPECT_EQ(out.at(20, 20, 0), img.at(20, 20, 0));

  out = apply_attack(img, AttackSpec::defaults(AttackKind::kIntercept));
  EXPECT_EQ(out.at(20, 20, 0), 128);
  EXPECT_EQ(out.at(0, 0, 0), img.at(0, 0, 0));
  std::size_t gray = 0;
  for (std::size_t y = 0; y < 40; ++y)
    for (std::size_t x = 0; x < 40; ++x)
      if (out.at(x, y, 0) == 128 && out.at(x, y, 1) == 128) ++gray;
  EXPECT_NEAR(double(gray) / 1600.0, 0.5, 0.06);
}

TEST(Attacks, EnhanceSpreadsHistogram) {
  RasterImage img(16, 16, 1);
  for (std::size_t i = 0; i < 256; ++i) img.data()[i] = static_cast<std::uint8_t>(100 + i % 20);
  const auto out = apply_attack(img, AttackSpec::defaults(AttackKind::kEnhance));
  const auto [lo, hi] = std::minmax_element(out.data().begin(), out.data().end());
  EXPECT_GT(*hi - *lo, 200);
}

TEST(Attacks, Validation) {
  AttackSpec s = AttackSpec::defaults(AttackKind::kMedian);
  s.params.window = 4;
  EXPECT_THROW(s.validate(), ValidationError);
  s = AttackSpec::defaults(AttackKind::kSaltPepper);
  s.params.density = 1.5;
  EXPECT_THROW(s.validate(), ValidationError);
  s = AttackSpec::defaults(AttackKind::kJpegLike);
  s.params.q = 0;
  EXPECT_THROW(s.validate(), ValidationError);
}

TEST(AttackJson, ParsesAndRoundTrips) {
  const auto s = json::parse(R"({"kind":"median","params":{"window":5}})").get<AttackSpec>();
  EXPECT_EQ(s.kind, AttackKind::kMedian);
  EXPECT_EQ(s.params.window, 5);
  EXPECT_EQ(s.label(), "median(window=5)");

  const auto j = json::parse(R"({"kind":"jpegLike","params":{"q":64}})").get<AttackSpec>();
  EXPECT_EQ(j.params.q, 64.0);
  const auto c = json::parse(R"({"kind":"cropQuarter","params":{"fill":255}})").get<AttackSpec>();
  EXPECT_EQ(c.params.fill, CropFill::kWhite);
  const auto n = json::parse(R"({"kind":"gaussianNoise","seed":9})").get<AttackSpec>();
  EXPECT_EQ(n.seed, 9u);
  EXPECT_EQ(n.params.sigma, 8.0);

  for (const auto& spec : all_defaults(3)) {
    const json out = spec;
    const AttackSpec back = out.get<AttackSpec>();
    EXPECT_EQ(json(back), out);
  }
}

TEST(AttackJson, UnknownKindListsKnownKinds) {
  try {
    json::parse(R"({"kind":"rotate"})").get<AttackSpec>();
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    for (auto name : attack_kind_names()) {
      EXPECT_NE(msg.find(std::string(name)), std::string::npos) << name;
    }
  }
  EXPECT_THROW(json::parse(R"({"kind":"median","params":{"size":3}})").get<AttackSpec>(),
               ValidationError);
  EXPECT_THROW(json::parse(R"({"kind":"median","params":{"window":4}})").get<AttackSpec>(),
               ValidationError);
}

}  // namespace
}  // namespace vqmark
