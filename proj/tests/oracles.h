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

// Naive reference implementations used as test oracles. They share no code
// with the library and favour obviousness over speed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "vqmark/image.h"

namespace vqmark::testing {

// xorshift64*, written out from its published definition.
inline std::vector<std::size_t> oracle_positions(std::uint64_t key, std::size_t n,
                                                 std::size_t m2) {
  std::uint64_t s = key;
  if (s == 0) s = 0x9E3779B97F4A7C15ULL;
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = i;
  for (std::size_t i = 0; i < m2; ++i) {
    s = s ^ (s >> 12);
    s = s ^ (s << 25);
    s = s ^ (s >> 27);
    const std::uint64_t r = s * 0x2545F4914F6CDD1DULL;
    const std::size_t j = i + static_cast<std::size_t>(r % (n - i));
    const std::size_t t = a[i];
    a[i] = a[j];
    a[j] = t;
  }
  a.resize(m2);
  return a;
}

inline double oracle_dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Full-distance argmin, first minimum wins.
inline std::size_t oracle_nearest(const std::vector<double>& x,
                                  const std::vector<std::vector<double>>& cws) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cws.size(); ++i) {
    const double d = oracle_dist2(x, cws[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

inline double oracle_distortion(const std::vector<std::vector<double>>& xs,
                                const std::vector<std::vector<double>>& cws) {
  double total = 0.0;
  for (const auto& x : xs) total += oracle_dist2(x, cws[oracle_nearest(x, cws)]);
  return total / static_cast<double>(xs.size());
}

// Best 2-means distortion over Lloyd runs started from every pair of
// distinct points.
inline double oracle_two_means(const std::vector<std::vector<double>>& xs) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < xs.size(); ++p) {
    for (std::size_t q = p + 1; q < xs.size(); ++q) {
      if (xs[p] == xs[q]) continue;
      std::vector<std::vector<double>> c = {xs[p], xs[q]};
      for (int it = 0; it < 100; ++it) {
        std::vector<std::vector<double>> sum(2, std::vector<double>(xs[0].size(), 0.0));
        std::vector<double> cnt(2, 0.0);
        for (const auto& x : xs) {
          const std::size_t k = oracle_nearest(x, c);
          for (std::size_t d = 0; d < x.size(); ++d) sum[k][d] += x[d];
          cnt[k] += 1.0;
        }
        auto next = c;
        for (int k = 0; k < 2; ++k) {
          if (cnt[k] == 0.0) continue;
          for (std::size_t d = 0; d < next[k].size(); ++d) next[k][d] = sum[k][d] / cnt[k];
        }
        if (next == c) break;
        c = next;
      }
      best = std::min(best, oracle_distortion(xs, c));
    }
  }
  return best;
}

inline double oracle_pair_mse(const std::vector<double>& a, const std::vector<double>& b) {
  return oracle_dist2(a, b) / static_cast<double>(a.size());
}

// Minimum total intra-pair MSE over every perfect matching.
inline double oracle_min_matching(const std::vector<std::vector<double>>& cws,
                                  std::vector<bool>& used) {
  std::size_t first = 0;
  while (first < cws.size() && used[first]) ++first;
  if (first == cws.size()) return 0.0;
  used[first] = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = first + 1; j < cws.size(); ++j) {
    if (used[j]) continue;
    used[j] = true;
    best = std::min(best, oracle_pair_mse(cws[first], cws[j]) +
                              oracle_min_matching(cws, used));
    used[j] = false;
  }
  used[first] = false;
  return best;
}

inline std::size_t oracle_matching_count(std::size_t n) {
  std::size_t c = 1;
  for (std::size_t k = n - 1; k > 1; k -= 2) c *= k;
  return c;
}

inline double oracle_nc(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += double(a[i]) * double(b[i]);
    aa += double(a[i]) * double(a[i]);
    bb += double(b[i]) * double(b[i]);
  }
  return ab / std::sqrt(aa * bb);
}

inline double oracle_mae(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e += std::abs(double(a[i]) - double(b[i]));
  return e / static_cast<double>(a.size());
}

inline double oracle_psnr(const RasterImage& a, const RasterImage& b) {
  double se = 0.0;
  std::size_t n = 0;
  for (std::size_t y = 0; y < a.height(); ++y)
    for (std::size_t x = 0; x < a.width(); ++x)
      for (std::size_t c = 0; c < a.channels(); ++c) {
        const double d = double(a.at(x, y, c)) - double(b.at(x, y, c));
        se += d * d;
        ++n;
      }
  return 10.0 * std::log10(255.0 * 255.0 / (se / double(n)));
}

// ---- fixtures ------------------------------------------------------------

inline Plane random_plane(std::size_t w, std::size_t h, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  Plane p(w, h);
  for (auto& v : p.data()) v = static_cast<std::uint8_t>(d(rng));
  return p;
}

inline RasterImage random_image(std::size_t w, std::size_t h, std::size_t ch,
                                std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> d(0, 255);
  RasterImage img(w, h, ch);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(d(rng));
  return img;
}

// Smooth gradients plus texture; closer to natural statistics than noise.
inline RasterImage smooth_image(std::size_t w, std::size_t h, std::size_t ch,
                                std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ph(0.0, 6.28);
  std::normal_distribution<double> noise(0.0, 6.0);
  RasterImage img(w, h, ch);
  for (std::size_t c = 0; c < ch; ++c) {
    const double p1 = ph(rng), p2 = ph(rng);
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        const double v = 128.0 + 60.0 * std::sin(0.05 * double(x) + p1) +
                         50.0 * std::cos(0.07 * double(y) + p2) + noise(rng);
        img.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
      }
  }
  return img;
}

inline std::vector<std::uint8_t> random_bits(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<std::uint8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return bits;
}

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(VQMARK_TEST_DATA_DIR) / name;
}

inline std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "vqmark_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace vqmark::testing
