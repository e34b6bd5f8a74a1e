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

#include "vqmark/codebook.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "byte_io.h"
#include "vqmark/error.h"
#include "vqmark/prng.h"

namespace vqmark {
namespace {

constexpr std::uint8_t kCodebookVersion = 1;
constexpr double kSplitPerturbation = 1e-3;
// Neurons whose neighbourhood weight falls below this are not updated.
constexpr double kNeighborhoodCutoff = 1e-6;

std::size_t exact_sqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return r * r == n ? r : 0;
}


void check_training_set(const VectorSet& vectors) {
  if (vectors.empty()) throw ValidationError("training set is empty");
}

void shuffle(std::vector<std::size_t>& v, XorShift64Star& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

}  // namespace

std::string_view trainer_name(Trainer t) noexcept {
  return t == Trainer::kSofm ? "sofm" : "lbg";
}

Trainer parse_trainer(std::string_view name) {
  if (name == "sofm") return Trainer::kSofm;
  if (name == "lbg") return Trainer::kLbg;
  throw ValidationError("unknown trainer '" + std::string(name) +
                        "' (expected sofm or lbg)");
}

Codebook::Codebook(VectorSet codewords, Trainer trainer, std::uint64_t seed)
    : codewords_(std::move(codewords)), trainer_(trainer), seed_(seed) {
  block_side_ = exact_sqrt(codewords_.dim());
  if (block_side_ == 0) {
    throw ValidationError("codeword dimension " +
                          std::to_string(codewords_.dim()) +
                          " is not a square block");
  }
  if (codewords_.size() < 2 || codewords_.size() % 2 != 0) {
    throw ValidationError("codebook size must be even and at least 2, got " +
                          std::to_string(codewords_.size()));
  }
  for (double v : codewords_.flat()) {
    if (!std::isfinite(v)) throw ValidationError("codeword element is not finite");
  }
}

NearestCodeword nearest_codeword(std::span<const double> x,
                                 const VectorSet& codewords, std::size_t hint) {
  if (x.size() != codewords.dim()) {
    throw ValidationError("vector dimension " + std::to_string(x.size()) +
                          " does not match codebook dimension " +
                          std::to_string(codewords.dim()));
  }
  const std::size_t dim = x.size();
  const std::size_t n = codewords.size();
  if (n == 0) throw ValidationError("nearest_codeword on an empty codebook");
  if (hint >= n) hint = 0;
  NearestCodeword best{hint, 0.0};
  {
    const auto cw = codewords[hint];
    for (std::size_t e = 0; e < dim; ++e) {
      const double t = x[e] - cw[e];
      best.distance2 += t * t;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i == hint) continue;
    const auto cw = codewords[i];
    double d = 0.0;
    std::size_t e = 0;
    for (; e < dim; ++e) {
      const double t = x[e] - cw[e];
      d += t * t;
      if (d > best.distance2) break;
    }
    if (e == dim && (d < best.distance2 || (d == best.distance2 && i < best.index))) {
      best = {i, d};
    }
  }
  return best;
}

double average_distortion(const VectorSet& vectors, const Codebook& codebook) {
  if (vectors.empty()) throw ValidationError("no vectors to measure");
  double total = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    total += nearest_codeword(vectors[i], codebook).distance2;
  }
  return total / static_cast<double>(vectors.size());
}

SofmParams SofmParams::for_size(std::size_t size, std::uint64_t seed) {
  SofmParams p;
  std::size_t rows = static_cast<std::size_t>(std::sqrt(static_cast<double>(size)));
  while (rows > 1 && size % rows != 0) --rows;
  p.grid_rows = std::max<std::size_t>(rows, 1);
  p.grid_cols = size / p.grid_rows;
  p.sigma0 = static_cast<double>(std::max(p.grid_rows, p.grid_cols)) / 2.0;
  p.sigma_final = std::min(p.sigma_final, p.sigma0);
  p.seed = seed;
  return p;
}

void SofmParams::validate() const {
  if (grid_rows == 0 || grid_cols == 0) {
    throw ValidationError("SOFM grid must be non-empty");
  }
  const std::size_t n = size();
  if (n < 2 || n % 2 != 0) {
    throw ValidationError("SOFM neuron count must be even and at least 2, got " +
                          std::to_string(n));
  }
  if (epochs == 0) throw ValidationError("SOFM needs at least one epoch");
  if (!(eta0 > eta_final && eta_final > 0.0)) {
    throw ValidationError("SOFM learning rates must satisfy eta0 > eta_final > 0");
  }
  if (!(sigma0 >= sigma_final && sigma_final >= 0.0)) {
    throw ValidationError(
        "SOFM radii must satisfy sigma0 >= sigma_final >= 0");
  }
}

Codebook train_sofm(const VectorSet& vectors, const SofmParams& params) {
  params.validate();
  check_training_set(vectors);
  const std::size_t dim = vectors.dim();
  const std::size_t rows = params.grid_rows;
  const std::size_t cols = params.grid_cols;
  const std::size_t neurons = rows * cols;

  XorShift64Star rng(params.seed);
  std::vector<double> init(neurons * dim);
  for (double& w : init) w = 255.0 * rng.uniform();
  VectorSet weights(dim, std::move(init));

  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const double total = static_cast<double>(params.epochs * vectors.size());
  const double eta_ratio = params.eta_final / params.eta0;
  const double sigma_ratio =
      params.sigma0 > 0.0 ? params.sigma_final / params.sigma0 : 0.0;

  std::vector<std::size_t> last_winner(vectors.size(), 0);
  std::vector<double> row_gain(rows);
  std::vector<double> col_gain(cols);
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t idx : order) {
      const auto x = vectors[idx];
      const double frac = static_cast<double>(step++) / total;
      const double eta = params.eta0 * std::pow(eta_ratio, frac);
      const double sigma = params.sigma0 * std::pow(sigma_ratio, frac);

      const std::size_t winner =
          nearest_codeword(x, weights, last_winner[idx]).index;
      last_winner[idx] = winner;
      const std::size_t wr = winner / cols;
      const std::size_t wc = winner % cols;

      if (!(sigma > 0.0)) {
        auto w = weights[winner];
        for (std::size_t e = 0; e < dim; ++e) w[e] += eta * (x[e] - w[e]);
        continue;
      }

      // The Gaussian over grid distance factors into row and column terms.
      const double inv = 1.0 / (2.0 * sigma * sigma);
      const double reach = std::sqrt(-std::log(kNeighborhoodCutoff) / inv);
      const auto span_of = [reach](std::size_t centre, std::size_t extent) {
        const auto r = static_cast<std::size_t>(reach);
        const std::size_t lo = centre > r ? centre - r : 0;
        const std::size_t hi = std::min(extent - 1, centre + r);
        return std::pair{lo, hi};
      };
      const auto [r_lo, r_hi] = span_of(wr, rows);
      const auto [c_lo, c_hi] = span_of(wc, cols);
      for (std::size_t r = r_lo; r <= r_hi; ++r) {
        const double d = static_cast<double>(r) - static_cast<double>(wr);
        row_gain[r] = std::exp(-d * d * inv);
      }
      for (std::size_t c = c_lo; c <= c_hi; ++c) {
        const double d = static_cast<double>(c) - static_cast<double>(wc);
        col_gain[c] = std::exp(-d * d * inv);
      }
      for (std::size_t r = r_lo; r <= r_hi; ++r) {
        for (std::size_t c = c_lo; c <= c_hi; ++c) {
          const double h = row_gain[r] * col_gain[c];
          if (h < kNeighborhoodCutoff) continue;
          const double rate = eta * h;
          auto w = weights[r * cols + c];
          for (std::size_t e = 0; e < dim; ++e) w[e] += rate * (x[e] - w[e]);
        }
      }
    }
  }
  return Codebook(std::move(weights), Trainer::kSofm, params.seed);
}

void LbgParams::validate() const {
  if (size < 2 || size % 2 != 0) {
    throw ValidationError("LBG codebook size must be even and at least 2, got " +
                          std::to_string(size));
  }
  if (!(epsilon > 0.0)) throw ValidationError("LBG epsilon must be positive");
  if (max_iters == 0) throw ValidationError("LBG needs at least one iteration");
}

Codebook train_lbg(const VectorSet& vectors, const LbgParams& params,
                   std::vector<double>* distortion_trace) {
  params.validate();
  check_training_set(vectors);
  const std::size_t n = vectors.size();
  const std::size_t dim = vectors.dim();
  const std::size_t size = params.size;
  if (n < size) {
    throw ValidationError("LBG needs at least " + std::to_string(size) +
                          " training vectors, got " + std::to_string(n));
  }

  // Seeded partial Fisher-Yates draw of `size` distinct training vectors.
  XorShift64Star rng(params.seed);
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  VectorSet codewords(dim);
  for (std::size_t i = 0; i < size; ++i) {
    std::swap(pool[i], pool[i + rng.below(n - i)]);
    codewords.push_back(vectors[pool[i]]);
  }

  std::vector<std::size_t> assignment(n, 0);
  std::vector<std::size_t> counts(size);
  std::vector<double> means(size * dim);
  double previous = std::numeric_limits<double>::infinity();
  if (distortion_trace) distortion_trace->clear();

  for (std::size_t iter = 0; iter < params.max_iters; ++iter) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto nearest = nearest_codeword(vectors[i], codewords, assignment[i]);
      assignment[i] = nearest.index;
      total += nearest.distance2;
    }
    const double distortion = total / static_cast<double>(n);
    if (distortion > previous) {
      throw std::logic_error("LBG distortion increased from " +
                             std::to_string(previous) + " to " +
                             std::to_string(distortion));
    }
    if (distortion_trace) distortion_trace->push_back(distortion);
    if (distortion == 0.0 ||
        (std::isfinite(previous) &&
         (previous - distortion) / distortion < params.epsilon)) {
      break;
    }
    previous = distortion;
    if (iter + 1 == params.max_iters) break;

    // Running means: a cell of identical vectors reproduces them exactly.
    std::fill(counts.begin(), counts.end(), 0);
    std::fill(means.begin(), means.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t cell = assignment[i];
      const double inv = 1.0 / static_cast<double>(++counts[cell]);
      const auto x = vectors[i];
      double* m = means.data() + cell * dim;
      for (std::size_t e = 0; e < dim; ++e) m[e] += (x[e] - m[e]) * inv;
    }
    for (std::size_t c = 0; c < size; ++c) {
      if (counts[c] == 0) continue;
      std::copy_n(means.data() + c * dim, dim, codewords[c].begin());
    }
    for (std::size_t c = 0; c < size; ++c) {
      if (counts[c] != 0) continue;
      const auto donor = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      auto cw = codewords[c];
      const auto src = codewords[donor];
      for (std::size_t e = 0; e < dim; ++e) cw[e] = src[e] + kSplitPerturbation;
      // The split shares the donor's population between the two codewords.
      counts[c] = counts[donor] / 2;
      counts[donor] -= counts[c];
    }
  }
  return Codebook(std::move(codewords), Trainer::kLbg, params.seed);
}

Codebook snap_to_pixel_lattice(const Codebook& codebook) {
  const std::size_t dim = codebook.dim();
  std::set<std::vector<double>> seen;
  VectorSet snapped(dim);
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    std::vector<double> cw(dim);
    for (std::size_t e = 0; e < dim; ++e) cw[e] = to_pixel(codebook[i][e]);
    if (seen.contains(cw)) {
      bool placed = false;
      for (int delta = 1; delta <= 255 && !placed; ++delta) {
        for (int sign : {1, -1}) {
          for (std::size_t e = 0; e < dim && !placed; ++e) {
            const double v = cw[e] + sign * delta;
            if (v < 0.0 || v > 255.0) continue;
            auto candidate = cw;
            candidate[e] = v;
            if (!seen.contains(candidate)) {
              cw = std::move(candidate);
              placed = true;
            }
          }
          if (placed) break;
        }
      }
    }
    seen.insert(cw);
    snapped.push_back(cw);
  }
  return Codebook(std::move(snapped), codebook.trainer(), codebook.seed());
}

VectorSet collect_training_blocks(std::span<const RasterImage> images,
                                  std::size_t block_side, std::size_t channel) {
  VectorSet all(block_side * block_side);
  for (const auto& img : images) {
    all.append(to_blocks(extract_channel(img, channel), block_side).blocks);
  }
  return all;
}

std::vector<std::uint8_t> serialize_codebook(const Codebook& codebook) {
  if (codebook.block_side() > 0xFF || codebook.dim() > 0xFFFF ||
      codebook.size() > 0xFFFF) {
    throw ValidationError("codebook too large for the VQCB format");
  }
  internal::ByteWriter w;
  w.bytes("VQCB");
  w.u8(kCodebookVersion);
  w.u8(static_cast<std::uint8_t>(codebook.block_side()));
  w.u16(static_cast<std::uint16_t>(codebook.dim()));
  w.u16(static_cast<std::uint16_t>(codebook.size()));
  w.u8(static_cast<std::uint8_t>(codebook.trainer()));
  w.u64(codebook.seed());
  for (double v : codebook.codewords().flat()) w.f64(v);
  return w.take();
}

Codebook parse_codebook(std::span<const std::uint8_t> bytes) {
  internal::ByteReader r(bytes, "VQCB");
  r.expect_magic("VQCB");
  const std::size_t version_at = r.pos();
  if (r.u8() != kCodebookVersion) {
    throw FormatError("unsupported VQCB version", version_at);
  }
  const std::size_t block_side = r.u8();
  const std::size_t dim_at = r.pos();
  const std::size_t dim = r.u16();
  const std::size_t size = r.u16();
  const std::size_t trainer_at = r.pos();
  const std::uint8_t trainer = r.u8();
  const std::uint64_t seed = r.u64();
  if (dim != block_side * block_side || dim == 0) {
    throw FormatError("VQCB dim does not equal blockSide^2", dim_at);
  }
  if (trainer > 1) throw FormatError("unknown VQCB trainer tag", trainer_at);
  if (r.remaining() != size * dim * 8) {
    throw FormatError("VQCB payload length mismatch: expected " +
                          std::to_string(size * dim * 8) + " bytes",
                      r.pos());
  }
  std::vector<double> flat(size * dim);
  for (double& v : flat) v = r.f64();
  try {
    return Codebook(VectorSet(dim, std::move(flat)),
                    static_cast<Trainer>(trainer), seed);
  } catch (const ValidationError& e) {
    throw FormatError(std::string("invalid VQCB codebook: ") + e.what(),
                      dim_at);
  }
}

void save_codebook(const Codebook& codebook, const std::filesystem::path& path) {
  internal::write_file(path, serialize_codebook(codebook));
}

Codebook load_codebook(const std::filesystem::path& path) {
  return parse_codebook(internal::read_file(path));
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t codebook_hash(const Codebook& codebook) {
  return fnv1a64(serialize_codebook(codebook));
}

}  // namespace vqmark
