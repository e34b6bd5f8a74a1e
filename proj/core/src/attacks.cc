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

#include "vqmark/attacks.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "vqmark/error.h"
#include "vqmark/prng.h"

namespace vqmark {
namespace {

constexpr std::array<std::string_view, 12> kKindNames = {
    "wiener",  "median",     "gaussianFilter", "sharpen",
    "blur",    "saltPepper", "gaussianNoise",  "cropQuarter",
    "cropBorder", "intercept", "enhance",      "jpegLike",
};

// Real-valued working copy of one channel.
struct Field {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> v;

  double at_clamped(std::ptrdiff_t x, std::ptrdiff_t y) const {
    x = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(width) - 1);
    y = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(height) - 1);
    return v[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)];
  }
};

Field to_field(const Plane& p) {
  Field f{p.width(), p.height(), std::vector<double>(p.data().begin(), p.data().end())};
  return f;
}

Plane to_plane(const Field& f) {
  Plane p(f.width, f.height);
  for (std::size_t i = 0; i < f.v.size(); ++i) p.data()[i] = to_pixel(f.v[i]);
  return p;
}

template <typename Fn>
RasterImage per_channel(const RasterImage& img, Fn&& fn) {
  RasterImage out = img;
  for (std::size_t c = 0; c < img.channels(); ++c) {
    out = replace_channel(out, c, fn(extract_channel(img, c), c));
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma, std::size_t radius) {
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(radius);
    k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& w : k) w /= sum;
  return k;
}

// Separable convolution with replicated borders.
Field convolve(const Field& in, const std::vector<double>& kernel) {
  const auto r = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  Field tmp = in;
  Field out = in;
  for (std::size_t y = 0; y < in.height; ++y) {
    for (std::size_t x = 0; x < in.width; ++x) {
      double s = 0.0;
      for (std::ptrdiff_t k = -r; k <= r; ++k) {
        s += kernel[static_cast<std::size_t>(k + r)] *
             in.at_clamped(static_cast<std::ptrdiff_t>(x) + k,
                           static_cast<std::ptrdiff_t>(y));
      }
      tmp.v[y * in.width + x] = s;
    }
  }
  for (std::size_t y = 0; y < in.height; ++y) {
    for (std::size_t x = 0; x < in.width; ++x) {
      double s = 0.0;
      for (std::ptrdiff_t k = -r; k <= r; ++k) {
        s += kernel[static_cast<std::size_t>(k + r)] *
             tmp.at_clamped(static_cast<std::ptrdiff_t>(x),
                            static_cast<std::ptrdiff_t>(y) + k);
      }
      out.v[y * in.width + x] = s;
    }
  }
  return out;
}

Field gaussian_blur(const Field& in, double sigma, std::size_t radius) {
  return convolve(in, gaussian_kernel(sigma, radius));
}

std::size_t radius_for(double sigma) {
  return static_cast<std::size_t>(std::ceil(3.0 * sigma));
}

Plane median_filter(const Plane& p, int window) {
  const Field f = to_field(p);
  const std::ptrdiff_t r = window / 2;
  Plane out(p.width(), p.height());
  std::vector<double> buf(static_cast<std::size_t>(window * window));
  for (std::size_t y = 0; y < p.height(); ++y) {
    for (std::size_t x = 0; x < p.width(); ++x) {
      std::size_t k = 0;
      for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
        for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
          buf[k++] = f.at_clamped(static_cast<std::ptrdiff_t>(x) + dx,
                                  static_cast<std::ptrdiff_t>(y) + dy);
        }
      }
      auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
      std::nth_element(buf.begin(), mid, buf.end());
      out.at(x, y) = static_cast<std::uint8_t>(*mid);
    }
  }
  return out;
}

// Adaptive (Lee/Wiener) filter with the noise power estimated as the mean of
// all local variances.
Plane wiener_filter(const Plane& p, int window) {
  const Field f = to_field(p);
  const std::ptrdiff_t r = window / 2;
  const double count = static_cast<double>(window * window);
  std::vector<double> mean(f.v.size()), var(f.v.size());
  for (std::size_t y = 0; y < p.height(); ++y) {
    for (std::size_t x = 0; x < p.width(); ++x) {
      double s = 0.0, s2 = 0.0;
      for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
        for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
          const double v = f.at_clamped(static_cast<std::ptrdiff_t>(x) + dx,
                                        static_cast<std::ptrdiff_t>(y) + dy);
          s += v;
          s2 += v * v;
        }
      }
      const double m = s / count;
      mean[y * p.width() + x] = m;
      var[y * p.width() + x] = std::max(0.0, s2 / count - m * m);
    }
  }
  double noise = 0.0;
  for (double v : var) noise += v;
  noise /= static_cast<double>(var.size());

  Field out = f;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    const double denom = std::max(var[i], noise);
    const double gain = denom > 0.0 ? std::max(var[i] - noise, 0.0) / denom : 0.0;
    out.v[i] = mean[i] + gain * (f.v[i] - mean[i]);
  }
  return to_plane(out);
}

Plane equalize(const Plane& p) {
  std::array<std::size_t, 256> hist{};
  for (auto v : p.data()) ++hist[v];
  std::array<std::size_t, 256> cdf{};
  std::size_t running = 0;
  for (std::size_t i = 0; i < 256; ++i) {
    running += hist[i];
    cdf[i] = running;
  }
  const std::size_t total = running;
  std::size_t cdf_min = 0;
  for (std::size_t i = 0; i < 256; ++i) {
    if (hist[i] != 0) {
      cdf_min = cdf[i];
      break;
    }
  }
  if (total == cdf_min) return p;  // constant plane
  Plane out(p.width(), p.height());
  for (std::size_t i = 0; i < p.data().size(); ++i) {
    const double scaled = static_cast<double>(cdf[p.data()[i]] - cdf_min) /
                          static_cast<double>(total - cdf_min) * 255.0;
    out.data()[i] = to_pixel(scaled);
  }
  return out;
}

using DctMatrix = std::array<std::array<double, 8>, 8>;

const DctMatrix& dct_basis() {
  static const DctMatrix basis = [] {
    DctMatrix m{};
    for (std::size_t u = 0; u < 8; ++u) {
      const double alpha = u == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (std::size_t x = 0; x < 8; ++x) {
        m[u][x] = alpha * std::cos((2.0 * static_cast<double>(x) + 1.0) *
                                   static_cast<double>(u) * std::numbers::pi /
                                   16.0);
      }
    }
    return m;
  }();
  return basis;
}

// Orthonormal 8x8 DCT-II, uniform quantization with step q, inverse DCT.
Plane jpeg_like(const Plane& p, double q) {
  const DctMatrix& c = dct_basis();
  const Field f = to_field(p);
  Field out = f;
  double block[8][8], tmp[8][8], coef[8][8];
  for (std::size_t by = 0; by < p.height(); by += 8) {
    for (std::size_t bx = 0; bx < p.width(); bx += 8) {
      for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 0; x < 8; ++x) {
          block[y][x] = f.at_clamped(static_cast<std::ptrdiff_t>(bx + x),
                                     static_cast<std::ptrdiff_t>(by + y)) -
                        128.0;
        }
      }
      // coef = C * block * C^T
      for (std::size_t u = 0; u < 8; ++u) {
        for (std::size_t x = 0; x < 8; ++x) {
          double s = 0.0;
          for (std::size_t y = 0; y < 8; ++y) s += c[u][y] * block[y][x];
          tmp[u][x] = s;
        }
      }
      for (std::size_t u = 0; u < 8; ++u) {
        for (std::size_t v = 0; v < 8; ++v) {
          double s = 0.0;
          for (std::size_t x = 0; x < 8; ++x) s += tmp[u][x] * c[v][x];
          coef[u][v] = std::round(s / q) * q;
        }
      }
      // block = C^T * coef * C
      for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t v = 0; v < 8; ++v) {
          double s = 0.0;
          for (std::size_t u = 0; u < 8; ++u) s += c[u][y] * coef[u][v];
          tmp[y][v] = s;
        }
      }
      for (std::size_t y = 0; y < 8; ++y) {
        for (std::size_t x = 0; x < 8; ++x) {
          double s = 0.0;
          for (std::size_t v = 0; v < 8; ++v) s += tmp[y][v] * c[v][x];
          block[y][x] = s + 128.0;
        }
      }
      for (std::size_t y = 0; y < 8 && by + y < p.height(); ++y) {
        for (std::size_t x = 0; x < 8 && bx + x < p.width(); ++x) {
          out.v[(by + y) * p.width() + bx + x] = block[y][x];
        }
      }
    }
  }
  return to_plane(out);
}

std::string_view fill_name(CropFill fill) {
  switch (fill) {
    case CropFill::kWhite: return "white";
    case CropFill::kBlack: return "black";
    case CropFill::kOriginal: return "original";
  }
  return "white";
}

CropFill parse_fill(const nlohmann::json& j) {
  if (j.is_number_integer()) {
    const int v = j.get<int>();
    if (v == 255) return CropFill::kWhite;
    if (v == 0) return CropFill::kBlack;
  } else if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "white") return CropFill::kWhite;
    if (s == "black") return CropFill::kBlack;
    if (s == "original") return CropFill::kOriginal;
  }
  throw ValidationError("invalid cropQuarter fill " + j.dump() +
                        " (expected \"white\", \"black\", \"original\", 255 or 0)");
}

}  // namespace

std::string_view attack_kind_name(AttackKind kind) noexcept {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::span<const std::string_view> attack_kind_names() noexcept {
  return kKindNames;
}

AttackKind parse_attack_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<AttackKind>(i);
  }
  std::string known;
  for (auto n : kKindNames) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw ValidationError("unknown attack kind '" + std::string(name) +
                        "'; known kinds: " + known);
}

AttackSpec AttackSpec::defaults(AttackKind kind, std::uint64_t seed) {
  AttackSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  switch (kind) {
    case AttackKind::kGaussianFilter: spec.params.sigma = 0.5; break;
    case AttackKind::kSharpen: spec.params.sigma = 1.0; break;
    case AttackKind::kBlur: spec.params.sigma = 2.0; break;
    case AttackKind::kGaussianNoise: spec.params.sigma = 8.0; break;
    default: break;
  }
  return spec;
}

void AttackSpec::validate() const {
  const auto& p = params;
  switch (kind) {
    case AttackKind::kWiener:
    case AttackKind::kMedian:
      if (p.window < 1 || p.window % 2 == 0) {
        throw ValidationError("window must be a positive odd size, got " +
                              std::to_string(p.window));
      }
      break;
    case AttackKind::kGaussianFilter:
    case AttackKind::kSharpen:
    case AttackKind::kBlur:
      if (!(p.sigma > 0.0)) throw ValidationError("sigma must be positive");
      if (kind == AttackKind::kSharpen && !(p.amount >= 0.0)) {
        throw ValidationError("sharpen amount must be non-negative");
      }
      break;
    case AttackKind::kGaussianNoise:
      if (!(p.sigma >= 0.0)) throw ValidationError("noise sigma must be >= 0");
      break;
    case AttackKind::kSaltPepper:
      if (!(p.density >= 0.0 && p.density <= 1.0)) {
        throw ValidationError("density must lie in [0, 1]");
      }
      break;
    case AttackKind::kCropBorder:
      if (p.border < 0) throw ValidationError("border width must be >= 0");
      break;
    case AttackKind::kIntercept:
      if (p.gray < 0 || p.gray > 255) {
        throw ValidationError("intercept fill must lie in [0, 255]");
      }
      if (!(p.area >= 0.0 && p.area <= 1.0)) {
        throw ValidationError("intercept area must lie in [0, 1]");
      }
      break;
    case AttackKind::kJpegLike:
      if (!(p.q > 0.0) || !std::isfinite(p.q)) {
        throw ValidationError("quantization step q must be positive");
      }
      break;
    case AttackKind::kCropQuarter:
    case AttackKind::kEnhance:
      break;
  }
}

std::string AttackSpec::label() const {
  std::ostringstream os;
  os << attack_kind_name(kind);
  const auto& p = params;
  switch (kind) {
    case AttackKind::kWiener:
    case AttackKind::kMedian: os << "(window=" << p.window << ")"; break;
    case AttackKind::kGaussianFilter:
    case AttackKind::kBlur:
    case AttackKind::kGaussianNoise: os << "(sigma=" << p.sigma << ")"; break;
    case AttackKind::kSharpen:
      os << "(sigma=" << p.sigma << ",amount=" << p.amount << ")";
      break;
    case AttackKind::kSaltPepper: os << "(density=" << p.density << ")"; break;
    case AttackKind::kCropQuarter: os << "(fill=" << fill_name(p.fill) << ")"; break;
    case AttackKind::kCropBorder: os << "(width=" << p.border << ")"; break;
    case AttackKind::kIntercept:
      os << "(fill=" << p.gray << ",area=" << p.area << ")";
      break;
    case AttackKind::kJpegLike: os << "(q=" << p.q << ")"; break;
    case AttackKind::kEnhance: break;
  }
  return os.str();
}

RasterImage apply_attack(const RasterImage& img, const AttackSpec& spec,
                         const RasterImage* original) {
  spec.validate();
  const auto& p = spec.params;
  switch (spec.kind) {
    case AttackKind::kWiener:
      return per_channel(img, [&](const Plane& c, std::size_t) {
        return wiener_filter(c, p.window);
      });
    case AttackKind::kMedian:
      return per_channel(img, [&](const Plane& c, std::size_t) {
        return median_filter(c, p.window);
      });
    case AttackKind::kGaussianFilter:
      return per_channel(img, [&](const Plane& c, std::size_t) {
        return to_plane(gaussian_blur(to_field(c), p.sigma, 1));
      });
    case AttackKind::kBlur:
      return per_channel(img, [&](const Plane& c, std::size_t) {
        return to_plane(gaussian_blur(to_field(c), p.sigma, radius_for(p.sigma)));
      });
    case AttackKind::kSharpen:
      return per_channel(img, [&](const Plane& c, std::size_t) {
        const Field f = to_field(c);
        Field out = gaussian_blur(f, p.sigma, radius_for(p.sigma));
        for (std::size_t i = 0; i < f.v.size(); ++i) {
          out.v[i] = f.v[i] + p.amount * (f.v[i] - out.v[i]);
        }
        return to_plane(out);
      });
    case AttackKind::kSaltPepper: {
      // Sample order is fixed (raster, interleaved) so the result depends
      // only on the seed.
      XorShift64Star rng(spec.seed);
      RasterImage out = img;
      for (auto& s : out.data()) {
        if (rng.uniform() < p.density) s = (rng.next() >> 63) ? 255 : 0;
      }
      return out;
    }
    case AttackKind::kGaussianNoise: {
      XorShift64Star rng(spec.seed);
      RasterImage out = img;
      for (auto& s : out.data()) s = to_pixel(s + p.sigma * rng.normal());
      return out;
    }
    case AttackKind::kCropQuarter: {
      if (p.fill == CropFill::kOriginal &&
          (original == nullptr || !original->same_shape(img))) {
        throw ValidationError(
            "cropQuarter with fill=original needs the original image");
      }
      RasterImage out = img;
      for (std::size_t y = 0; y < img.height() / 2; ++y) {
        for (std::size_t x = 0; x < img.width() / 2; ++x) {
          for (std::size_t c = 0; c < img.channels(); ++c) {
            out.at(x, y, c) = p.fill == CropFill::kWhite   ? 255
                              : p.fill == CropFill::kBlack ? 0
                                                           : original->at(x, y, c);
          }
        }
      }
      return out;
    }
    case AttackKind::kCropBorder: {
      RasterImage out = img;
      const auto w = static_cast<std::size_t>(p.border);
      for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
          const bool frame = x < w || y < w || x + w >= img.width() ||
                             y + w >= img.height();
          if (!frame) continue;
          for (std::size_t c = 0; c < img.channels(); ++c) out.at(x, y, c) = 0;
        }
      }
      return out;
    }
    case AttackKind::kIntercept: {
      // Centred rectangle with the image's aspect ratio covering `area`.
      const double scale = std::sqrt(p.area);
      const auto rw = static_cast<std::size_t>(
          std::llround(static_cast<double>(img.width()) * scale));
      const auto rh = static_cast<std::size_t>(
          std::llround(static_cast<double>(img.height()) * scale));
      const std::size_t x0 = (img.width() - rw) / 2;
      const std::size_t y0 = (img.height() - rh) / 2;
      RasterImage out = img;
      for (std::size_t y = y0; y < y0 + rh; ++y) {
        for (std::size_t x = x0; x < x0 + rw; ++x) {
          for (std::size_t c = 0; c < img.channels(); ++c) {
            out.at(x, y, c) = static_cast<std::uint8_t>(p.gray);
          }
        }
      }
      return out;
    }
    case AttackKind::kEnhance:
      return per_channel(img, [](const Plane& c, std::size_t) { return equalize(c); });
    case AttackKind::kJpegLike:
      return per_channel(img, [&](const Plane& c, std::size_t) {
        return jpeg_like(c, p.q);
      });
  }
  throw ValidationError("unhandled attack kind");
}

void to_json(nlohmann::json& j, const AttackSpec& spec) {
  const auto& p = spec.params;
  nlohmann::json params = nlohmann::json::object();
  switch (spec.kind) {
    case AttackKind::kWiener:
    case AttackKind::kMedian: params["window"] = p.window; break;
    case AttackKind::kGaussianFilter:
    case AttackKind::kBlur:
    case AttackKind::kGaussianNoise: params["sigma"] = p.sigma; break;
    case AttackKind::kSharpen:
      params["sigma"] = p.sigma;
      params["amount"] = p.amount;
      break;
    case AttackKind::kSaltPepper: params["density"] = p.density; break;
    case AttackKind::kCropQuarter: params["fill"] = fill_name(p.fill); break;
    case AttackKind::kCropBorder: params["width"] = p.border; break;
    case AttackKind::kIntercept:
      params["fill"] = p.gray;
      params["area"] = p.area;
      break;
    case AttackKind::kJpegLike: params["q"] = p.q; break;
    case AttackKind::kEnhance: break;
  }
  j = nlohmann::json{{"kind", attack_kind_name(spec.kind)},
                     {"params", params},
                     {"seed", spec.seed}};
}

void from_json(const nlohmann::json& j, AttackSpec& spec) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ValidationError("attack spec must be an object with a string \"kind\"");
  }
  const AttackKind kind = parse_attack_kind(j.at("kind").get<std::string>());
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  spec = AttackSpec::defaults(kind, seed);
  auto& p = spec.params;
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  if (!params.is_object()) throw ValidationError("attack params must be an object");

  const auto number = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number()) throw ValidationError("param '" + key + "' must be a number");
    return v.get<double>();
  };
  const auto integer = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer()) {
      throw ValidationError("param '" + key + "' must be an integer");
    }
    return v.get<int>();
  };
  for (const auto& [key, value] : params.items()) {
    bool known = true;
    switch (kind) {
      case AttackKind::kWiener:
      case AttackKind::kMedian:
        if (key == "window") p.window = integer(value, key); else known = false;
        break;
      case AttackKind::kGaussianFilter:
      case AttackKind::kBlur:
      case AttackKind::kGaussianNoise:
        if (key == "sigma") p.sigma = number(value, key); else known = false;
        break;
      case AttackKind::kSharpen:
        if (key == "sigma") p.sigma = number(value, key);
        else if (key == "amount") p.amount = number(value, key);
        else known = false;
        break;
      case AttackKind::kSaltPepper:
        if (key == "density") p.density = number(value, key); else known = false;
        break;
      case AttackKind::kCropQuarter:
        if (key == "fill") p.fill = parse_fill(value); else known = false;
        break;
      case AttackKind::kCropBorder:
        if (key == "width") p.border = integer(value, key); else known = false;
        break;
      case AttackKind::kIntercept:
        if (key == "fill") p.gray = integer(value, key);
        else if (key == "area") p.area = number(value, key);
        else known = false;
        break;
      case AttackKind::kJpegLike:
        if (key == "q") p.q = number(value, key); else known = false;
        break;
      case AttackKind::kEnhance: known = false; break;
    }
    if (!known) {
      throw ValidationError("unknown parameter '" + key + "' for attack " +
                            std::string(attack_kind_name(kind)));
    }
  }
  spec.validate();
}

}  // namespace vqmark
