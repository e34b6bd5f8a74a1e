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

#pragma once

#include <cstdint>

namespace vqmark {

// xorshift64* generator. Its output sequence is part of the watermark key
// contract, so the step function must never change:
//   s ^= s >> 12; s ^= s << 25; s ^= s >> 27; return s * 0x2545F4914F6CDD1D.
// A zero seed is remapped to 0x9E3779B97F4A7C15 (zero is a fixed point).
class XorShift64Star {
 public:
  static constexpr std::uint64_t kZeroSeedReplacement = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kMultiplier = 0x2545F4914F6CDD1DULL;

  explicit XorShift64Star(std::uint64_t seed) noexcept
      : state_(seed == 0 ? kZeroSeedReplacement : seed) {}

  std::uint64_t next() noexcept {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * kMultiplier;
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // next() mod n. Modulo bias is accepted: it is what the position
  // selection contract specifies.
  std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

  // Standard normal deviate (Box-Muller, one value per call).
  double normal() noexcept;

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace vqmark
