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

// Pairs the codewords of a codebook into two-member divisions. An index is
// then addressed as (division number, member bit); the member bit carries
// one watermark bit.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vqmark/codebook.h"

namespace vqmark {

struct IndexCode {
  std::uint32_t division = 0;
  std::uint8_t member = 0;  // 0 or 1

  friend bool operator==(const IndexCode&, const IndexCode&) = default;
};

class PartitionedCodebook {
 public:
  // Greedy pairing: repeatedly take the unpaired pair with the smallest
  // pair_mse, ties broken by (lower index, higher index). Divisions are
  // numbered in the order they are formed; member 0 is the lower index.
  explicit PartitionedCodebook(const Codebook& codebook);

  std::size_t codebook_size() const noexcept { return by_codeword_.size(); }
  std::size_t division_count() const noexcept { return divisions_.size(); }
  // ceil(log2(size / 2)), at least 1.
  std::size_t division_bits() const noexcept { return division_bits_; }
  std::uint64_t codebook_hash() const noexcept { return codebook_hash_; }

  const std::vector<std::pair<std::uint16_t, std::uint16_t>>& divisions()
      const noexcept {
    return divisions_;
  }

  IndexCode index_to_code(std::size_t codeword_index) const;
  std::uint16_t code_to_index(std::size_t division, unsigned member) const;
  std::uint16_t code_to_index(IndexCode code) const {
    return code_to_index(code.division, code.member);
  }

  // The division number as division_bits() big-endian binary digits.
  std::string division_bit_string(std::size_t codeword_index) const;
  // Division bits followed by the member bit, e.g. "00000001".
  std::string code_bit_string(std::size_t codeword_index) const;

 private:
  std::vector<std::pair<std::uint16_t, std::uint16_t>> divisions_;
  std::vector<IndexCode> by_codeword_;
  std::size_t division_bits_ = 1;
  std::uint64_t codebook_hash_ = 0;
};

// Mean of squared elementwise differences between two codewords.
double pair_mse(std::span<const double> a, std::span<const double> b);

inline PartitionedCodebook build_partition(const Codebook& codebook) {
  return PartitionedCodebook(codebook);
}

}  // namespace vqmark
