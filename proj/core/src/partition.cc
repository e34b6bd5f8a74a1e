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

#include "vqmark/partition.h"

#include <algorithm>
#include <string>
#include <tuple>

#include "vqmark/error.h"

namespace vqmark {

double pair_mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError("pair_mse needs two codewords of equal dimension");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

PartitionedCodebook::PartitionedCodebook(const Codebook& codebook)
    : codebook_hash_(vqmark::codebook_hash(codebook)) {
  const std::size_t n = codebook.size();
  if (n < 2 || n % 2 != 0) {
    throw ValidationError("partition needs an even codebook size, got " +
                          std::to_string(n));
  }
  struct Candidate {
    double mse;
    std::uint16_t lo;
    std::uint16_t hi;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      candidates.push_back({pair_mse(codebook[i], codebook[j]),
                            static_cast<std::uint16_t>(i),
                            static_cast<std::uint16_t>(j)});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(a.mse, a.lo, a.hi) < std::tie(b.mse, b.lo, b.hi);
            });

  std::vector<bool> paired(n, false);
  by_codeword_.resize(n);
  divisions_.reserve(n / 2);
  for (const auto& c : candidates) {
    if (paired[c.lo] || paired[c.hi]) continue;
    paired[c.lo] = paired[c.hi] = true;
    const auto division = static_cast<std::uint32_t>(divisions_.size());
    divisions_.emplace_back(c.lo, c.hi);
    by_codeword_[c.lo] = {division, 0};
    by_codeword_[c.hi] = {division, 1};
    if (divisions_.size() == n / 2) break;
  }

  division_bits_ = 0;
  while ((std::size_t{1} << division_bits_) < divisions_.size()) ++division_bits_;
  division_bits_ = std::max<std::size_t>(division_bits_, 1);
}

IndexCode PartitionedCodebook::index_to_code(std::size_t codeword_index) const {
  if (codeword_index >= by_codeword_.size()) {
    throw ValidationError("codeword index " + std::to_string(codeword_index) +
                          " out of range");
  }
  return by_codeword_[codeword_index];
}

std::uint16_t PartitionedCodebook::code_to_index(std::size_t division,
                                                 unsigned member) const {
  if (division >= divisions_.size()) {
    throw ValidationError("division " + std::to_string(division) +
                          " out of range");
  }
  if (member > 1) throw ValidationError("member bit must be 0 or 1");
  const auto& d = divisions_[division];
  return member == 0 ? d.first : d.second;
}

std::string PartitionedCodebook::division_bit_string(
    std::size_t codeword_index) const {
  const IndexCode code = index_to_code(codeword_index);
  std::string bits(division_bits_, '0');
  for (std::size_t i = 0; i < division_bits_; ++i) {
    if ((code.division >> i) & 1u) bits[division_bits_ - 1 - i] = '1';
  }
  return bits;
}

std::string PartitionedCodebook::code_bit_string(
    std::size_t codeword_index) const {
  return division_bit_string(codeword_index) +
         (index_to_code(codeword_index).member ? '1' : '0');
}

}  // namespace vqmark
