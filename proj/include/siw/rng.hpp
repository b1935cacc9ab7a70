// Copyright 2026 The siwsample Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIW_RNG_HPP
#define SIW_RNG_HPP

#include <cstdint>

namespace siw {

/// SplitMix64 finalizer; used to expand seeds into generator state.
std::uint64_t splitmix64_mix(std::uint64_t x);

/// Reproducible random stream: xoshiro256++ state derived from
/// (seed, stream_index) by SplitMix64 hashing, so any (seed, index) pair
/// maps to an independent stream in O(1) without jump-ahead bookkeeping.
///
/// Two streams with identical (seed, stream_index) produce bit-identical
/// sequences. Streams are single-owner: clone per worker via substream().
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Child stream; children of distinct (stream, child_index) pairs are
  /// themselves independent streams under the same master seed.
  RandomStream substream(std::uint64_t child_index) const;

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();

  /// Uniform on (0, 1): never returns exactly zero.
  double uniform_open();

  /// Uniform on (lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal (Marsaglia polar, one spare cached).
  double normal();

  /// Integer uniform on [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace siw

#endif
