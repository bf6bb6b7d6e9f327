// Copyright 2026 The empdist Authors
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
#include <random>
#include <string>
#include <string_view>

namespace empdist {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over the bytes of a purpose tag.
constexpr std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Base seed plus the (replicate, tag) coordinates of one random stream.
/// The same triple always yields the same stream.
struct SeedSpec {
  std::uint64_t base_seed = 0;
  std::uint64_t replicate = 0;
  std::string tag = "default";

  [[nodiscard]] std::uint64_t stream_seed() const {
    return splitmix64(base_seed ^ splitmix64(replicate ^ splitmix64(hash_tag(tag))));
  }

  [[nodiscard]] SeedSpec with(std::uint64_t rep, std::string_view purpose) const {
    return {base_seed, rep, std::string(purpose)};
  }
};

/// Thin wrapper over mt19937_64 whose floating-point draws do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t stream_seed) : engine_(stream_seed) {}
  explicit Rng(const SeedSpec& seed) : engine_(seed.stream_seed()) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, k). Rejection keeps it exactly unbiased.
  std::uint64_t below(std::uint64_t k) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % k);
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % k;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace empdist
