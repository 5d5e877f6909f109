// Copyright 2026 The wordprobe Authors.
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

#ifndef WORDPROBE_RANDOM_H_
#define WORDPROBE_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace wordprobe {

// Seeded generator whose derived draws (uniform reals, bounded integers,
// normals, shuffles) are specified here instead of by the standard library
// distributions, so results are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t Below(std::uint64_t bound);

  // Standard normal (Box-Muller).
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a. Stable across builds, unlike std::hash.
std::uint64_t StableHash(std::string_view text);

// Seed for an independent stream keyed by `parts`, combined as
// base XOR StableHash(parts joined by '\0').
std::uint64_t DeriveSeed(std::uint64_t base, std::string_view first,
                         std::string_view second = {});

}  // namespace wordprobe

#endif  // WORDPROBE_RANDOM_H_
