// Copyright 2026 the rsengine authors
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

#ifndef RSENGINE_RNG_HPP
#define RSENGINE_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace rs {

using Rng = std::mt19937_64;

// Splittable seed derivation. Streams are keyed by (master seed, text tag,
// index): the tag is hashed with FNV-1a, the three words are then mixed
// through two rounds of SplitMix64. Stated here because reproducibility of
// experiment runs depends on it.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index) noexcept {
  std::uint64_t h = splitmix64(master ^ fnv1a64(tag));
  return splitmix64(h ^ splitmix64(index));
}

inline Rng make_rng(std::uint64_t master, std::string_view tag,
                    std::uint64_t index) {
  return Rng(derive_seed(master, tag, index));
}

}  // namespace rs

#endif  // RSENGINE_RNG_HPP
