// Copyright 2026 The steermpc Authors
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

#include "steer/rng.h"

#include <cmath>
#include <numbers>

namespace steer {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t CounterRng::Bits(std::initializer_list<uint64_t> key) const {
  uint64_t h = SplitMix64(seed_);
  for (uint64_t k : key) h = SplitMix64(h ^ SplitMix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

double CounterRng::Uniform(std::initializer_list<uint64_t> key) const {
  // top 53 bits
  return static_cast<double>(Bits(key) >> 11) * 0x1.0p-53;
}

double CounterRng::Normal(std::initializer_list<uint64_t> key) const {
  const uint64_t h = Bits(key);
  const uint64_t h2 = SplitMix64(h);
  // (0, 1] keeps the log finite
  const double u1 = (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace steer
