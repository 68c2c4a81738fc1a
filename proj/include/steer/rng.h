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

#ifndef STEER_RNG_H_
#define STEER_RNG_H_

#include <cstdint>
#include <initializer_list>

namespace steer {

// Stateless random numbers. Every draw is a pure function of its key, so
// populations can be generated in any order or on any thread and still be
// bit-identical.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t Bits(std::initializer_list<uint64_t> key) const;
  // uniform in [0, 1)
  double Uniform(std::initializer_list<uint64_t> key) const;
  // standard normal (Box-Muller on two derived uniforms)
  double Normal(std::initializer_list<uint64_t> key) const;

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
};

uint64_t SplitMix64(uint64_t x);

}  // namespace steer

#endif  // STEER_RNG_H_
