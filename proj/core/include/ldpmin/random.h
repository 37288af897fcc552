//
// Copyright 2026 The ldpmin Authors.
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
//

#ifndef LDPMIN_RANDOM_H_
#define LDPMIN_RANDOM_H_

#include <cstdint>
#include <random>

namespace ldpmin {

// Source of uniform variates in [0, 1). Every sanitizer and sampler in this
// library documents how many variates it consumes, so a run is replayable
// from the seed of the stream it was handed.
class RandomStream {
 public:
  virtual ~RandomStream() = default;

  virtual double NextUniform() = 0;
};

// mt19937_64-backed stream. Uniforms carry 53 random bits.
class SeededStream final : public RandomStream {
 public:
  explicit SeededStream(uint64_t seed) : engine_(seed) {}

  double NextUniform() override {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; a bijection on 64-bit words.
uint64_t MixBits(uint64_t x);

// Derives the seed of an independent substream from a root seed and two
// counters (typically a grid-cell key and a repetition index). The result
// depends only on the three inputs, never on the order streams are created.
uint64_t DeriveSeed(uint64_t root_seed, uint64_t cell_key, uint64_t rep);

inline SeededStream SplitStream(uint64_t root_seed, uint64_t cell_key,
                                uint64_t rep) {
  return SeededStream(DeriveSeed(root_seed, cell_key, rep));
}

}  // namespace ldpmin

#endif  // LDPMIN_RANDOM_H_
