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

#include "ldpmin/random.h"

#include <cstdint>
#include <set>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace ldpmin {
namespace {

TEST(SeededStreamTest, SameSeedSameSequence) {
  SeededStream a(17), b(17);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a.NextUniform(), b.NextUniform()) << "draw " << i;
  }
}

TEST(SeededStreamTest, UniformsInHalfOpenUnitInterval) {
  SeededStream rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.NextUniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SeededStreamTest, MeanAndVarianceOfUniform) {
  SeededStream rng(11);
  constexpr int kDraws = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.NextUniform();
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / kDraws;
  // sd of the mean is sqrt(1/12 / kDraws) ~ 6.5e-4.
  EXPECT_NEAR(mean, 0.5, 4 * 6.5e-4);
  EXPECT_NEAR(sum_sq / kDraws - mean * mean, 1.0 / 12.0, 2e-3);
}

TEST(SeededStreamTest, UniformsHaveFiftyThreeBitResolution) {
  SeededStream rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double scaled = rng.NextUniform() * 0x1.0p53;
    ASSERT_EQ(scaled, static_cast<double>(static_cast<uint64_t>(scaled)));
  }
}

TEST(MixBitsTest, KnownSplitMixValue) {
  // First output of SplitMix64 with state 0.
  EXPECT_EQ(MixBits(0), 0xe220a8397b1dcdafULL);
}

TEST(MixBitsTest, InjectiveOnSample) {
  std::set<uint64_t> seen;
  for (uint64_t x = 0; x < 10000; ++x) seen.insert(MixBits(x));
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(DeriveSeedTest, DependsOnlyOnInputs) {
  const uint64_t first = DeriveSeed(1, 2, 3);
  for (uint64_t r = 0; r < 100; ++r) DeriveSeed(9, r, r);
  EXPECT_EQ(DeriveSeed(1, 2, 3), first);
}

TEST(DeriveSeedTest, DistinctAcrossCoordinates) {
  std::set<uint64_t> seen;
  for (uint64_t root = 0; root < 4; ++root) {
    for (uint64_t key = 0; key < 50; ++key) {
      for (uint64_t rep = 0; rep < 50; ++rep) {
        seen.insert(DeriveSeed(root, key, rep));
      }
    }
  }
  EXPECT_EQ(seen.size(), 4u * 50u * 50u);
}

TEST(DeriveSeedTest, SwappingKeyAndRepChangesSeed) {
  EXPECT_NE(DeriveSeed(1, 2, 3), DeriveSeed(1, 3, 2));
}

TEST(SplitStreamTest, MatchesSeededStreamOfDerivedSeed) {
  SeededStream a = SplitStream(7, 8, 9);
  SeededStream b(DeriveSeed(7, 8, 9));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.NextUniform(), b.NextUniform());
}

}  // namespace
}  // namespace ldpmin
