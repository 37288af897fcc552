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

#include "ldpmin/mechanisms.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "ldpmin/random.h"
#include "status_matchers.h"

namespace ldpmin {
namespace {

using ::ldpmin::testing::IsOkAndHolds;
using ::ldpmin::testing::StatusIs;
using ::testing::DoubleNear;
using ::testing::HasSubstr;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Replays a fixed list of variates and counts how many were taken.
class ScriptedStream : public RandomStream {
 public:
  explicit ScriptedStream(std::vector<double> values)
      : values_(std::move(values)) {}
  double NextUniform() override { return values_.at(taken_++); }
  int taken() const { return taken_; }

 private:
  std::vector<double> values_;
  int taken_ = 0;
};

RoundBudget Round(double eps) { return *RoundBudget::Create(eps); }

TEST(PrivacyBudgetTest, RejectsNonPositiveAndNan) {
  EXPECT_THAT(PrivacyBudget::Create(0.0),
              StatusIs(absl::StatusCode::kInvalidArgument,
                       HasSubstr("positive")));
  EXPECT_THAT(PrivacyBudget::Create(-1.0),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("")));
  EXPECT_THAT(PrivacyBudget::Create(std::nan("")),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("")));
  EXPECT_THAT(RoundBudget::Create(0.0),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("")));
}

TEST(PrivacyBudgetTest, InfinityIsNoiseFree) {
  absl::StatusOr<PrivacyBudget> eps = PrivacyBudget::Create(kInf);
  ASSERT_TRUE(eps.ok());
  EXPECT_TRUE(eps->noise_free());
  EXPECT_TRUE(PrivacyBudget::NoiseFree().noise_free());
  EXPECT_FALSE(PrivacyBudget::Create(3.0)->noise_free());
}

TEST(PrivacyBudgetTest, PerRoundSplitsEvenly) {
  const PrivacyBudget eps = *PrivacyBudget::Create(4.0);
  EXPECT_DOUBLE_EQ(eps.PerRound(5).epsilon(), 0.8);
  EXPECT_TRUE(PrivacyBudget::NoiseFree().PerRound(7).noise_free());
}

TEST(RandomizedResponseTest, KeepProbabilityAtLnThree) {
  EXPECT_THAT(RrKeepProbability(Round(std::log(3.0))),
              DoubleNear(0.75, 1e-15));
  EXPECT_THAT(RrFlipProbability(Round(std::log(3.0))),
              DoubleNear(0.25, 1e-15));
}

TEST(RandomizedResponseTest, ClosedFormsOverGrid) {
  for (double eps : {0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const RoundBudget b = Round(eps);
    const double e = std::exp(eps);
    EXPECT_NEAR(RrKeepProbability(b), e / (1.0 + e), 1e-15) << eps;
    EXPECT_NEAR(RrKeepProbability(b) + RrFlipProbability(b), 1.0, 1e-15);
    EXPECT_NEAR(RrLikelihoodRatio(b) / e, 1.0, 1e-12) << eps;
    EXPECT_NEAR(RrCorrectionFactor(b) / ((e + 1.0) / (e - 1.0)), 1.0, 1e-12)
        << eps;
  }
}

TEST(RandomizedResponseTest, NoiseFreeLimit) {
  const RoundBudget b = PrivacyBudget::NoiseFree().PerRound(3);
  EXPECT_EQ(RrKeepProbability(b), 1.0);
  EXPECT_EQ(RrCorrectionFactor(b), 1.0);
  SeededStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(RandomizedResponse(Bit::kMinus, b, rng), Bit::kMinus);
  }
}

TEST(RandomizedResponseTest, ConsumesOneVariateAndKeepsBelowThreshold) {
  const RoundBudget b = Round(std::log(3.0));
  ScriptedStream rng({0.0, 0.7499, 0.75, 0.9999});
  EXPECT_EQ(RandomizedResponse(Bit::kPlus, b, rng), Bit::kPlus);
  EXPECT_EQ(RandomizedResponse(Bit::kPlus, b, rng), Bit::kPlus);
  EXPECT_EQ(RandomizedResponse(Bit::kPlus, b, rng), Bit::kMinus);
  EXPECT_EQ(RandomizedResponse(Bit::kMinus, b, rng), Bit::kPlus);
  EXPECT_EQ(rng.taken(), 4);
}

class RrFrequencyTest : public ::testing::TestWithParam<double> {};

TEST_P(RrFrequencyTest, EmpiricalKeepRateWithinFourSigma) {
  const RoundBudget b = Round(GetParam());
  const double p = RrKeepProbability(b);
  constexpr int kTrials = 100000;
  const double sigma = std::sqrt(p * (1 - p) / kTrials);
  for (Bit input : {Bit::kPlus, Bit::kMinus}) {
    SeededStream rng(1234);
    int kept = 0;
    for (int i = 0; i < kTrials; ++i) {
      kept += RandomizedResponse(input, b, rng) == input;
    }
    EXPECT_NEAR(static_cast<double>(kept) / kTrials, p, 4 * sigma);
  }
}

INSTANTIATE_TEST_SUITE_P(Budgets, RrFrequencyTest,
                         ::testing::Values(0.1, 0.25, 1.0, std::log(3.0)));

TEST(UnbiasedPhiTest, AllPlusGivesMaximum) {
  for (double eps : {0.2, 1.0, 3.0}) {
    const RoundBudget b = Round(eps);
    const double e = std::exp(eps);
    const double expected = 0.5 * (e + 1) / (e - 1) + 0.5;
    EXPECT_THAT(UnbiasedPhi(50, 50, b), IsOkAndHolds(DoubleNear(expected, 1e-12)));
    EXPECT_NEAR(MaxAchievablePhi(b), expected, 1e-12);
    EXPECT_GT(expected, 1.0);
  }
}

TEST(UnbiasedPhiTest, NoiseFreeIsExactFrequency) {
  const RoundBudget b = PrivacyBudget::NoiseFree().PerRound(1);
  for (int64_t n : {1, 3, 10, 1000}) {
    for (int64_t plus = 0; plus <= n; ++plus) {
      const int64_t sum = 2 * plus - n;
      ASSERT_THAT(UnbiasedPhi(sum, n, b),
                  IsOkAndHolds(static_cast<double>(plus) /
                               static_cast<double>(n)));
    }
  }
}

TEST(UnbiasedPhiTest, RejectsImpossibleSums) {
  const RoundBudget b = Round(1.0);
  EXPECT_THAT(UnbiasedPhi(0, 0, b),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("")));
  EXPECT_THAT(UnbiasedPhi(5, 4, b),
              StatusIs(absl::StatusCode::kInvalidArgument,
                       HasSubstr("cannot equal")));
  EXPECT_THAT(UnbiasedPhi(1, 4, b),
              StatusIs(absl::StatusCode::kInvalidArgument,
                       HasSubstr("cannot equal")));
}

TEST(UnbiasedPhiTest, NotClampedBelowZero) {
  EXPECT_THAT(UnbiasedPhi(-10, 10, Round(1.0)),
              IsOkAndHolds(::testing::Lt(0.0)));
}

TEST(UnbiasedPhiTest, MonteCarloMeanMatchesTrueFraction) {
  // 300 of 1000 users hold +1, so the true fraction is 0.3.
  constexpr int64_t kN = 1000;
  constexpr int64_t kPlus = 300;
  constexpr int kReps = 10000;
  const RoundBudget b = Round(1.0);
  SeededStream rng(99);
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < kReps; ++r) {
    int64_t z = 0;
    for (int64_t i = 0; i < kN; ++i) {
      z += ToInt(RandomizedResponse(i < kPlus ? Bit::kPlus : Bit::kMinus, b,
                                    rng));
    }
    const double phi = *UnbiasedPhi(z, kN, b);
    sum += phi;
    sum_sq += phi * phi;
  }
  const double mean = sum / kReps;
  const double se = std::sqrt((sum_sq / kReps - mean * mean) / kReps);
  EXPECT_NEAR(mean, 0.3, 3 * se);
}

TEST(LaplaceTest, ScaleIsTwoOverEpsilon) {
  EXPECT_DOUBLE_EQ(LaplaceScale(*PrivacyBudget::Create(1.0)), 2.0);
  EXPECT_DOUBLE_EQ(LaplaceScale(*PrivacyBudget::Create(4.0)), 0.5);
  EXPECT_EQ(LaplaceScale(PrivacyBudget::NoiseFree()), 0.0);
}

TEST(LaplaceTest, InverseCdfAtKnownPoints) {
  ScriptedStream rng({0.5, 0.75, 0.25, 0.0});
  EXPECT_EQ(SampleLaplace(2.0, rng), 0.0);
  // F^-1(0.75) = b ln 2, F^-1(0.25) = -b ln 2.
  EXPECT_NEAR(SampleLaplace(2.0, rng), 2.0 * std::log(2.0), 1e-15);
  EXPECT_NEAR(SampleLaplace(2.0, rng), -2.0 * std::log(2.0), 1e-15);
  const double extreme = SampleLaplace(2.0, rng);
  EXPECT_TRUE(std::isfinite(extreme));
  EXPECT_LT(extreme, -1000.0);
  EXPECT_EQ(rng.taken(), 4);
}

TEST(LaplaceTest, MomentsMatchDistribution) {
  const PrivacyBudget eps = *PrivacyBudget::Create(1.0);
  const double b = LaplaceScale(eps);
  constexpr int kDraws = 100000;
  SeededStream rng(2024);
  double sum = 0.0, abs_sum = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double y = LaplaceSanitize(0.25, eps, rng);
    sum += y;
    abs_sum += std::abs(y - 0.25);
  }
  EXPECT_NEAR(sum / kDraws, 0.25, 3 * b * std::sqrt(2.0) / std::sqrt(kDraws));
  // E|X - x| = b with standard deviation b.
  EXPECT_NEAR(abs_sum / kDraws, b, 4 * b / std::sqrt(kDraws));
}

TEST(LaplaceTest, NoiseFreeBudgetLeavesValue) {
  SeededStream rng(1);
  EXPECT_EQ(LaplaceSanitize(0.3, PrivacyBudget::NoiseFree(), rng), 0.3);
}

}  // namespace
}  // namespace ldpmin
