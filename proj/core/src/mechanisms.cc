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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "absl/status/status.h"
#include "text.h"

namespace ldpmin {

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon) {
  if (std::isnan(epsilon) || epsilon <= 0.0) {
    return absl::InvalidArgumentError(
        text::Cat("epsilon must be positive, got ", epsilon));
  }
  return PrivacyBudget(epsilon);
}

PrivacyBudget PrivacyBudget::NoiseFree() {
  return PrivacyBudget(std::numeric_limits<double>::infinity());
}

bool PrivacyBudget::noise_free() const { return std::isinf(epsilon_); }

RoundBudget PrivacyBudget::PerRound(int depth) const {
  return RoundBudget(epsilon_ / static_cast<double>(depth));
}

RoundBudget::RoundBudget(double epsilon)
    : epsilon_(epsilon), keep_(1.0 / (1.0 + std::exp(-epsilon))) {}

absl::StatusOr<RoundBudget> RoundBudget::Create(double epsilon_round) {
  if (std::isnan(epsilon_round) || epsilon_round <= 0.0) {
    return absl::InvalidArgumentError(
        text::Cat("per-round epsilon must be positive, got ",
                     epsilon_round));
  }
  return RoundBudget(epsilon_round);
}

bool RoundBudget::noise_free() const { return std::isinf(epsilon_); }

double RrKeepProbability(RoundBudget budget) {
  return budget.keep_probability();
}

double RrFlipProbability(RoundBudget budget) {
  return 1.0 / (1.0 + std::exp(budget.epsilon()));
}

double RrLikelihoodRatio(RoundBudget budget) {
  return RrKeepProbability(budget) / RrFlipProbability(budget);
}

double RrCorrectionFactor(RoundBudget budget) {
  return 1.0 / std::tanh(budget.epsilon() / 2.0);
}

absl::StatusOr<double> UnbiasedPhi(int64_t sum_z, int64_t n,
                                   RoundBudget budget) {
  if (n < 1) {
    return absl::InvalidArgumentError("phi' needs at least one response");
  }
  if (std::llabs(sum_z) > n || (sum_z + n) % 2 != 0) {
    return absl::InvalidArgumentError(text::Cat(
        "sum of ", n, " bits in {-1,+1} cannot equal ", sum_z));
  }
  const double nd = static_cast<double>(n);
  return (RrCorrectionFactor(budget) * static_cast<double>(sum_z) + nd) /
         (2.0 * nd);
}

double MaxAchievablePhi(RoundBudget budget) {
  return 0.5 * RrCorrectionFactor(budget) + 0.5;
}

double LaplaceScale(PrivacyBudget budget) { return 2.0 / budget.epsilon(); }

double SampleLaplace(double scale, RandomStream& rng) {
  const double v = rng.NextUniform() - 0.5;
  if (scale == 0.0 || v == 0.0) return 0.0;
  // u = 0 gives 1 - 2|v| = 0; keep the draw finite.
  const double tail =
      std::max(1.0 - 2.0 * std::abs(v), std::numeric_limits<double>::min());
  return -scale * std::copysign(1.0, v) * std::log(tail);
}

double LaplaceSanitize(double x, PrivacyBudget budget, RandomStream& rng) {
  return x + SampleLaplace(LaplaceScale(budget), rng);
}

}  // namespace ldpmin
