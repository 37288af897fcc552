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

#ifndef LDPMIN_MECHANISMS_H_
#define LDPMIN_MECHANISMS_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "ldpmin/random.h"

namespace ldpmin {

class RoundBudget;

// Total privacy loss of one user across a whole protocol run. Positive
// infinity is accepted and means "no sanitization"; it exists for the
// noise-free equivalence checks and is never a privacy guarantee.
class PrivacyBudget {
 public:
  static absl::StatusOr<PrivacyBudget> Create(double epsilon);
  static PrivacyBudget NoiseFree();

  double epsilon() const { return epsilon_; }
  bool noise_free() const;

  // Even split over `depth` rounds, epsilon / depth each. depth >= 1.
  RoundBudget PerRound(int depth) const;

 private:
  explicit PrivacyBudget(double epsilon) : epsilon_(epsilon) {}

  double epsilon_;
};

// Privacy parameter of a single randomized-response invocation.
class RoundBudget {
 public:
  static absl::StatusOr<RoundBudget> Create(double epsilon_round);

  double epsilon() const { return epsilon_; }
  bool noise_free() const;

  // 1 / (1 + e^-eps), computed once at construction.
  double keep_probability() const { return keep_; }

 private:
  friend class PrivacyBudget;
  explicit RoundBudget(double epsilon);

  double epsilon_;
  double keep_;
};

enum class Bit : int8_t { kMinus = -1, kPlus = 1 };

inline int ToInt(Bit b) { return static_cast<int>(b); }
inline Bit Negate(Bit b) { return b == Bit::kPlus ? Bit::kMinus : Bit::kPlus; }

// sign(v) with sign(0) = +1.
inline Bit SignBit(double v) { return v >= 0.0 ? Bit::kPlus : Bit::kMinus; }

// e^eps / (1 + e^eps). Exactly 1 at eps = inf.
double RrKeepProbability(RoundBudget budget);

// 1 / (1 + e^eps).
double RrFlipProbability(RoundBudget budget);

// P(out = b | in = b) / P(out = b | in = -b); equals e^eps.
double RrLikelihoodRatio(RoundBudget budget);

// (e^eps + 1) / (e^eps - 1) = coth(eps / 2). Tends to 1 as eps -> inf.
double RrCorrectionFactor(RoundBudget budget);

// Randomized response on one bit. Consumes exactly one uniform variate:
// the input is kept iff u < RrKeepProbability(budget).
inline Bit RandomizedResponse(Bit input, RoundBudget budget,
                              RandomStream& rng) {
  return rng.NextUniform() < budget.keep_probability() ? input : Negate(input);
}

// Debiased estimate of the fraction of +1 raw bits from the sum of n
// sanitized bits:
//
//   phi' = (1 / 2n) * (e^eps + 1) / (e^eps - 1) * sum_z + 1/2
//
// The value is not clamped to [0, 1]. Requires n >= 1,
// |sum_z| <= n and sum_z = n (mod 2).
absl::StatusOr<double> UnbiasedPhi(int64_t sum_z, int64_t n,
                                   RoundBudget budget);

// Largest value UnbiasedPhi can return for the given budget (all bits +1).
double MaxAchievablePhi(RoundBudget budget);

// Scale b = 2 / eps of the Laplace baseline (sensitivity 2 on [-1, 1]).
double LaplaceScale(PrivacyBudget budget);

// Inverse-CDF Laplace(0, scale) draw from exactly one uniform variate.
// u = 0.5 maps to zero noise.
double SampleLaplace(double scale, RandomStream& rng);

// x + Laplace(0, 2 / eps). Output is not clamped to [-1, 1].
double LaplaceSanitize(double x, PrivacyBudget budget, RandomStream& rng);

}  // namespace ldpmin

#endif  // LDPMIN_MECHANISMS_H_
