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

#ifndef LDPMIN_ANALYSIS_H_
#define LDPMIN_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <span>

#include "absl/status/statusor.h"
#include "ldpmin/mechanisms.h"

namespace ldpmin {

// Concentration bound on a wrong-side threshold decision in one round:
//
//   exp(-(e^eps - 1)^2 d^2 N / (4 (e^eps + 1) e^eps)),  clamped to [0, 1],
//
// where eps is the per-round budget and d = |F~(tau) - gamma|.
double TailBound(double epsilon_round, double deviation, int64_t n);

struct BoundInputs {
  double gamma = 0.0;
  PrivacyBudget epsilon = PrivacyBudget::NoiseFree();
  int depth = 1;
  int64_t n = 1;
  // Fatness exponent and constant.
  double alpha = 1.0;
  double c = 1.0;
  // x_bar - x_min.
  double fat_width = 2.0;
};

// Upper bound on the mean absolute error split into its three terms. The
// bound only holds when 2 gamma < C (x_bar - x_min)^alpha; otherwise
// `applicable` is false and the terms are left at zero.
struct ErrorBound {
  bool applicable = false;
  double quantile_term = 0.0;
  double tail_term = 0.0;
  double discretization_term = 0.0;

  double Total() const {
    return quantile_term + tail_term + discretization_term;
  }
};

bool BoundApplies(const BoundInputs& in);

// Fixed-data bound: 2 (2 gamma / C)^{1/alpha} + tail + 2^-L.
ErrorBound ErrorBoundFixed(const BoundInputs& in);

// i.i.d. bound: 2 (1/C)^{1/alpha} (ceil(2 gamma N))^{(1/alpha)} /
// (N + 1)^{(1/alpha)} + tail + 2^-L, with (x)^{(a)} the rising factorial.
ErrorBound ErrorBoundIid(const BoundInputs& in);

// Gamma(x + a) / Gamma(x). Requires x > 0 and x + a > 0.
absl::StatusOr<double> RisingFactorial(double x, double a);

struct RatePoint {
  double n = 0.0;
  double err = 0.0;
};

// err ~ C ln(n)^B / n^A, fitted by least squares in log space.
struct RateFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  // 1 / (2A); empty when A <= 0.
  std::optional<double> alpha_hat;
  // RMS residual of ln err.
  double residual = 0.0;
};

// Ordinary least squares on ln err = ln C + B ln ln n - A ln n. Needs at
// least three points with distinct n > 1 and err > 0, and a full-rank
// design.
absl::StatusOr<RateFit> FitRate(std::span<const RatePoint> points);

}  // namespace ldpmin

#endif  // LDPMIN_ANALYSIS_H_
