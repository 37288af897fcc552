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

#ifndef LDPMIN_PARAMS_H_
#define LDPMIN_PARAMS_H_

#include <cstdint>
#include <string_view>

#include "absl/status/statusor.h"
#include "ldpmin/mechanisms.h"
#include "ldpmin/protocol.h"

namespace ldpmin {

// How depth L and the concentration budget h are scheduled against N.
enum class ParamMode {
  // L = max(1, ceil(log2(N) / (2 alpha0))), h = ln(N) / (2 alpha0), for a
  // known lower bound alpha0 on the fatness exponent.
  kKnownAlpha,
  // L = ceil(log2(N)^2 / (2 log2(base))), h = ln(N)^2 / (2 ln(base)).
  kUnknownAlpha,
  // kKnownAlpha with alpha0 = 1.
  kLowerAlphaPreset,
  // kUnknownAlpha with base = 1000.
  kUnknownAlphaPreset,
};

std::string_view ParamModeName(ParamMode mode);
absl::StatusOr<ParamMode> ParseParamMode(std::string_view name);

struct ParamSpec {
  ParamMode mode = ParamMode::kLowerAlphaPreset;
  double alpha0 = 1.0;
  double log_base = 1000.0;
};

struct ParamChoice {
  ParamSpec spec;
  int depth = 1;
  double h = 0.0;
  // Cached gamma_threshold(eps, depth, h, n) for the n it was built for.
  double gamma = 0.0;
  int64_t n = 0;
};

// sqrt(4 e^{eps/L} (1 + e^{eps/L}) h / ((e^{eps/L} - 1)^2 N)).
// eps = inf gives sqrt(4h / N).
double GammaThreshold(PrivacyBudget epsilon, int depth, double h, int64_t n);

absl::StatusOr<ParamChoice> ParamsKnownAlpha(int64_t n, double alpha0,
                                             PrivacyBudget epsilon);
absl::StatusOr<ParamChoice> ParamsUnknownAlpha(int64_t n,
                                               PrivacyBudget epsilon,
                                               double log_base = 1000.0);
absl::StatusOr<ParamChoice> ChooseParams(const ParamSpec& spec, int64_t n,
                                         PrivacyBudget epsilon);

ProtocolConfig MakeProtocolConfig(const ParamChoice& choice,
                                  PrivacyBudget epsilon);

}  // namespace ldpmin

#endif  // LDPMIN_PARAMS_H_
