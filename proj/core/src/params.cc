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

#include "ldpmin/params.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "text.h"

namespace ldpmin {
namespace {

absl::Status CheckN(int64_t n) {
  if (n < 2) {
    return absl::InvalidArgumentError(
        text::Cat("parameter schedules need n >= 2, got ", n));
  }
  return absl::OkStatus();
}

ParamChoice Finalize(ParamSpec spec, int depth, double h, int64_t n,
                     PrivacyBudget epsilon) {
  ParamChoice choice;
  choice.spec = spec;
  choice.depth = std::max(1, depth);
  choice.h = h;
  choice.n = n;
  choice.gamma = GammaThreshold(epsilon, choice.depth, h, n);
  return choice;
}

}  // namespace

std::string_view ParamModeName(ParamMode mode) {
  switch (mode) {
    case ParamMode::kKnownAlpha:
      return "known_alpha";
    case ParamMode::kUnknownAlpha:
      return "unknown_alpha";
    case ParamMode::kLowerAlphaPreset:
      return "lower_alpha";
    case ParamMode::kUnknownAlphaPreset:
      return "unknown_alpha_preset";
  }
  return "unknown";
}

absl::StatusOr<ParamMode> ParseParamMode(std::string_view name) {
  for (ParamMode m :
       {ParamMode::kKnownAlpha, ParamMode::kUnknownAlpha,
        ParamMode::kLowerAlphaPreset, ParamMode::kUnknownAlphaPreset}) {
    if (ParamModeName(m) == name) return m;
  }
  return absl::InvalidArgumentError(text::Cat(
      "unknown param mode '", name,
      "' (expected lower_alpha, unknown_alpha_preset, known_alpha or "
      "unknown_alpha)"));
}

double GammaThreshold(PrivacyBudget epsilon, int depth, double h, int64_t n) {
  // e^{r}(1 + e^{r}) / (e^{r} - 1)^2 = (1 + w) / (1 - w)^2 with w = e^{-r}.
  const double w = std::exp(-epsilon.epsilon() / depth);
  const double one_minus_w = -std::expm1(-epsilon.epsilon() / depth);
  return std::sqrt(4.0 * (1.0 + w) * h /
                   (one_minus_w * one_minus_w * static_cast<double>(n)));
}

absl::StatusOr<ParamChoice> ParamsKnownAlpha(int64_t n, double alpha0,
                                             PrivacyBudget epsilon) {
  if (absl::Status s = CheckN(n); !s.ok()) return s;
  if (!(alpha0 > 0.0) || std::isinf(alpha0)) {
    return absl::InvalidArgumentError("alpha0 must be positive and finite");
  }
  const double nd = static_cast<double>(n);
  const int depth =
      static_cast<int>(std::ceil(std::log2(nd) / (2.0 * alpha0)));
  const double h = std::log(nd) / (2.0 * alpha0);
  ParamSpec spec{ParamMode::kKnownAlpha, alpha0, 1000.0};
  return Finalize(spec, depth, h, n, epsilon);
}

absl::StatusOr<ParamChoice> ParamsUnknownAlpha(int64_t n,
                                               PrivacyBudget epsilon,
                                               double log_base) {
  if (absl::Status s = CheckN(n); !s.ok()) return s;
  if (!(log_base > 1.0) || std::isinf(log_base)) {
    return absl::InvalidArgumentError("log base must be finite and > 1");
  }
  const double nd = static_cast<double>(n);
  const double lg = std::log2(nd);
  const double ln = std::log(nd);
  const int depth =
      static_cast<int>(std::ceil(lg * (lg / std::log2(log_base)) / 2.0));
  const double h = ln * (ln / std::log(log_base)) / 2.0;
  ParamSpec spec{ParamMode::kUnknownAlpha, 1.0, log_base};
  return Finalize(spec, depth, h, n, epsilon);
}

absl::StatusOr<ParamChoice> ChooseParams(const ParamSpec& spec, int64_t n,
                                         PrivacyBudget epsilon) {
  absl::StatusOr<ParamChoice> choice;
  switch (spec.mode) {
    case ParamMode::kKnownAlpha:
      choice = ParamsKnownAlpha(n, spec.alpha0, epsilon);
      break;
    case ParamMode::kLowerAlphaPreset:
      choice = ParamsKnownAlpha(n, 1.0, epsilon);
      break;
    case ParamMode::kUnknownAlpha:
      choice = ParamsUnknownAlpha(n, epsilon, spec.log_base);
      break;
    case ParamMode::kUnknownAlphaPreset:
      choice = ParamsUnknownAlpha(n, epsilon, 1000.0);
      break;
  }
  if (choice.ok()) choice->spec.mode = spec.mode;
  return choice;
}

ProtocolConfig MakeProtocolConfig(const ParamChoice& choice,
                                  PrivacyBudget epsilon) {
  ProtocolConfig config;
  config.epsilon = epsilon;
  config.depth = choice.depth;
  config.gamma = choice.gamma;
  config.n = choice.n;
  return config;
}

}  // namespace ldpmin
