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

#include "ldpmin/protocol.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "text.h"

namespace ldpmin {
namespace {

absl::Status ValidateValues(std::span<const double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("cohort is empty");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= -1.0 && values[i] <= 1.0)) {
      return absl::InvalidArgumentError(
          text::Cat("value ", i, " = ", values[i], " is outside [-1, 1]"));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckCohortSize(std::span<const double> values,
                             const ProtocolConfig& config) {
  if (static_cast<int64_t>(values.size()) != config.n) {
    return absl::InvalidArgumentError(text::Cat(
        "cohort has ", values.size(), " users but config expects ", config.n));
  }
  return absl::OkStatus();
}

template <typename ResponseFn>
absl::StatusOr<Transcript> RunSearch(MinSearch search, ResponseFn respond,
                                     size_t n) {
  while (!search.done()) {
    const double tau = search.tau();
    int64_t sum = 0;
    for (size_t i = 0; i < n; ++i) sum += ToInt(respond(i, tau));
    absl::StatusOr<RoundRecord> record = search.Advance(sum);
    if (!record.ok()) return record.status();
  }
  return search.Finish();
}

}  // namespace

absl::Status ValidateConfig(const ProtocolConfig& config) {
  if (config.depth < 1) {
    return absl::InvalidArgumentError("depth must be at least 1");
  }
  if (config.depth > 52) {
    return absl::InvalidArgumentError(
        "depth above 52 exhausts double precision of the search interval");
  }
  if (std::isnan(config.gamma) || config.gamma < 0.0) {
    return absl::InvalidArgumentError("gamma must be non-negative");
  }
  if (config.n < 1) {
    return absl::InvalidArgumentError("n must be at least 1");
  }
  return absl::OkStatus();
}

MinSearch::MinSearch(const ProtocolConfig& config, bool sanitized)
    : config_(config), sanitized_(sanitized), depth_(config.depth) {
  rounds_.reserve(static_cast<size_t>(depth_));
}

MinSearch MinSearch::NonPrivate(int depth, int64_t n) {
  ProtocolConfig config;
  config.depth = depth;
  config.n = n;
  return MinSearch(config, /*sanitized=*/false);
}

MinSearch MinSearch::Private(const ProtocolConfig& config) {
  return MinSearch(config, /*sanitized=*/true);
}

absl::StatusOr<RoundRecord> MinSearch::Advance(int64_t sum_z) {
  if (done()) {
    return absl::FailedPreconditionError("search already finished");
  }
  // Without sanitization the correction factor is 1 and phi' reduces to phi.
  const RoundBudget budget = sanitized_
                                 ? config_.round_budget()
                                 : PrivacyBudget::NoiseFree().PerRound(1);
  absl::StatusOr<double> phi = UnbiasedPhi(sum_z, config_.n, budget);
  if (!phi.ok()) return phi.status();

  RoundRecord record;
  record.round = round();
  record.tau = tau();
  record.sum_z = sum_z;
  record.phi = *phi;
  const bool left = sanitized_ ? *phi >= config_.gamma : *phi > 0.0;
  record.branch = left ? Branch::kLeft : Branch::kRight;
  interval_ = left ? interval_.LeftHalf() : interval_.RightHalf();
  rounds_.push_back(record);
  return record;
}

Transcript MinSearch::Finish() const {
  Transcript t;
  t.config = config_;
  t.target = SearchTarget::kMin;
  t.sanitized = sanitized_;
  t.degenerate_threshold =
      sanitized_ && config_.gamma > MaxAchievablePhi(config_.round_budget());
  t.rounds = rounds_;
  t.estimate = interval_.Midpoint();
  return t;
}

Bit UserRespond(double x, double tau, RoundBudget budget, RandomStream& rng) {
  return RandomizedResponse(SignBit(tau - x), budget, rng);
}

absl::StatusOr<Transcript> RunNonPrivateMin(std::span<const double> values,
                                            int depth) {
  if (absl::Status s = ValidateValues(values); !s.ok()) return s;
  ProtocolConfig config;
  config.depth = depth;
  config.n = static_cast<int64_t>(values.size());
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  return RunSearch(
      MinSearch::NonPrivate(depth, config.n),
      [&](size_t i, double tau) { return SignBit(tau - values[i]); },
      values.size());
}

absl::StatusOr<Transcript> RunPrivateMin(std::span<const double> values,
                                         const ProtocolConfig& config,
                                         RandomStream& rng) {
  if (absl::Status s = ValidateValues(values); !s.ok()) return s;
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (absl::Status s = CheckCohortSize(values, config); !s.ok()) return s;
  const RoundBudget budget = config.round_budget();
  return RunSearch(
      MinSearch::Private(config),
      [&](size_t i, double tau) {
        return UserRespond(values[i], tau, budget, rng);
      },
      values.size());
}

absl::StatusOr<Transcript> RunPrivateMin(
    std::span<const double> values, const ProtocolConfig& config,
    std::span<RandomStream* const> streams) {
  if (absl::Status s = ValidateValues(values); !s.ok()) return s;
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (absl::Status s = CheckCohortSize(values, config); !s.ok()) return s;
  if (streams.size() != values.size()) {
    return absl::InvalidArgumentError("need exactly one stream per user");
  }
  const RoundBudget budget = config.round_budget();
  return RunSearch(
      MinSearch::Private(config),
      [&](size_t i, double tau) {
        return UserRespond(values[i], tau, budget, *streams[i]);
      },
      values.size());
}

absl::StatusOr<Transcript> RunPrivateMax(std::span<const double> values,
                                         const ProtocolConfig& config,
                                         RandomStream& rng) {
  std::vector<double> reflected(values.begin(), values.end());
  for (double& v : reflected) v = -v;
  absl::StatusOr<Transcript> t = RunPrivateMin(reflected, config, rng);
  if (!t.ok()) return t.status();
  t->target = SearchTarget::kMax;
  t->estimate = -t->estimate;
  for (RoundRecord& r : t->rounds) r.tau = -r.tau;
  return t;
}

absl::StatusOr<double> BaselineMin(std::span<const double> values,
                                   PrivacyBudget budget, RandomStream& rng) {
  if (absl::Status s = ValidateValues(values); !s.ok()) return s;
  double best = std::numeric_limits<double>::infinity();
  for (double x : values) best = std::min(best, LaplaceSanitize(x, budget, rng));
  return best;
}

}  // namespace ldpmin
