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

#ifndef LDPMIN_PROTOCOL_H_
#define LDPMIN_PROTOCOL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "ldpmin/mechanisms.h"
#include "ldpmin/random.h"

namespace ldpmin {

// Closed search interval [lo, hi] within [-1, 1]. Endpoints are dyadic
// rationals for up to 52 halvings.
struct Interval {
  double lo = -1.0;
  double hi = 1.0;

  double Width() const { return hi - lo; }
  double Midpoint() const { return lo + (hi - lo) / 2.0; }
  Interval LeftHalf() const { return {lo, Midpoint()}; }
  Interval RightHalf() const { return {Midpoint(), hi}; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct ProtocolConfig {
  PrivacyBudget epsilon = PrivacyBudget::NoiseFree();
  int depth = 1;
  double gamma = 0.0;
  int64_t n = 1;

  RoundBudget round_budget() const { return epsilon.PerRound(depth); }
};

absl::Status ValidateConfig(const ProtocolConfig& config);

enum class Branch { kLeft, kRight };

enum class SearchTarget { kMin, kMax };

struct RoundRecord {
  int round = 0;
  double tau = 0.0;
  int64_t sum_z = 0;
  // phi for the non-private search, phi' for the private one.
  double phi = 0.0;
  Branch branch = Branch::kRight;
};

struct Transcript {
  ProtocolConfig config;
  SearchTarget target = SearchTarget::kMin;
  bool sanitized = true;
  // gamma exceeds every value phi' can take; all branches go Right.
  bool degenerate_threshold = false;
  std::vector<RoundRecord> rounds;
  double estimate = 0.0;
};

// Aggregator-side state of the binary search. One instance drives one run:
// read the query point with tau(), feed the sum of the round's responses to
// Advance(), repeat until done(). Shared by the in-process simulator and the
// network server so both apply the same branch rule.
class MinSearch {
 public:
  // Non-private search: branch Left iff phi > 0.
  static MinSearch NonPrivate(int depth, int64_t n);
  // Private search: branch Left iff phi' >= gamma.
  static MinSearch Private(const ProtocolConfig& config);

  double tau() const { return interval_.Midpoint(); }
  int round() const { return static_cast<int>(rounds_.size()) + 1; }
  bool done() const { return static_cast<int>(rounds_.size()) == depth_; }
  const Interval& interval() const { return interval_; }

  // Consumes the responses of the current round. Fails if the sum is not
  // achievable by n bits or the search is already complete.
  absl::StatusOr<RoundRecord> Advance(int64_t sum_z);

  // Transcript with estimate = midpoint of the final interval.
  Transcript Finish() const;

 private:
  MinSearch(const ProtocolConfig& config, bool sanitized);

  ProtocolConfig config_;
  bool sanitized_;
  int depth_;
  Interval interval_;
  std::vector<RoundRecord> rounds_;
};

// RR-sanitized sign(tau - x), sign(0) = +1. One uniform variate.
Bit UserRespond(double x, double tau, RoundBudget budget, RandomStream& rng);

// Deterministic search. |estimate - min| <= 2^-depth.
absl::StatusOr<Transcript> RunNonPrivateMin(std::span<const double> values,
                                            int depth);

// Private search with one shared stream, consumed in user order: each round
// draws exactly values.size() variates.
absl::StatusOr<Transcript> RunPrivateMin(std::span<const double> values,
                                         const ProtocolConfig& config,
                                         RandomStream& rng);

// Private search where user i draws from streams[i]; the setting of a real
// deployment and of the network demo.
absl::StatusOr<Transcript> RunPrivateMin(std::span<const double> values,
                                         const ProtocolConfig& config,
                                         std::span<RandomStream* const> streams);

// -RunPrivateMin(-values) on the same stream. Recorded tau values are
// reflected back into the original coordinates; branches refer to the
// reflected search.
absl::StatusOr<Transcript> RunPrivateMax(std::span<const double> values,
                                         const ProtocolConfig& config,
                                         RandomStream& rng);

// Laplace baseline: min_i (x_i + Laplace(0, 2 / eps)), unclamped. One variate
// per user.
absl::StatusOr<double> BaselineMin(std::span<const double> values,
                                   PrivacyBudget budget, RandomStream& rng);

}  // namespace ldpmin

#endif  // LDPMIN_PROTOCOL_H_
