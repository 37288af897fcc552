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

#ifndef LDPMIN_REPORT_H_
#define LDPMIN_REPORT_H_

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpmin/analysis.h"
#include "ldpmin/harness.h"

namespace ldpmin {

// Shortest decimal that parses back to the same double ("inf" for +inf).
std::string FormatReal(double v);

// Result table: n,epsilon,mechanism,param_mode,x_min,mean_abs_err,q05,q95,
// reps,seed. The header is written even for an empty table.
void WriteResultCsv(std::ostream& out, std::span<const ExperimentRow> rows);

// Every (n, x_min) mean, not just the worst placement.
void WriteDetailCsv(std::ostream& out, std::span<const ExperimentRow> rows);

struct GuidelineSeries {
  double epsilon = 0.0;
  std::vector<GuidelinePoint> points;
};

// n,epsilon,guideline_value
void WriteGuidelineCsv(std::ostream& out,
                       std::span<const GuidelineSeries> series);

// n,epsilon,binary_search_err,baseline_err,ratio
void WriteComparisonCsv(std::ostream& out,
                        std::span<const ComparisonRow> rows);

struct RateCsvFilter {
  std::optional<std::string> mechanism;
  std::optional<double> epsilon;
};

// Reads the n and mean_abs_err columns of a CSV with a header row; other
// columns are ignored except for the optional filters. Errors carry the
// 1-based row number of the file.
absl::StatusOr<std::vector<RatePoint>> ReadRatePoints(
    std::istream& in, const RateCsvFilter& filter = {});

}  // namespace ldpmin

#endif  // LDPMIN_REPORT_H_
