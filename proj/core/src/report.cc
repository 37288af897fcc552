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

#include "ldpmin/report.h"

#include <charconv>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "text.h"

namespace ldpmin {

std::string FormatReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void WriteResultCsv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "n,epsilon,mechanism,param_mode,x_min,mean_abs_err,q05,q95,reps,"
         "seed\n";
  for (const ExperimentRow& r : rows) {
    out << r.n << ',' << FormatReal(r.epsilon) << ','
        << MechanismName(r.mechanism) << ',' << ParamModeName(r.param_mode)
        << ',' << FormatReal(r.worst_xmin) << ','
        << FormatReal(r.mean_abs_err) << ',' << FormatReal(r.q05) << ','
        << FormatReal(r.q95) << ',' << r.reps << ',' << r.seed << '\n';
  }
}

void WriteDetailCsv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "n,epsilon,mechanism,depth,gamma,x_min,mean_abs_err,q05,q95\n";
  for (const ExperimentRow& r : rows) {
    for (const CellStats& s : r.per_xmin) {
      out << r.n << ',' << FormatReal(r.epsilon) << ','
          << MechanismName(r.mechanism) << ',' << r.depth << ','
          << FormatReal(r.gamma) << ',' << FormatReal(s.x_min) << ','
          << FormatReal(s.mean_abs_err) << ',' << FormatReal(s.q05) << ','
          << FormatReal(s.q95) << '\n';
    }
  }
}

void WriteGuidelineCsv(std::ostream& out,
                       std::span<const GuidelineSeries> series) {
  out << "n,epsilon,guideline_value\n";
  for (const GuidelineSeries& s : series) {
    for (const GuidelinePoint& p : s.points) {
      out << p.n << ',' << FormatReal(s.epsilon) << ','
          << FormatReal(p.value) << '\n';
    }
  }
}

void WriteComparisonCsv(std::ostream& out,
                        std::span<const ComparisonRow> rows) {
  out << "n,epsilon,binary_search_err,baseline_err,ratio\n";
  for (const ComparisonRow& r : rows) {
    out << r.n << ',' << FormatReal(r.epsilon) << ','
        << FormatReal(r.binary_search_err) << ','
        << FormatReal(r.baseline_err) << ',' << FormatReal(r.ratio) << '\n';
  }
}

absl::StatusOr<std::vector<RatePoint>> ReadRatePoints(
    std::istream& in, const RateCsvFilter& filter) {
  std::string line;
  int row = 0;
  std::vector<std::string> header;
  while (header.empty() && std::getline(in, line)) {
    ++row;
    std::string_view trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    for (std::string_view col : text::Split(trimmed, ',')) {
      header.emplace_back(text::Trim(col));
    }
  }
  auto column = [&](std::string_view name) -> int {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int n_col = column("n");
  const int err_col = column("mean_abs_err");
  if (n_col < 0 || err_col < 0) {
    return absl::InvalidArgumentError(
        "CSV header must contain columns n and mean_abs_err");
  }
  const int mech_col = column("mechanism");
  const int eps_col = column("epsilon");
  if ((filter.mechanism && mech_col < 0) || (filter.epsilon && eps_col < 0)) {
    return absl::InvalidArgumentError(
        "CSV lacks the column needed by the requested filter");
  }

  std::vector<RatePoint> points;
  while (std::getline(in, line)) {
    ++row;
    std::string_view trimmed = text::Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string_view> fields = text::Split(trimmed, ',');
    if (fields.size() != header.size()) {
      return absl::InvalidArgumentError(
          text::Cat("row ", row, ": expected ", header.size(),
                       " fields, found ", fields.size()));
    }
    for (std::string_view& f : fields) f = text::Trim(f);
    if (filter.mechanism && fields[static_cast<size_t>(mech_col)] !=
                                *filter.mechanism) {
      continue;
    }
    if (filter.epsilon) {
      std::string_view raw = fields[static_cast<size_t>(eps_col)];
      std::optional<double> eps = text::ParseDouble(raw, /*allow_inf=*/true);
      if (!eps.has_value()) {
        return absl::InvalidArgumentError(
            text::Cat("row ", row, ": bad epsilon '", raw, "'"));
      }
      if (*eps != *filter.epsilon) continue;
    }
    RatePoint p;
    std::optional<double> n = text::ParseDouble(fields[static_cast<size_t>(n_col)]);
    std::optional<double> err =
        text::ParseDouble(fields[static_cast<size_t>(err_col)]);
    if (!n.has_value()) {
      return absl::InvalidArgumentError(
          text::Cat("row ", row, ": bad n '",
                       fields[static_cast<size_t>(n_col)], "'"));
    }
    if (!err.has_value()) {
      return absl::InvalidArgumentError(
          text::Cat("row ", row, ": bad mean_abs_err '",
                       fields[static_cast<size_t>(err_col)], "'"));
    }
    p.n = *n;
    p.err = *err;
    if (!(p.err > 0.0)) {
      return absl::InvalidArgumentError(text::Cat(
          "row ", row, ": mean_abs_err must be positive, got ", p.err));
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace ldpmin
