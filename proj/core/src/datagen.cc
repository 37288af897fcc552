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

#include "ldpmin/datagen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>

#include "absl/status/status.h"
#include "boost/math/special_functions/beta.hpp"
#include "fmt/format.h"
#include "text.h"

namespace ldpmin {
namespace {

// Room for x_min + delta landing one ulp above 1 on grids such as
// k / 5 * (2 - delta) - 1.
constexpr double kSupportSlack = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double StdNormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double StdNormalPdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double ClampUnit(double x) { return std::clamp(x, -1.0, 1.0); }

double SortedQuantile(std::span<const double> sorted, double g) {
  const size_t n = sorted.size();
  const double nd = static_cast<double>(n);
  if (!(g > 0.0)) return sorted.front();
  if (g >= 1.0) return sorted.back();
  size_t k = static_cast<size_t>(std::ceil(g * nd));
  k = std::clamp<size_t>(k, 1, n);
  // ceil(g * N) can be off by one in floating point; settle on the smallest
  // k with k / N >= g under the same comparison the CDF uses.
  while (k > 1 && static_cast<double>(k - 1) / nd >= g) --k;
  while (k < n && static_cast<double>(k) / nd < g) ++k;
  return sorted[k - 1];
}

absl::Status CheckSupport(double lo, double hi) {
  if (!(lo >= -1.0) || !(hi <= 1.0 + kSupportSlack) || !(lo < hi)) {
    return absl::InvalidArgumentError(fmt::format(
        "support [{}, {}] is not a nonempty subinterval of [-1, 1]", lo, hi));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<FatModel> FatModel::Beta(double alpha, double beta,
                                        double x_min, double delta) {
  if (!(alpha > 0.0) || !(beta > 0.0) || std::isinf(alpha) ||
      std::isinf(beta)) {
    return absl::InvalidArgumentError(
        "beta model needs positive finite shape parameters");
  }
  if (!(delta > 0.0)) {
    return absl::InvalidArgumentError("beta model needs delta > 0");
  }
  if (absl::Status s = CheckSupport(x_min, x_min + delta); !s.ok()) return s;
  return FatModel(BetaScaled{alpha, beta, x_min, delta});
}

absl::StatusOr<FatModel> FatModel::TruncatedNormal(double mu, double sigma,
                                                   double x_min,
                                                   double x_max) {
  if (!(sigma > 0.0) || std::isinf(sigma) || !std::isfinite(mu)) {
    return absl::InvalidArgumentError(
        "truncated normal needs finite mu and positive finite sigma");
  }
  if (absl::Status s = CheckSupport(x_min, x_max); !s.ok()) return s;
  return FatModel(TruncNormal{mu, sigma, x_min, x_max});
}

absl::StatusOr<FatModel> FatModel::FromValues(std::vector<double> values) {
  if (values.empty()) {
    return absl::InvalidArgumentError("empirical model needs values");
  }
  for (double v : values) {
    if (!(v >= -1.0 && v <= 1.0)) {
      return absl::InvalidArgumentError(
          text::Cat("value ", v, " is outside [-1, 1]"));
    }
  }
  std::sort(values.begin(), values.end());
  return FatModel(Empirical{std::move(values)});
}

double FatModel::support_lo() const {
  return std::visit(Overloaded{
                        [](const BetaScaled& m) { return m.x_min; },
                        [](const TruncNormal& m) { return m.x_min; },
                        [](const Empirical& m) { return m.sorted.front(); },
                    },
                    kind_);
}

double FatModel::support_hi() const {
  return std::visit(
      Overloaded{
          [](const BetaScaled& m) { return std::min(1.0, m.x_min + m.delta); },
          [](const TruncNormal& m) { return m.x_max; },
          [](const Empirical& m) { return m.sorted.back(); },
      },
      kind_);
}

absl::StatusOr<FatModel> FatModel::WithXMin(double x_min) const {
  return std::visit(
      Overloaded{
          [&](const BetaScaled& m) {
            return Beta(m.alpha, m.beta, x_min, m.delta);
          },
          [&](const TruncNormal& m) {
            const double shift = x_min - m.x_min;
            return TruncatedNormal(m.mu + shift, m.sigma, x_min,
                                   m.x_max + shift);
          },
          [&](const Empirical& m) -> absl::StatusOr<FatModel> {
            std::vector<double> shifted = m.sorted;
            const double shift = x_min - m.sorted.front();
            for (double& v : shifted) v += shift;
            return FromValues(std::move(shifted));
          },
      },
      kind_);
}

absl::StatusOr<double> FatModel::Cdf(double x) const {
  if (!(x >= -1.0 && x <= 1.0)) {
    return absl::OutOfRangeError(
        text::Cat("cdf argument ", x, " is outside [-1, 1]"));
  }
  return CdfUnchecked(x);
}

double FatModel::CdfUnchecked(double x) const {
  return std::visit(
      Overloaded{
          [x](const BetaScaled& m) {
            const double u = (x - m.x_min) / m.delta;
            if (u <= 0.0) return 0.0;
            if (u >= 1.0) return 1.0;
            return boost::math::ibeta(m.alpha, m.beta, u);
          },
          [x](const TruncNormal& m) {
            if (x <= m.x_min) return 0.0;
            if (x >= m.x_max) return 1.0;
            const double a = StdNormalCdf((m.x_min - m.mu) / m.sigma);
            const double b = StdNormalCdf((m.x_max - m.mu) / m.sigma);
            const double v = StdNormalCdf((x - m.mu) / m.sigma);
            return std::clamp((v - a) / (b - a), 0.0, 1.0);
          },
          [x](const Empirical& m) {
            const auto it =
                std::upper_bound(m.sorted.begin(), m.sorted.end(), x);
            return static_cast<double>(it - m.sorted.begin()) /
                   static_cast<double>(m.sorted.size());
          },
      },
      kind_);
}

double FatModel::Quantile(double p) const {
  if (const auto* e = std::get_if<Empirical>(&kind_)) {
    return SortedQuantile(e->sorted, p);
  }
  double lo = support_lo();
  double hi = support_hi();
  if (p <= 0.0) return lo;
  if (p >= 1.0) return hi;
  // Invariant: F(lo) < p <= F(hi).
  while (hi - lo > kQuantileTolerance) {
    const double mid = lo + (hi - lo) / 2.0;
    if (CdfUnchecked(mid) >= p) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::string FatModel::Describe() const {
  return std::visit(
      Overloaded{
          [](const BetaScaled& m) {
            return fmt::format("beta(alpha={},beta={},x_min={},delta={})",
                               m.alpha, m.beta, m.x_min, m.delta);
          },
          [](const TruncNormal& m) {
            return fmt::format(
                "truncnormal(mu={},sigma={},x_min={},x_max={})", m.mu,
                m.sigma, m.x_min, m.x_max);
          },
          [](const Empirical& m) {
            return fmt::format("empirical(n={})", m.sorted.size());
          },
      },
      kind_);
}

std::string_view SettingName(Setting setting) {
  return setting == Setting::kFixed ? "fixed" : "iid";
}

absl::StatusOr<Setting> ParseSetting(std::string_view name) {
  if (name == "fixed") return Setting::kFixed;
  if (name == "iid") return Setting::kIid;
  return absl::InvalidArgumentError(
      text::Cat("unknown setting '", name, "' (expected fixed or iid)"));
}

absl::StatusOr<Cohort> Cohort::Create(std::vector<double> values,
                                      Setting setting, std::string source) {
  if (values.empty()) {
    return absl::InvalidArgumentError("cohort is empty");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= -1.0 && values[i] <= 1.0)) {
      return absl::InvalidArgumentError(text::Cat(
          "cohort value ", i, " = ", values[i], " is outside [-1, 1]"));
    }
  }
  return Cohort(std::move(values), setting, std::move(source));
}

double Cohort::Min() const {
  return *std::min_element(values_.begin(), values_.end());
}

absl::StatusOr<Cohort> FixedCohort(const FatModel& model, int64_t n) {
  if (n < 2) {
    return absl::InvalidArgumentError("fixed cohorts need n >= 2");
  }
  std::vector<double> values(static_cast<size_t>(n));
  const double denom = static_cast<double>(n - 1);
  for (int64_t i = 0; i < n; ++i) {
    values[static_cast<size_t>(i)] =
        ClampUnit(model.Quantile(static_cast<double>(i) / denom));
  }
  return Cohort::Create(std::move(values), Setting::kFixed, model.Describe());
}

absl::StatusOr<Cohort> IidCohort(const FatModel& model, int64_t n,
                                 RandomStream& rng) {
  if (n < 1) {
    return absl::InvalidArgumentError("iid cohorts need n >= 1");
  }
  std::vector<double> values(static_cast<size_t>(n));
  for (double& v : values) v = ClampUnit(model.Quantile(rng.NextUniform()));
  return Cohort::Create(std::move(values), Setting::kIid, model.Describe());
}

EmpiricalCdf::EmpiricalCdf(std::span<const double> values)
    : sorted_(values.begin(), values.end()) {
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double EmpiricalCdf::Quantile(double g) const {
  return SortedQuantile(sorted_, g);
}

absl::StatusOr<FatnessConstant> ComputeFatnessConstant(const FatModel& model) {
  if (const auto* b = std::get_if<BetaScaled>(&model.kind())) {
    const double inv = 1.0 / (b->alpha * boost::math::beta(b->alpha, b->beta));
    FatnessConstant fc;
    fc.alpha = b->alpha;
    fc.c = std::min(1.0, inv) / std::pow(b->delta, b->alpha);
    fc.x_bar = b->x_min + b->delta;
    return fc;
  }
  if (const auto* t = std::get_if<TruncNormal>(&model.kind())) {
    const double za = (t->x_min - t->mu) / t->sigma;
    const double zb = (t->x_max - t->mu) / t->sigma;
    FatnessConstant fc;
    fc.alpha = 1.0;
    fc.c = std::min(StdNormalPdf(za), StdNormalPdf(zb)) /
           (t->sigma * (StdNormalCdf(zb) - StdNormalCdf(za)));
    fc.x_bar = t->x_max;
    return fc;
  }
  return absl::InvalidArgumentError(
      "empirical models have no closed-form fatness constant");
}

double RescaleToUnit(double x, double lo, double hi) {
  return 2.0 * (x - lo) / (hi - lo) - 1.0;
}

double RescaleFromUnit(double y, double lo, double hi) {
  return lo + (y + 1.0) * (hi - lo) / 2.0;
}

absl::StatusOr<Cohort> ParseCsvCohort(std::istream& in, double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    return absl::InvalidArgumentError(
        fmt::format("invalid range [{}, {}]", lo, hi));
  }
  std::vector<double> values;
  std::string line;
  int64_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view field = text::Trim(line);
    if (field.empty()) continue;
    const std::optional<double> parsed = text::ParseDouble(field);
    const bool numeric = parsed.has_value();
    const double v = parsed.value_or(0.0);
    if (!seen_content) {
      seen_content = true;
      if (!numeric) continue;  // header
    }
    if (!numeric) {
      return absl::InvalidArgumentError(text::Cat(
          "line ", line_no, ": cannot parse '", field, "' as a number"));
    }
    if (v < lo || v > hi) {
      return absl::OutOfRangeError(fmt::format(
          "line {}: value {} is outside [{}, {}]", line_no, v, lo, hi));
    }
    values.push_back(ClampUnit(RescaleToUnit(v, lo, hi)));
  }
  if (values.empty()) {
    return absl::InvalidArgumentError("no values found");
  }
  return Cohort::Create(std::move(values), Setting::kFixed, "csv");
}

absl::StatusOr<Cohort> IngestCsvCohort(const std::filesystem::path& path,
                                       double lo, double hi) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        text::Cat("cannot open ", path.string()));
  }
  absl::StatusOr<Cohort> cohort = ParseCsvCohort(in, lo, hi);
  if (!cohort.ok()) {
    return text::Annotate(cohort.status(), path.string());
  }
  return cohort;
}

}  // namespace ldpmin
