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

#ifndef LDPMIN_DATAGEN_H_
#define LDPMIN_DATAGEN_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpmin/random.h"

namespace ldpmin {

// x_min + delta * X with X ~ Beta(alpha, beta).
struct BetaScaled {
  double alpha = 1.0;
  double beta = 1.0;
  double x_min = -1.0;
  double delta = 2.0;
};

// Normal(mu, sigma^2) truncated to [x_min, x_max].
struct TruncNormal {
  double mu = 0.0;
  double sigma = 1.0;
  double x_min = -1.0;
  double x_max = 1.0;
};

// Step CDF of a finite sample.
struct Empirical {
  std::vector<double> sorted;
};

// A data distribution on [-1, 1]. Immutable once built.
class FatModel {
 public:
  using Kind = std::variant<BetaScaled, TruncNormal, Empirical>;

  // Uniform on [-1, 1].
  FatModel() : kind_(BetaScaled{}) {}

  static absl::StatusOr<FatModel> Beta(double alpha, double beta,
                                       double x_min, double delta);
  static absl::StatusOr<FatModel> Uniform(double x_min, double delta) {
    return Beta(1.0, 1.0, x_min, delta);
  }
  static absl::StatusOr<FatModel> TruncatedNormal(double mu, double sigma,
                                                  double x_min, double x_max);
  static absl::StatusOr<FatModel> FromValues(std::vector<double> values);

  const Kind& kind() const { return kind_; }

  // Infimum and supremum of the support.
  double support_lo() const;
  double support_hi() const;
  double width() const { return support_hi() - support_lo(); }

  // Same shape translated so that the support starts at x_min.
  absl::StatusOr<FatModel> WithXMin(double x_min) const;

  // F(x). Fails for x outside [-1, 1].
  absl::StatusOr<double> Cdf(double x) const;
  // F(x) without the domain check; clamps to 0 / 1 outside the support.
  double CdfUnchecked(double x) const;

  // F*(p) = inf{x : F(x) >= p}, with F*(0) = support_lo(). Parametric
  // models invert by bisection to an absolute x-tolerance of 1e-12.
  double Quantile(double p) const;

  std::string Describe() const;

 private:
  explicit FatModel(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

inline constexpr double kQuantileTolerance = 1e-12;

enum class Setting { kFixed, kIid };

std::string_view SettingName(Setting setting);
absl::StatusOr<Setting> ParseSetting(std::string_view name);

class Cohort {
 public:
  static absl::StatusOr<Cohort> Create(std::vector<double> values,
                                       Setting setting, std::string source);

  std::span<const double> values() const { return values_; }
  size_t size() const { return values_.size(); }
  Setting setting() const { return setting_; }
  const std::string& source() const { return source_; }
  double Min() const;

 private:
  Cohort(std::vector<double> values, Setting setting, std::string source)
      : values_(std::move(values)),
        setting_(setting),
        source_(std::move(source)) {}

  std::vector<double> values_;
  Setting setting_;
  std::string source_;
};

// Values F*((i - 1) / (n - 1)), i = 1..n, in increasing order. n >= 2.
absl::StatusOr<Cohort> FixedCohort(const FatModel& model, int64_t n);

// n inverse-CDF samples, one variate each.
absl::StatusOr<Cohort> IidCohort(const FatModel& model, int64_t n,
                                 RandomStream& rng);

// Empirical CDF F~(x) = (1/N) sum 1{x_i <= x} and its quantile
// F~*(g) = inf{t : F~(t) >= g}.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::span<const double> values);

  double operator()(double x) const;
  // Order statistic x_(k) for the smallest k with k / N >= g, using the same
  // floating-point comparison as operator(). g <= 0 returns x_(1).
  double Quantile(double g) const;
  std::span<const double> sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

// Constants of F(x) >= C (x - x_min)^alpha on (x_min, x_bar).
struct FatnessConstant {
  double c = 0.0;
  double x_bar = 0.0;
  double alpha = 1.0;
};

// Beta: alpha as given, C = min{1, 1 / (alpha B(alpha, beta))} / delta^alpha,
// x_bar = x_min + delta. Truncated normal: alpha = 1 and C is the smaller
// boundary density. Empirical models have no closed form and are rejected.
absl::StatusOr<FatnessConstant> ComputeFatnessConstant(const FatModel& model);

// Affine map [lo, hi] -> [-1, 1] and its inverse.
double RescaleToUnit(double x, double lo, double hi);
double RescaleFromUnit(double y, double lo, double hi);

// One decimal value per line; a non-numeric first line is treated as a
// header, blank lines are skipped. Errors carry the 1-based line number.
absl::StatusOr<Cohort> ParseCsvCohort(std::istream& in, double lo, double hi);
absl::StatusOr<Cohort> IngestCsvCohort(const std::filesystem::path& path,
                                       double lo, double hi);

}  // namespace ldpmin

#endif  // LDPMIN_DATAGEN_H_
