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

#ifndef LDPMIN_HARNESS_H_
#define LDPMIN_HARNESS_H_

#include <cstdint>
#include <istream>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "ldpmin/datagen.h"
#include "ldpmin/params.h"

namespace ldpmin {

enum class MechanismKind { kBinarySearch, kLaplaceBaseline, kNonPrivate };

std::string_view MechanismName(MechanismKind kind);
absl::StatusOr<MechanismKind> ParseMechanism(std::string_view name);

struct ExperimentSpec {
  // Shape of the data distribution; its x_min is replaced by every entry of
  // xmin_grid in turn.
  FatModel model;
  Setting setting = Setting::kFixed;
  std::vector<int64_t> n_grid;
  std::vector<double> epsilon_grid;
  ParamSpec params;
  int reps = 200;
  // Empty means DefaultXMinGrid(model.width()).
  std::vector<double> xmin_grid;
  uint64_t seed = 1;
  std::vector<MechanismKind> mechanisms = {MechanismKind::kBinarySearch};
  // Worker threads; 0 picks std::thread::hardware_concurrency().
  int threads = 0;
};

// {k / 5 * (2 - width) - 1 : k = 0..5}: six placements of a support of the
// given width spread evenly across [-1, 1].
std::vector<double> DefaultXMinGrid(double width);

absl::Status ValidateSpec(const ExperimentSpec& spec);

struct CellStats {
  double x_min = 0.0;
  double mean_abs_err = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
};

// One (n, epsilon, mechanism) line of the result table. The headline
// numbers are those of the x_min with the largest mean error; q05 and q95
// are the quantiles of that same x_min's errors.
struct ExperimentRow {
  int64_t n = 0;
  double epsilon = 0.0;
  MechanismKind mechanism = MechanismKind::kBinarySearch;
  ParamMode param_mode = ParamMode::kLowerAlphaPreset;
  int depth = 0;
  double gamma = 0.0;
  double worst_xmin = 0.0;
  double mean_abs_err = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  int reps = 0;
  uint64_t seed = 0;
  std::vector<CellStats> per_xmin;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  // Grid points that were skipped, e.g. placements leaving [-1, 1].
  std::vector<std::string> notes;
};

// Runs reps independent protocol executions per (n, epsilon, x_min,
// mechanism). Repetition r of a cell uses SplitStream(seed, key, r) where
// key hashes the cell's values, so cells do not depend on grid order or on
// thread scheduling. In the i.i.d. setting the data draw of a repetition is
// shared by all mechanisms and epsilons.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentSpec& spec);

struct ComparisonRow {
  int64_t n = 0;
  double epsilon = 0.0;
  double binary_search_err = 0.0;
  double baseline_err = 0.0;
  // baseline / binary search.
  double ratio = 0.0;
};

// Runs the spec with both the binary search and the Laplace baseline and
// pairs the rows. Any other mechanisms listed in the spec are ignored.
absl::StatusOr<std::vector<ComparisonRow>> CompareBaseline(
    const ExperimentSpec& spec);

struct GuidelinePoint {
  int64_t n = 0;
  double value = 0.0;
};

// Theoretical rate (ln^k N / (eps^2 N))^{1/(2 alpha)} with k = 3 for the
// known-alpha schedules and k = 6 for the unknown-alpha ones. When an anchor
// is given the curve is rescaled to equal it at the largest n.
std::vector<GuidelinePoint> GuidelineCurve(ParamMode mode, double alpha,
                                           std::span<const int64_t> n_grid,
                                           double epsilon,
                                           std::optional<double> anchor);

// Flat key = value experiment config; '#' starts a comment, lists are
// comma-separated. Errors name the offending line.
absl::StatusOr<ExperimentSpec> ParseExperimentConfig(std::istream& in);
absl::StatusOr<ExperimentSpec> LoadExperimentConfig(
    const std::filesystem::path& path);

// Linear-interpolation (type 7) quantile of unsorted samples.
double SampleQuantile(std::vector<double> samples, double q);

}  // namespace ldpmin

#endif  // LDPMIN_HARNESS_H_
