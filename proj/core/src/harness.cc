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

#include "ldpmin/harness.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "absl/status/status.h"
#include "ldpmin/protocol.h"
#include "ldpmin/random.h"
#include "text.h"

namespace ldpmin {
namespace {

constexpr uint64_t kDataStreamTag = 0x6461746100000000ULL;  // "data"

uint64_t CellKey(int64_t n, double epsilon, double x_min,
                 MechanismKind mechanism) {
  uint64_t h = MixBits(static_cast<uint64_t>(n));
  h = MixBits(h ^ std::bit_cast<uint64_t>(epsilon));
  h = MixBits(h ^ std::bit_cast<uint64_t>(x_min));
  return MixBits(h ^ static_cast<uint64_t>(mechanism));
}

uint64_t DataKey(int64_t n, double x_min) {
  uint64_t h = MixBits(kDataStreamTag ^ static_cast<uint64_t>(n));
  return MixBits(h ^ std::bit_cast<uint64_t>(x_min));
}

struct Group {
  size_t n_index = 0;
  size_t x_index = 0;
  std::optional<FatModel> model;
};

// Errors of `reps` runs of one mechanism on one placement.
absl::StatusOr<std::vector<double>> RunCell(
    const ExperimentSpec& spec, const FatModel& model,
    const std::optional<Cohort>& fixed_cohort, int64_t n,
    PrivacyBudget epsilon, const ParamChoice& params,
    MechanismKind mechanism) {
  const double truth = model.support_lo();
  const uint64_t key = CellKey(n, epsilon.epsilon(), truth, mechanism);
  const ProtocolConfig config = MakeProtocolConfig(params, epsilon);
  std::vector<double> errors;
  errors.reserve(static_cast<size_t>(spec.reps));

  for (int rep = 0; rep < spec.reps; ++rep) {
    std::optional<Cohort> drawn;
    if (!fixed_cohort.has_value()) {
      SeededStream data_rng =
          SplitStream(spec.seed, DataKey(n, truth), static_cast<uint64_t>(rep));
      absl::StatusOr<Cohort> c = IidCohort(model, n, data_rng);
      if (!c.ok()) return c.status();
      drawn = *std::move(c);
    }
    const Cohort& cohort = fixed_cohort.has_value() ? *fixed_cohort : *drawn;
    SeededStream rng =
        SplitStream(spec.seed, key, static_cast<uint64_t>(rep));

    double estimate = 0.0;
    switch (mechanism) {
      case MechanismKind::kBinarySearch: {
        absl::StatusOr<Transcript> t =
            RunPrivateMin(cohort.values(), config, rng);
        if (!t.ok()) return t.status();
        estimate = t->estimate;
        break;
      }
      case MechanismKind::kNonPrivate: {
        absl::StatusOr<Transcript> t =
            RunNonPrivateMin(cohort.values(), params.depth);
        if (!t.ok()) return t.status();
        estimate = t->estimate;
        break;
      }
      case MechanismKind::kLaplaceBaseline: {
        absl::StatusOr<double> m = BaselineMin(cohort.values(), epsilon, rng);
        if (!m.ok()) return m.status();
        estimate = *m;
        break;
      }
    }
    errors.push_back(std::abs(estimate - truth));

    // The non-private search on fixed data has no randomness left.
    if (mechanism == MechanismKind::kNonPrivate && fixed_cohort.has_value()) {
      errors.assign(static_cast<size_t>(spec.reps), errors.front());
      break;
    }
  }
  return errors;
}

CellStats Summarize(double x_min, const std::vector<double>& errors) {
  CellStats s;
  s.x_min = x_min;
  double sum = 0.0;
  for (double e : errors) sum += e;
  s.mean_abs_err = sum / static_cast<double>(errors.size());
  s.q05 = SampleQuantile(errors, 0.05);
  s.q95 = SampleQuantile(errors, 0.95);
  return s;
}

absl::StatusOr<std::vector<std::string_view>> SplitList(std::string_view v) {
  std::vector<std::string_view> out;
  for (std::string_view item : text::Split(v, ',')) {
    item = text::Trim(item);
    if (item.empty()) {
      return absl::InvalidArgumentError("empty list element");
    }
    out.push_back(item);
  }
  return out;
}

absl::StatusOr<double> ParseReal(std::string_view s) {
  std::optional<double> v = text::ParseDouble(s, /*allow_inf=*/true);
  if (!v.has_value()) {
    return absl::InvalidArgumentError(text::Cat("'", s, "' is not a number"));
  }
  return *v;
}

// Integer, or a power of two written 2^k.
absl::StatusOr<int64_t> ParseCount(std::string_view s) {
  if (s.size() > 2 && s.substr(0, 2) == "2^") {
    std::optional<int> k = text::ParseInt<int>(s.substr(2));
    if (!k.has_value() || *k < 0 || *k > 40) {
      return absl::InvalidArgumentError(text::Cat("bad power '", s, "'"));
    }
    return int64_t{1} << *k;
  }
  std::optional<int64_t> v = text::ParseInt<int64_t>(s);
  if (!v.has_value()) {
    return absl::InvalidArgumentError(text::Cat("'", s, "' is not a count"));
  }
  return *v;
}

}  // namespace

std::string_view MechanismName(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kBinarySearch:
      return "binary_search";
    case MechanismKind::kLaplaceBaseline:
      return "laplace_baseline";
    case MechanismKind::kNonPrivate:
      return "nonprivate";
  }
  return "unknown";
}

absl::StatusOr<MechanismKind> ParseMechanism(std::string_view name) {
  for (MechanismKind k :
       {MechanismKind::kBinarySearch, MechanismKind::kLaplaceBaseline,
        MechanismKind::kNonPrivate}) {
    if (MechanismName(k) == name) return k;
  }
  return absl::InvalidArgumentError(text::Cat(
      "unknown mechanism '", name,
      "' (expected binary_search, laplace_baseline or nonprivate)"));
}

std::vector<double> DefaultXMinGrid(double width) {
  std::vector<double> grid;
  for (int k = 0; k <= 5; ++k) {
    grid.push_back(static_cast<double>(k) / 5.0 * (2.0 - width) - 1.0);
  }
  return grid;
}

absl::Status ValidateSpec(const ExperimentSpec& spec) {
  if (spec.n_grid.empty()) {
    return absl::InvalidArgumentError("n_grid is empty");
  }
  if (spec.epsilon_grid.empty()) {
    return absl::InvalidArgumentError("epsilon_grid is empty");
  }
  if (spec.mechanisms.empty()) {
    return absl::InvalidArgumentError("no mechanism selected");
  }
  if (spec.reps < 1) {
    return absl::InvalidArgumentError("reps must be at least 1");
  }
  for (int64_t n : spec.n_grid) {
    if (n < 2) {
      return absl::InvalidArgumentError(
          text::Cat("n_grid entry ", n, " is below 2"));
    }
  }
  for (double eps : spec.epsilon_grid) {
    if (absl::Status s = PrivacyBudget::Create(eps).status(); !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentSpec& spec) {
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;

  const std::vector<double> xmin_grid = spec.xmin_grid.empty()
                                            ? DefaultXMinGrid(spec.model.width())
                                            : spec.xmin_grid;
  const size_t num_n = spec.n_grid.size();
  const size_t num_eps = spec.epsilon_grid.size();
  const size_t num_mech = spec.mechanisms.size();
  const size_t num_x = xmin_grid.size();

  ExperimentResult result;

  std::vector<PrivacyBudget> budgets;
  for (double eps : spec.epsilon_grid) {
    budgets.push_back(*PrivacyBudget::Create(eps));
  }
  // params[n][eps]
  std::vector<std::vector<ParamChoice>> params(num_n);
  for (size_t i = 0; i < num_n; ++i) {
    for (size_t j = 0; j < num_eps; ++j) {
      absl::StatusOr<ParamChoice> p =
          ChooseParams(spec.params, spec.n_grid[i], budgets[j]);
      if (!p.ok()) return p.status();
      params[i].push_back(*p);
    }
  }

  std::vector<Group> groups;
  std::vector<bool> feasible(num_x, false);
  for (size_t x = 0; x < num_x; ++x) {
    absl::StatusOr<FatModel> placed = spec.model.WithXMin(xmin_grid[x]);
    if (!placed.ok()) {
      result.notes.push_back(text::Cat("x_min=", xmin_grid[x],
                                          " skipped: ",
                                          text::Message(placed.status())));
      continue;
    }
    feasible[x] = true;
    for (size_t i = 0; i < num_n; ++i) {
      groups.push_back(Group{i, x, *placed});
    }
  }
  if (groups.empty()) {
    return absl::InvalidArgumentError(
        "no feasible x_min placement for this model");
  }

  // cells[((i * num_eps + j) * num_mech + m) * num_x + x]
  std::vector<std::optional<CellStats>> cells(num_n * num_eps * num_mech *
                                              num_x);
  std::atomic<size_t> next{0};
  std::mutex error_mu;
  absl::Status first_error;

  auto worker = [&] {
    for (size_t g = next++; g < groups.size(); g = next++) {
      const Group& group = groups[g];
      const int64_t n = spec.n_grid[group.n_index];
      std::optional<Cohort> fixed;
      if (spec.setting == Setting::kFixed) {
        absl::StatusOr<Cohort> c = FixedCohort(*group.model, n);
        if (!c.ok()) {
          std::lock_guard lock(error_mu);
          if (first_error.ok()) first_error = c.status();
          return;
        }
        fixed = *std::move(c);
      }
      for (size_t j = 0; j < num_eps; ++j) {
        for (size_t m = 0; m < num_mech; ++m) {
          absl::StatusOr<std::vector<double>> errors =
              RunCell(spec, *group.model, fixed, n, budgets[j],
                      params[group.n_index][j], spec.mechanisms[m]);
          if (!errors.ok()) {
            std::lock_guard lock(error_mu);
            if (first_error.ok()) first_error = errors.status();
            return;
          }
          cells[((group.n_index * num_eps + j) * num_mech + m) * num_x +
                group.x_index] = Summarize(xmin_grid[group.x_index], *errors);
        }
      }
    }
  };

  int threads = spec.threads > 0
                    ? spec.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp<int>(threads, 1, static_cast<int>(groups.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (!first_error.ok()) return first_error;

  for (size_t i = 0; i < num_n; ++i) {
    for (size_t j = 0; j < num_eps; ++j) {
      for (size_t m = 0; m < num_mech; ++m) {
        ExperimentRow row;
        row.n = spec.n_grid[i];
        row.epsilon = spec.epsilon_grid[j];
        row.mechanism = spec.mechanisms[m];
        row.param_mode = spec.params.mode;
        row.depth = params[i][j].depth;
        row.gamma = params[i][j].gamma;
        row.reps = spec.reps;
        row.seed = spec.seed;
        const CellStats* worst = nullptr;
        for (size_t x = 0; x < num_x; ++x) {
          if (!feasible[x]) continue;
          const CellStats& s =
              *cells[((i * num_eps + j) * num_mech + m) * num_x + x];
          row.per_xmin.push_back(s);
        }
        for (const CellStats& s : row.per_xmin) {
          if (worst == nullptr || s.mean_abs_err > worst->mean_abs_err) {
            worst = &s;
          }
        }
        row.worst_xmin = worst->x_min;
        row.mean_abs_err = worst->mean_abs_err;
        row.q05 = worst->q05;
        row.q95 = worst->q95;
        result.rows.push_back(std::move(row));
      }
    }
  }
  return result;
}

absl::StatusOr<std::vector<ComparisonRow>> CompareBaseline(
    const ExperimentSpec& spec) {
  ExperimentSpec paired = spec;
  paired.mechanisms = {MechanismKind::kBinarySearch,
                       MechanismKind::kLaplaceBaseline};
  absl::StatusOr<ExperimentResult> result = RunExperiment(paired);
  if (!result.ok()) return result.status();
  std::vector<ComparisonRow> rows;
  // Rows come in (binary search, baseline) pairs per (n, epsilon).
  for (size_t k = 0; k + 1 < result->rows.size(); k += 2) {
    const ExperimentRow& ours = result->rows[k];
    const ExperimentRow& base = result->rows[k + 1];
    ComparisonRow row;
    row.n = ours.n;
    row.epsilon = ours.epsilon;
    row.binary_search_err = ours.mean_abs_err;
    row.baseline_err = base.mean_abs_err;
    row.ratio = ours.mean_abs_err > 0.0
                    ? base.mean_abs_err / ours.mean_abs_err
                    : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

std::vector<GuidelinePoint> GuidelineCurve(ParamMode mode, double alpha,
                                           std::span<const int64_t> n_grid,
                                           double epsilon,
                                           std::optional<double> anchor) {
  const bool unknown = mode == ParamMode::kUnknownAlpha ||
                       mode == ParamMode::kUnknownAlphaPreset;
  const double log_power = unknown ? 6.0 : 3.0;
  std::vector<GuidelinePoint> curve;
  for (int64_t n : n_grid) {
    const double nd = static_cast<double>(n);
    const double base =
        std::pow(std::log(nd), log_power) / (epsilon * epsilon * nd);
    curve.push_back({n, std::pow(base, 1.0 / (2.0 * alpha))});
  }
  if (anchor.has_value() && !curve.empty()) {
    const auto largest = std::max_element(
        curve.begin(), curve.end(),
        [](const GuidelinePoint& a, const GuidelinePoint& b) {
          return a.n < b.n;
        });
    const double scale = *anchor / largest->value;
    for (GuidelinePoint& p : curve) p.value *= scale;
    largest->value = *anchor;
  }
  return curve;
}

double SampleQuantile(std::vector<double> samples, double q) {
  if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(samples.begin(), samples.end());
  const double pos = q * static_cast<double>(samples.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

absl::StatusOr<ExperimentSpec> ParseExperimentConfig(std::istream& in) {
  ExperimentSpec spec;
  std::string model_name = "uniform";
  double alpha = 1.0, beta = 1.0, delta = 2.0;
  double sigma = 1.0, width = 2.0;
  std::optional<double> mu_offset;

  std::string line;
  int line_no = 0;
  auto fail = [&](std::string_view msg) {
    return absl::InvalidArgumentError(
        text::Cat("config line ", line_no, ": ", msg));
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = line;
    if (size_t hash = body.find('#'); hash != std::string_view::npos) {
      body = body.substr(0, hash);
    }
    body = text::Trim(body);
    if (body.empty()) continue;
    const size_t eq = body.find('=');
    if (eq == std::string_view::npos) return fail("expected key = value");
    const std::string key(text::Trim(body.substr(0, eq)));
    const std::string_view value =
        text::Trim(body.substr(eq + 1));
    if (value.empty()) return fail(text::Cat("no value for '", key, "'"));

    auto real = [&](double& out) -> absl::Status {
      absl::StatusOr<double> v = ParseReal(value);
      if (!v.ok()) return fail(text::Message(v.status()));
      out = *v;
      return absl::OkStatus();
    };
    absl::Status status;
    if (key == "model") {
      model_name = std::string(value);
    } else if (key == "alpha") {
      status = real(alpha);
    } else if (key == "beta") {
      status = real(beta);
    } else if (key == "delta") {
      status = real(delta);
    } else if (key == "sigma") {
      status = real(sigma);
    } else if (key == "width") {
      status = real(width);
    } else if (key == "mu_offset") {
      double v = 0.0;
      status = real(v);
      mu_offset = v;
    } else if (key == "setting") {
      absl::StatusOr<Setting> s = ParseSetting(value);
      if (!s.ok()) return fail(text::Message(s.status()));
      spec.setting = *s;
    } else if (key == "n_grid") {
      absl::StatusOr<std::vector<std::string_view>> items = SplitList(value);
      if (!items.ok()) return fail(text::Message(items.status()));
      for (std::string_view item : *items) {
        absl::StatusOr<int64_t> n = ParseCount(item);
        if (!n.ok()) return fail(text::Message(n.status()));
        spec.n_grid.push_back(*n);
      }
    } else if (key == "epsilon_grid") {
      absl::StatusOr<std::vector<std::string_view>> items = SplitList(value);
      if (!items.ok()) return fail(text::Message(items.status()));
      for (std::string_view item : *items) {
        absl::StatusOr<double> e = ParseReal(item);
        if (!e.ok()) return fail(text::Message(e.status()));
        spec.epsilon_grid.push_back(*e);
      }
    } else if (key == "xmin_grid") {
      absl::StatusOr<std::vector<std::string_view>> items = SplitList(value);
      if (!items.ok()) return fail(text::Message(items.status()));
      for (std::string_view item : *items) {
        absl::StatusOr<double> x = ParseReal(item);
        if (!x.ok()) return fail(text::Message(x.status()));
        spec.xmin_grid.push_back(*x);
      }
    } else if (key == "param_mode") {
      absl::StatusOr<ParamMode> m = ParseParamMode(value);
      if (!m.ok()) return fail(text::Message(m.status()));
      spec.params.mode = *m;
    } else if (key == "alpha0") {
      status = real(spec.params.alpha0);
    } else if (key == "log_base") {
      status = real(spec.params.log_base);
    } else if (key == "reps") {
      std::optional<int> v = text::ParseInt<int>(value);
      if (!v.has_value()) return fail("reps must be an integer");
      spec.reps = *v;
    } else if (key == "seed") {
      std::optional<uint64_t> v = text::ParseInt<uint64_t>(value);
      if (!v.has_value()) return fail("seed must be an unsigned integer");
      spec.seed = *v;
    } else if (key == "threads") {
      std::optional<int> v = text::ParseInt<int>(value);
      if (!v.has_value()) return fail("threads must be an integer");
      spec.threads = *v;
    } else if (key == "mechanism") {
      absl::StatusOr<std::vector<std::string_view>> items = SplitList(value);
      if (!items.ok()) return fail(text::Message(items.status()));
      spec.mechanisms.clear();
      for (std::string_view item : *items) {
        absl::StatusOr<MechanismKind> k = ParseMechanism(item);
        if (!k.ok()) return fail(text::Message(k.status()));
        spec.mechanisms.push_back(*k);
      }
    } else {
      return fail(text::Cat("unknown key '", key, "'"));
    }
    if (!status.ok()) return status;
  }

  absl::StatusOr<FatModel> model;
  if (model_name == "uniform") {
    model = FatModel::Uniform(-1.0, delta);
  } else if (model_name == "beta") {
    model = FatModel::Beta(alpha, beta, -1.0, delta);
  } else if (model_name == "truncnormal") {
    model = FatModel::TruncatedNormal(-1.0 + mu_offset.value_or(width / 2.0),
                                      sigma, -1.0, -1.0 + width);
  } else {
    return absl::InvalidArgumentError(text::Cat(
        "unknown model '", model_name,
        "' (expected uniform, beta or truncnormal)"));
  }
  if (!model.ok()) return model.status();
  spec.model = *std::move(model);
  if (absl::Status s = ValidateSpec(spec); !s.ok()) return s;
  return spec;
}

absl::StatusOr<ExperimentSpec> LoadExperimentConfig(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(text::Cat("cannot open ", path.string()));
  }
  absl::StatusOr<ExperimentSpec> spec = ParseExperimentConfig(in);
  if (!spec.ok()) {
    return text::Annotate(spec.status(), path.string());
  }
  return spec;
}

}  // namespace ldpmin
