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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <string_view>
#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fmt/format.h"
#include "json.hpp"
#include "ldpmin/analysis.h"
#include "ldpmin/datagen.h"
#include "ldpmin/harness.h"
#include "ldpmin/mechanisms.h"
#include "ldpmin/net/client.h"
#include "ldpmin/net/server.h"
#include "ldpmin/params.h"
#include "ldpmin/random.h"
#include "ldpmin/report.h"

namespace ldpmin::cli {
namespace {

using json = nlohmann::json;

// Cell key of the data stream in `simulate`.
constexpr uint64_t kDataStreamKey = 0xda7a;

std::string Msg(const absl::Status& s) { return std::string(s.message()); }

absl::StatusOr<PrivacyBudget> ParseEpsilon(std::string_view text) {
  if (text == "inf" || text == "+inf") return PrivacyBudget::NoiseFree();
  double v = 0.0;
  try {
    size_t used = 0;
    v = std::stod(std::string(text), &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    return absl::InvalidArgumentError(
        fmt::format("--epsilon: '{}' is not a number", text));
  }
  return PrivacyBudget::Create(v);
}

absl::StatusOr<std::pair<std::string, uint16_t>> ParseHostPort(
    std::string_view text) {
  const size_t colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    return absl::InvalidArgumentError(
        fmt::format("'{}' is not host:port", text));
  }
  const std::string port_text(text.substr(colon + 1));
  try {
    size_t used = 0;
    const int port = std::stoi(port_text, &used);
    if (used != port_text.size() || port < 0 || port > 65535) {
      throw std::out_of_range("port");
    }
    return std::make_pair(std::string(text.substr(0, colon)),
                          static_cast<uint16_t>(port));
  } catch (const std::exception&) {
    return absl::InvalidArgumentError(
        fmt::format("'{}' has no valid port", text));
  }
}

json JsonReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

// Writes to the named file, or to `fallback` when no file is given.
class OutputSink {
 public:
  OutputSink(const std::optional<std::string>& path, std::ostream& fallback) {
    if (path.has_value()) {
      file_ = std::make_unique<std::ofstream>(*path);
      stream_ = file_.get();
    } else {
      stream_ = &fallback;
    }
  }
  bool ok() const { return stream_->good(); }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

absl::StatusOr<FatModel> BuildModel(const SimulateOptions& o) {
  if (o.model == "uniform") return FatModel::Uniform(o.x_min, o.delta);
  if (o.model == "beta") {
    return FatModel::Beta(o.alpha, o.beta, o.x_min, o.delta);
  }
  if (o.model == "truncnormal") {
    const double x_max = o.x_max.value_or(1.0);
    return FatModel::TruncatedNormal(o.mu.value_or((o.x_min + x_max) / 2.0),
                                     o.sigma, o.x_min, x_max);
  }
  return absl::InvalidArgumentError(fmt::format(
      "unknown model '{}' (expected uniform, beta or truncnormal)", o.model));
}

absl::StatusOr<Cohort> BuildCohort(const SimulateOptions& o, int64_t n) {
  absl::StatusOr<Cohort> cohort;
  if (!o.values.empty()) {
    cohort = Cohort::Create(o.values, Setting::kFixed, "values");
  } else if (o.data_path.has_value()) {
    cohort = IngestCsvCohort(*o.data_path, o.lo, o.hi);
  } else {
    absl::StatusOr<FatModel> model = BuildModel(o);
    if (!model.ok()) return model.status();
    absl::StatusOr<Setting> setting = ParseSetting(o.setting);
    if (!setting.ok()) return setting.status();
    if (*setting == Setting::kFixed) {
      cohort = FixedCohort(*model, n);
    } else {
      SeededStream data_rng(DeriveSeed(o.seed, kDataStreamKey, 0));
      cohort = IidCohort(*model, n, data_rng);
    }
  }
  if (!cohort.ok()) return cohort.status();
  if (static_cast<int64_t>(cohort->size()) != n) {
    return absl::InvalidArgumentError(fmt::format(
        "--n is {} but the data holds {} values", n, cohort->size()));
  }
  return cohort;
}

// Protocol parameters from --gamma/--depth/--param-mode:
//  * --param-mode: depth and gamma from the schedule;
//  * --gamma: taken as is, --depth required;
//  * --depth alone: gamma = 1/n when eps = inf, otherwise the threshold
//    with h = ln(n) / 2.
//  * nothing: the lower_alpha schedule.
absl::StatusOr<ProtocolConfig> BuildConfig(const SimulateOptions& o,
                                           PrivacyBudget eps, int64_t n) {
  ProtocolConfig config;
  config.epsilon = eps;
  config.n = n;
  if (o.param_mode.has_value() || (!o.gamma && !o.depth)) {
    ParamSpec spec;
    if (o.param_mode.has_value()) {
      absl::StatusOr<ParamMode> mode = ParseParamMode(*o.param_mode);
      if (!mode.ok()) return mode.status();
      spec.mode = *mode;
    }
    spec.alpha0 = o.alpha0;
    absl::StatusOr<ParamChoice> choice = ChooseParams(spec, n, eps);
    if (!choice.ok()) return choice.status();
    return MakeProtocolConfig(*choice, eps);
  }
  if (!o.depth.has_value()) {
    return absl::InvalidArgumentError("--gamma needs --depth");
  }
  config.depth = *o.depth;
  if (o.gamma.has_value()) {
    config.gamma = *o.gamma;
  } else if (eps.noise_free()) {
    config.gamma = 1.0 / static_cast<double>(n);
  } else {
    config.gamma = GammaThreshold(eps, config.depth,
                                  std::log(static_cast<double>(n)) / 2.0, n);
  }
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  return config;
}

absl::Status WriteMeta(const std::string& path, const ExperimentSpec& spec,
                       const ExperimentResult& result,
                       const std::string& config_path) {
  json meta;
  meta["config"] = config_path;
  meta["model"] = spec.model.Describe();
  meta["setting"] = std::string(SettingName(spec.setting));
  meta["param_mode"] = std::string(ParamModeName(spec.params.mode));
  meta["reps"] = spec.reps;
  meta["seed"] = spec.seed;
  meta["xmin_grid"] = spec.xmin_grid.empty()
                          ? DefaultXMinGrid(spec.model.width())
                          : spec.xmin_grid;
  meta["reported_cell"] = "max over x_min of the mean absolute error";
  meta["quantiles"] = "q05 and q95 of the errors at the worst x_min";
  meta["quantile_method"] = "linear interpolation (type 7)";
  meta["notes"] = result.notes;
  std::ofstream out(path);
  out << meta.dump(2) << '\n';
  if (!out) return absl::InternalError("cannot write " + path);
  return absl::OkStatus();
}

absl::StatusOr<ExperimentSpec> LoadSpec(const ExperimentOptions& opts) {
  absl::StatusOr<ExperimentSpec> spec = LoadExperimentConfig(opts.config_path);
  if (!spec.ok()) return spec.status();
  if (opts.reps.has_value()) spec->reps = *opts.reps;
  if (opts.threads.has_value()) spec->threads = *opts.threads;
  if (absl::Status s = ValidateSpec(*spec); !s.ok()) return s;
  if (!opts.allow_large_n) {
    for (int64_t n : spec->n_grid) {
      if (n > kDefaultMaxN) {
        return absl::InvalidArgumentError(fmt::format(
            "n = {} exceeds 2^16; pass --allow-large-n to run it", n));
      }
    }
  }
  return spec;
}

double ModelAlpha(const FatModel& model) {
  if (const auto* b = std::get_if<BetaScaled>(&model.kind())) return b->alpha;
  return 1.0;
}

}  // namespace

void WriteTranscriptJsonl(std::ostream& out, const Transcript& t,
                          std::optional<uint64_t> seed) {
  for (const RoundRecord& r : t.rounds) {
    json line;
    line["round"] = r.round;
    line["tau"] = r.tau;
    line["sum_z"] = r.sum_z;
    line["phi"] = r.phi;
    line["branch"] = r.branch == Branch::kLeft ? "Left" : "Right";
    out << line.dump() << '\n';
  }
  json summary;
  summary["estimate"] = t.estimate;
  summary["target"] = t.target == SearchTarget::kMin ? "min" : "max";
  summary["sanitized"] = t.sanitized;
  summary["epsilon"] = JsonReal(t.config.epsilon.epsilon());
  summary["depth"] = t.config.depth;
  summary["gamma"] = t.config.gamma;
  summary["n"] = t.config.n;
  summary["degenerate_threshold"] = t.degenerate_threshold;
  if (seed.has_value()) summary["seed"] = *seed;
  out << summary.dump() << '\n';
}

int RunSimulate(const SimulateOptions& o, std::ostream& out,
                std::ostream& err) {
  if (!o.n.has_value()) {
    err << "simulate: --n is required\n";
    return kExitUsage;
  }
  if (o.gamma.has_value() && o.param_mode.has_value()) {
    err << "simulate: --gamma conflicts with --param-mode\n";
    return kExitUsage;
  }
  if (o.depth.has_value() && o.param_mode.has_value()) {
    err << "simulate: --depth conflicts with --param-mode\n";
    return kExitUsage;
  }
  if (o.target != "min" && o.target != "max") {
    err << "simulate: --target must be min or max\n";
    return kExitUsage;
  }
  absl::StatusOr<MechanismKind> mechanism = ParseMechanism(o.mechanism);
  if (!mechanism.ok()) {
    err << "simulate: " << Msg(mechanism.status()) << '\n';
    return kExitUsage;
  }
  absl::StatusOr<PrivacyBudget> eps = ParseEpsilon(o.epsilon);
  if (!eps.ok()) {
    err << "simulate: " << Msg(eps.status()) << '\n';
    return kExitUsage;
  }
  absl::StatusOr<Cohort> cohort = BuildCohort(o, *o.n);
  if (!cohort.ok()) {
    err << "simulate: " << Msg(cohort.status()) << '\n';
    return kExitUsage;
  }
  const bool max = o.target == "max";
  std::vector<double> values(cohort->values().begin(), cohort->values().end());
  SeededStream rng(o.seed);

  OutputSink sink(o.out, out);
  if (!sink.ok()) {
    err << "simulate: cannot open " << *o.out << '\n';
    return kExitFailure;
  }

  if (*mechanism == MechanismKind::kLaplaceBaseline) {
    if (max) {
      for (double& v : values) v = -v;
    }
    absl::StatusOr<double> m = BaselineMin(values, *eps, rng);
    if (!m.ok()) {
      err << "simulate: " << Msg(m.status()) << '\n';
      return kExitFailure;
    }
    json summary;
    summary["estimate"] = max ? -*m : *m;
    summary["target"] = o.target;
    summary["mechanism"] = o.mechanism;
    summary["epsilon"] = JsonReal(eps->epsilon());
    summary["n"] = *o.n;
    summary["seed"] = o.seed;
    sink.stream() << summary.dump() << '\n';
    return kExitOk;
  }

  absl::StatusOr<ProtocolConfig> config = BuildConfig(o, *eps, *o.n);
  if (!config.ok()) {
    err << "simulate: " << Msg(config.status()) << '\n';
    return kExitUsage;
  }
  absl::StatusOr<Transcript> transcript;
  if (*mechanism == MechanismKind::kNonPrivate) {
    if (max) {
      for (double& v : values) v = -v;
    }
    transcript = RunNonPrivateMin(values, config->depth);
    if (transcript.ok() && max) {
      transcript->target = SearchTarget::kMax;
      transcript->estimate = -transcript->estimate;
      for (RoundRecord& r : transcript->rounds) r.tau = -r.tau;
    }
  } else if (o.client_seed_base.has_value()) {
    if (max) {
      err << "simulate: --client-seed-base supports --target min only\n";
      return kExitUsage;
    }
    std::vector<SeededStream> users;
    users.reserve(values.size());
    std::vector<RandomStream*> streams;
    for (size_t i = 0; i < values.size(); ++i) {
      users.emplace_back(*o.client_seed_base + i);
      streams.push_back(&users.back());
    }
    transcript = RunPrivateMin(values, *config, streams);
  } else if (max) {
    transcript = RunPrivateMax(values, *config, rng);
  } else {
    transcript = RunPrivateMin(values, *config, rng);
  }
  if (!transcript.ok()) {
    err << "simulate: " << Msg(transcript.status()) << '\n';
    return kExitFailure;
  }
  WriteTranscriptJsonl(sink.stream(), *transcript, o.seed);
  return kExitOk;
}

int RunExperimentCommand(const ExperimentOptions& opts, std::ostream& out,
                         std::ostream& err) {
  absl::StatusOr<ExperimentSpec> spec = LoadSpec(opts);
  if (!spec.ok()) {
    err << "experiment: " << Msg(spec.status()) << '\n';
    return kExitUsage;
  }
  absl::StatusOr<ExperimentResult> result = RunExperiment(*spec);
  if (!result.ok()) {
    err << "experiment: " << Msg(result.status()) << '\n';
    return kExitFailure;
  }
  for (const std::string& note : result->notes) err << "note: " << note << '\n';

  OutputSink sink(opts.out, out);
  if (!sink.ok()) {
    err << "experiment: cannot open " << *opts.out << '\n';
    return kExitFailure;
  }
  WriteResultCsv(sink.stream(), result->rows);

  if (opts.out.has_value()) {
    if (absl::Status s =
            WriteMeta(*opts.out + ".meta.json", *spec, *result,
                      opts.config_path);
        !s.ok()) {
      err << "experiment: " << Msg(s) << '\n';
      return kExitFailure;
    }
  }
  if (opts.detail_out.has_value()) {
    std::ofstream detail(*opts.detail_out);
    WriteDetailCsv(detail, result->rows);
  }
  if (opts.guideline_out.has_value()) {
    const double alpha = opts.guideline_alpha.value_or(ModelAlpha(spec->model));
    const MechanismKind anchor_mech = spec->mechanisms.front();
    std::vector<GuidelineSeries> series;
    for (double eps : spec->epsilon_grid) {
      // Anchor at the largest-n row of the first mechanism.
      std::optional<double> anchor;
      int64_t best_n = 0;
      for (const ExperimentRow& r : result->rows) {
        if (r.epsilon == eps && r.mechanism == anchor_mech && r.n > best_n &&
            r.mean_abs_err > 0.0) {
          best_n = r.n;
          anchor = r.mean_abs_err;
        }
      }
      series.push_back({eps, GuidelineCurve(spec->params.mode, alpha,
                                            spec->n_grid, eps, anchor)});
    }
    std::ofstream guide(*opts.guideline_out);
    WriteGuidelineCsv(guide, series);
  }
  return kExitOk;
}

int RunCompareCommand(const ExperimentOptions& opts, std::ostream& out,
                      std::ostream& err) {
  absl::StatusOr<ExperimentSpec> spec = LoadSpec(opts);
  if (!spec.ok()) {
    err << "compare: " << Msg(spec.status()) << '\n';
    return kExitUsage;
  }
  absl::StatusOr<std::vector<ComparisonRow>> rows = CompareBaseline(*spec);
  if (!rows.ok()) {
    err << "compare: " << Msg(rows.status()) << '\n';
    return kExitFailure;
  }
  OutputSink sink(opts.out, out);
  WriteComparisonCsv(sink.stream(), *rows);
  return kExitOk;
}

int RunFit(const FitOptions& opts, std::ostream& out, std::ostream& err) {
  std::ifstream in(opts.csv_path);
  if (!in) {
    err << "fit: cannot open " << opts.csv_path << '\n';
    return kExitFailure;
  }
  RateCsvFilter filter;
  filter.mechanism = opts.mechanism;
  if (opts.epsilon.has_value()) {
    absl::StatusOr<PrivacyBudget> eps = ParseEpsilon(*opts.epsilon);
    if (!eps.ok()) {
      err << "fit: " << Msg(eps.status()) << '\n';
      return kExitUsage;
    }
    filter.epsilon = eps->epsilon();
  }
  absl::StatusOr<std::vector<RatePoint>> points = ReadRatePoints(in, filter);
  if (!points.ok()) {
    err << "fit: " << opts.csv_path << ": " << Msg(points.status()) << '\n';
    return kExitFailure;
  }
  absl::StatusOr<RateFit> fit = FitRate(*points);
  if (!fit.ok()) {
    err << "fit: " << Msg(fit.status()) << '\n';
    return kExitFailure;
  }
  out << "points=" << points->size() << '\n'
      << "A=" << FormatReal(fit->a) << '\n'
      << "B=" << FormatReal(fit->b) << '\n'
      << "C=" << FormatReal(fit->c) << '\n'
      << "alpha_hat="
      << (fit->alpha_hat ? FormatReal(*fit->alpha_hat) : std::string("undefined"))
      << '\n'
      << "residual=" << FormatReal(fit->residual) << '\n';
  if (!(fit->a > 0.0)) {
    err << "fit: error does not decrease with n (A <= 0)\n";
    return kExitFailure;
  }
  return kExitOk;
}

int RunServe(const ServeOptions& opts, std::ostream& out, std::ostream& err) {
  absl::StatusOr<std::pair<std::string, uint16_t>> bind =
      ParseHostPort(opts.bind);
  absl::StatusOr<PrivacyBudget> eps = ParseEpsilon(opts.epsilon);
  if (!bind.ok() || !eps.ok()) {
    err << "serve: "
        << Msg(!bind.ok() ? bind.status() : eps.status()) << '\n';
    return kExitUsage;
  }
  ProtocolConfig config;
  config.epsilon = *eps;
  config.depth = opts.depth;
  config.gamma = opts.gamma;
  config.n = opts.clients;
  if (absl::Status s = ValidateConfig(config); !s.ok()) {
    err << "serve: " << Msg(s) << '\n';
    return kExitUsage;
  }

  net::ServerOptions server_opts;
  server_opts.bind_host = bind->first;
  server_opts.port = bind->second;
  server_opts.round_timeout = std::chrono::milliseconds(opts.timeout_ms);
  absl::StatusOr<net::AggregatorServer> server =
      net::AggregatorServer::Listen(server_opts);
  if (!server.ok()) {
    err << "serve: " << Msg(server.status()) << '\n';
    return kExitFailure;
  }
  err << "listening on " << bind->first << ':' << server->port() << '\n';
  if (opts.port_file.has_value()) {
    std::ofstream pf(*opts.port_file);
    pf << server->port() << '\n';
  }
  absl::StatusOr<Transcript> transcript = server->Serve(config);
  if (!transcript.ok()) {
    err << "serve: aborted: " << Msg(transcript.status()) << '\n';
    return kExitFailure;
  }
  out << "RESULT " << FormatReal(transcript->estimate) << '\n';
  if (opts.transcript_out.has_value()) {
    std::ofstream tf(*opts.transcript_out);
    WriteTranscriptJsonl(tf, *transcript, std::nullopt);
  }
  return kExitOk;
}

int RunClientCommand(const ClientCommandOptions& opts, std::ostream& out,
                     std::ostream& err) {
  if (!(opts.value >= -1.0 && opts.value <= 1.0)) {
    err << "client: --value " << opts.value << " is outside [-1, 1]\n";
    return kExitUsage;
  }
  absl::StatusOr<std::pair<std::string, uint16_t>> addr =
      ParseHostPort(opts.connect);
  if (!addr.ok()) {
    err << "client: " << Msg(addr.status()) << '\n';
    return kExitUsage;
  }
  net::ClientOptions client;
  client.host = addr->first;
  client.port = addr->second;
  client.client_id = opts.id;
  client.value = opts.value;
  client.seed = opts.seed;
  client.timeout = std::chrono::milliseconds(opts.timeout_ms);
  absl::StatusOr<double> estimate = net::RunClient(client);
  if (!estimate.ok()) {
    if (estimate.status().code() == absl::StatusCode::kAborted) {
      err << "client: server aborted: " << Msg(estimate.status()) << '\n';
    } else {
      err << "client: " << Msg(estimate.status()) << '\n';
    }
    return kExitFailure;
  }
  out << FormatReal(*estimate) << '\n';
  return kExitOk;
}

}  // namespace ldpmin::cli
