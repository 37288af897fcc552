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

#include "ldpmin/analysis.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "boost/math/special_functions/gamma.hpp"
#include "text.h"

namespace ldpmin {

double TailBound(double epsilon_round, double deviation, int64_t n) {
  // (e^r - 1)^2 / ((e^r + 1) e^r) = (1 - w)^2 / (1 + w), w = e^{-r}.
  const double w = std::exp(-epsilon_round);
  const double one_minus_w = -std::expm1(-epsilon_round);
  const double rate = one_minus_w * one_minus_w / (1.0 + w);
  const double exponent =
      -rate * deviation * deviation * static_cast<double>(n) / 4.0;
  return std::clamp(std::exp(exponent), 0.0, 1.0);
}

bool BoundApplies(const BoundInputs& in) {
  return 2.0 * in.gamma < in.c * std::pow(in.fat_width, in.alpha);
}

namespace {

ErrorBound SharedTerms(const BoundInputs& in) {
  ErrorBound bound;
  bound.applicable = true;
  bound.tail_term =
      TailBound(in.epsilon.PerRound(in.depth).epsilon(), in.gamma, in.n);
  bound.discretization_term = std::ldexp(1.0, -in.depth);
  return bound;
}

}  // namespace

ErrorBound ErrorBoundFixed(const BoundInputs& in) {
  if (!BoundApplies(in)) return ErrorBound{};
  ErrorBound bound = SharedTerms(in);
  bound.quantile_term = 2.0 * std::pow(2.0 * in.gamma / in.c, 1.0 / in.alpha);
  return bound;
}

ErrorBound ErrorBoundIid(const BoundInputs& in) {
  if (!BoundApplies(in) || !(in.gamma > 0.0)) return ErrorBound{};
  ErrorBound bound = SharedTerms(in);
  const double inv_alpha = 1.0 / in.alpha;
  const double nd = static_cast<double>(in.n);
  const double k = std::ceil(2.0 * in.gamma * nd);
  // Gamma(k + a) / Gamma(k) over Gamma(N + 1 + a) / Gamma(N + 1).
  const double ratio = *RisingFactorial(k, inv_alpha) /
                       *RisingFactorial(nd + 1.0, inv_alpha);
  bound.quantile_term = 2.0 * std::pow(1.0 / in.c, inv_alpha) * ratio;
  return bound;
}

absl::StatusOr<double> RisingFactorial(double x, double a) {
  if (!(x > 0.0) || !(x + a > 0.0) || !std::isfinite(x) || !std::isfinite(a)) {
    return absl::InvalidArgumentError(text::Cat(
        "rising factorial needs x > 0 and x + a > 0, got x=", x, " a=", a));
  }
  if (a == 0.0) return 1.0;
  // tgamma_delta_ratio(x, a) = Gamma(x) / Gamma(x + a), accurate for large x.
  return 1.0 / boost::math::tgamma_delta_ratio(x, a);
}

absl::StatusOr<RateFit> FitRate(std::span<const RatePoint> points) {
  if (points.size() < 3) {
    return absl::InvalidArgumentError(
        text::Cat("rate fit needs at least 3 points, got ", points.size()));
  }
  std::set<double> seen;
  for (const RatePoint& p : points) {
    if (!(p.n > 1.0) || !std::isfinite(p.n)) {
      return absl::InvalidArgumentError(
          text::Cat("rate fit needs n > 1, got ", p.n));
    }
    if (!(p.err > 0.0) || !std::isfinite(p.err)) {
      return absl::InvalidArgumentError(text::Cat(
          "rate fit needs positive errors, got ", p.err, " at n=", p.n));
    }
    if (!seen.insert(p.n).second) {
      return absl::InvalidArgumentError(
          text::Cat("duplicate n=", p.n, " in rate fit"));
    }
  }

  const Eigen::Index rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd target(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double ln_n = std::log(points[static_cast<size_t>(i)].n);
    design(i, 0) = 1.0;
    design(i, 1) = std::log(ln_n);
    design(i, 2) = -ln_n;
    target(i) = std::log(points[static_cast<size_t>(i)].err);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < 3) {
    return absl::FailedPreconditionError(
        "rate fit design matrix is singular");
  }
  const Eigen::Vector3d coef = qr.solve(target);

  RateFit fit;
  fit.c = std::exp(coef(0));
  fit.b = coef(1);
  fit.a = coef(2);
  if (fit.a > 0.0) fit.alpha_hat = 1.0 / (2.0 * fit.a);
  const Eigen::VectorXd resid = target - design * coef;
  fit.residual = std::sqrt(resid.squaredNorm() / static_cast<double>(rows));
  return fit;
}

}  // namespace ldpmin
