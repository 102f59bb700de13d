// Copyright 2026 The selcov Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "selcov/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "selcov/error.hpp"
#include "selcov/numfmt.hpp"

namespace selcov::stats {

namespace {

constexpr int kMaxContinuedFractionIterations = 300;
constexpr double kContinuedFractionTolerance = 1e-14;

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxContinuedFractionIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kContinuedFractionTolerance) return h;
  }
  raise(Errc::no_convergence, "incomplete beta continued fraction did not converge for a=" +
                                  format_double(a) + " b=" + format_double(b) +
                                  " x=" + format_double(x));
}

void require_finite(Eigen::Ref<const Eigen::VectorXd> values, const char* name) {
  if (!values.allFinite()) {
    raise(Errc::domain_error, std::string(name) + " contains NaN or infinity");
  }
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    raise(Errc::domain_error,
          "beta parameters must be positive: a=" + format_double(a) + " b=" + format_double(b));
  }
  if (!(x >= 0.0) || !(x <= 1.0)) {
    raise(Errc::domain_error, "x=" + format_double(x) + " outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  double result;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    result = front * beta_continued_fraction(a, b, x) / a;
  } else {
    result = 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
  }
  return std::clamp(result, 0.0, 1.0);
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0) || !std::isfinite(df)) {
    raise(Errc::domain_error, "df must be positive, got " + format_double(df));
  }
  if (std::isnan(t)) raise(Errc::domain_error, "t is NaN");
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

RegressionResult linear_regression(Eigen::Ref<const Eigen::VectorXd> xs,
                                   Eigen::Ref<const Eigen::VectorXd> ys) {
  const Eigen::Index n = xs.size();
  if (ys.size() != n) {
    raise(Errc::domain_error, "xs and ys sizes differ: " + format_int(n) + " vs " +
                                  format_int(ys.size()));
  }
  if (n < 3) raise(Errc::too_few_points, "regression needs n >= 3, got " + format_int(n));
  require_finite(xs, "xs");
  require_finite(ys, "ys");

  const double x_mean = xs.mean();
  const double y_mean = ys.mean();
  const Eigen::VectorXd dx = xs.array() - x_mean;
  const Eigen::VectorXd dy = ys.array() - y_mean;
  const double sxx = dx.squaredNorm();
  const double sxy = dx.dot(dy);
  const double syy = dy.squaredNorm();

  const double x_scale = std::max(1.0, xs.cwiseAbs().maxCoeff());
  const double degenerate_x_floor =
      static_cast<double>(n) *
      std::pow(8.0 * std::numeric_limits<double>::epsilon() * x_scale, 2);
  if (sxx <= degenerate_x_floor) {
    raise(Errc::degenerate_x, "xs has zero variance");
  }

  RegressionResult result;
  result.n = n;
  result.df = n - 2;
  result.slope = sxy / sxx;
  result.intercept = y_mean - result.slope * x_mean;

  const Eigen::VectorXd residuals = dy - result.slope * dx;
  const double sse = residuals.squaredNorm();

  // A perfect fit has no residual variance to estimate a standard error from.
  if (sse == 0.0 || sse <= 1e-24 * syy) {
    result.degenerate_fit = true;
    result.se_slope = 0.0;
    if (result.slope == 0.0) {
      result.t_stat = 0.0;
      result.p_value = 1.0;
    } else {
      result.t_stat = std::copysign(std::numeric_limits<double>::infinity(), result.slope);
      result.p_value = 0.0;
    }
    return result;
  }

  const double residual_variance = sse / static_cast<double>(n - 2);
  result.se_slope = std::sqrt(residual_variance / sxx);
  result.t_stat = result.slope / result.se_slope;
  result.p_value = student_t_two_sided_p(result.t_stat, static_cast<double>(n - 2));
  return result;
}

WelchResult welch_t_test(Eigen::Ref<const Eigen::VectorXd> a,
                         Eigen::Ref<const Eigen::VectorXd> b) {
  const Eigen::Index n_a = a.size();
  const Eigen::Index n_b = b.size();
  if (n_a < 2 || n_b < 2) {
    raise(Errc::too_few_points,
          "each group needs >= 2 points, got " + format_int(n_a) + " and " + format_int(n_b));
  }
  require_finite(a, "a");
  require_finite(b, "b");

  const double mean_a = a.mean();
  const double mean_b = b.mean();
  const double var_a = (a.array() - mean_a).matrix().squaredNorm() / static_cast<double>(n_a - 1);
  const double var_b = (b.array() - mean_b).matrix().squaredNorm() / static_cast<double>(n_b - 1);

  WelchResult result;
  result.n_a = n_a;
  result.n_b = n_b;
  result.mean_diff = mean_a - mean_b;

  if (var_a == 0.0 && var_b == 0.0) {
    if (result.mean_diff != 0.0) {
      raise(Errc::zero_variance, "both groups constant with unequal means");
    }
    result.t_stat = 0.0;
    result.df = static_cast<double>(n_a + n_b - 2);
    result.p_value = 1.0;
    return result;
  }

  const double va = var_a / static_cast<double>(n_a);
  const double vb = var_b / static_cast<double>(n_b);
  result.t_stat = result.mean_diff / std::sqrt(va + vb);
  result.df = (va + vb) * (va + vb) /
              (va * va / static_cast<double>(n_a - 1) + vb * vb / static_cast<double>(n_b - 1));
  result.p_value = student_t_two_sided_p(result.t_stat, result.df);
  return result;
}

}  // namespace selcov::stats
