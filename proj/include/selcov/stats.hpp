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

#pragma once

#include <cstdint>

#include <Eigen/Core>

namespace selcov::stats {

/// Regularized incomplete beta function I_x(a, b), a > 0, b > 0, x in [0, 1].
/// Continued-fraction evaluation (modified Lentz) with the symmetry switch at
/// x > (a+1)/(a+b+2); absolute error <= 1e-12. Non-convergence after 300
/// iterations is a hard NoConvergence error.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided Student-t tail probability, p = I_{df/(df+t^2)}(df/2, 1/2).
/// p(0, df) == 1 exactly; even in t. Requires df > 0.
double student_t_two_sided_p(double t, double df);

struct RegressionResult {
  double slope = 0.0;      // response units per predictor unit
  double intercept = 0.0;
  double se_slope = 0.0;
  double t_stat = 0.0;
  std::int64_t df = 0;     // n - 2
  double p_value = 1.0;
  std::int64_t n = 0;
  bool degenerate_fit = false;  // residuals exactly zero
};

/// Ordinary least squares of ys on xs with slope significance. Needs n >= 3
/// and non-constant xs. A perfect fit sets se_slope = 0 and the degenerate
/// flag; its p is 0 for a non-zero slope and 1 for a flat one.
RegressionResult linear_regression(Eigen::Ref<const Eigen::VectorXd> xs,
                                   Eigen::Ref<const Eigen::VectorXd> ys);

struct WelchResult {
  double mean_diff = 0.0;  // mean(a) - mean(b)
  double t_stat = 0.0;
  double df = 0.0;         // Welch-Satterthwaite, non-integer
  double p_value = 1.0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
};

/// Welch's two-sample t-test (unequal variances), two-sided p. Both groups
/// need >= 2 points; two constant groups with unequal means is ZeroVariance.
WelchResult welch_t_test(Eigen::Ref<const Eigen::VectorXd> a,
                         Eigen::Ref<const Eigen::VectorXd> b);

}  // namespace selcov::stats
