// Copyright 2026 The stanceshift Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STANCESHIFT_STATS_HPP_
#define STANCESHIFT_STATS_HPP_

#include <Eigen/Dense>

namespace stanceshift::stats {

// Regularized incomplete beta I_x(a, b), evaluated with the Lentz continued
// fraction (switching to 1 - I_{1-x}(b, a) where that converges faster).
// Requires a, b > 0 and 0 <= x <= 1.
double regularized_incomplete_beta(double x, double a, double b);

// CDF of the F(d1, d2) distribution: I_{d1 f / (d1 f + d2)}(d1/2, d2/2).
double f_cdf(double f, double d1, double d2);

// Upper tail 1 - f_cdf, computed without cancellation.
double f_sf(double f, double d1, double d2);

struct OlsFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  Eigen::Index rank = 0;
  bool full_rank = false;
};

// Least squares through a column-pivoting Householder QR. `full_rank` is
// false when the numerical rank falls below the column count.
OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response);

}  // namespace stanceshift::stats

#endif  // STANCESHIFT_STATS_HPP_
