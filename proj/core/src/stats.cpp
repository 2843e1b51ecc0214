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

#include "stanceshift/stats.hpp"

#include <cmath>
#include <limits>

#include "stanceshift/common.hpp"

namespace stanceshift::stats {
namespace {

constexpr int kMaxIterations = 500;
constexpr double kEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) (modified Lentz). Converges rapidly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
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
    if (std::abs(delta - 1.0) < kEpsilon) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

// x^a (1-x)^b / (a B(a, b)), in log space.
double front_factor(double x, double a, double b) {
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta) / a;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta needs a, b > 0");
  if (std::isnan(x) || x < 0.0 || x > 1.0) throw Error("incomplete beta needs 0 <= x <= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front_factor(x, a, b) * beta_continued_fraction(x, a, b);
  }
  return 1.0 - front_factor(1.0 - x, b, a) * beta_continued_fraction(1.0 - x, b, a);
}

double f_cdf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw Error("f_cdf needs positive degrees of freedom");
  if (std::isnan(f)) throw Error("f_cdf: NaN statistic");
  if (f <= 0.0) return 0.0;
  if (std::isinf(f)) return 1.0;
  const double x = d1 * f / (d1 * f + d2);
  return regularized_incomplete_beta(x, d1 / 2.0, d2 / 2.0);
}

double f_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw Error("f_sf needs positive degrees of freedom");
  if (std::isnan(f)) throw Error("f_sf: NaN statistic");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  // 1 - I_x(a, b) = I_{1-x}(b, a) with 1 - x = d2 / (d1 f + d2).
  const double y = d2 / (d1 * f + d2);
  return regularized_incomplete_beta(y, d2 / 2.0, d1 / 2.0);
}

OlsFit ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
  if (design.rows() != response.size()) throw Error("ols: dimension mismatch");
  if (design.rows() < design.cols()) throw Error("ols: fewer rows than columns");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  OlsFit fit;
  fit.rank = qr.rank();
  fit.full_rank = fit.rank == design.cols();
  fit.coefficients = qr.solve(response);
  fit.residuals = response - design * fit.coefficients;
  fit.rss = fit.residuals.squaredNorm();
  return fit;
}

}  // namespace stanceshift::stats
