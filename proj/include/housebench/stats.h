/*
 * Copyright 2026 The housebench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HOUSEBENCH_STATS_H_
#define HOUSEBENCH_STATS_H_

namespace housebench {

// Standard normal CDF and the two-sided tail probability P(|Z| > |z|).
double NormalCdf(double z);
double NormalTwoSidedP(double z);

// Regularized incomplete beta I_x(a, b), evaluated with the modified Lentz
// continued fraction.
double RegularizedIncompleteBeta(double a, double b, double x);

// Regularized lower/upper incomplete gamma P(a, x) and Q(a, x).
double RegularizedGammaP(double a, double x);
double RegularizedGammaQ(double a, double x);

double StudentTCdf(double t, double df);
// P(|T| > |t|) for T ~ t(df).
double StudentTTwoSidedP(double t, double df);
// Inverse of StudentTCdf by bracketed bisection.
double StudentTQuantile(double p, double df);

// Upper tail P(X > x) for X ~ chi-squared(df).
double ChiSquaredSurvival(double x, double df);

}  // namespace housebench

#endif  // HOUSEBENCH_STATS_H_
