// avsr/stats.h

// Copyright 2026  The avsr-gauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef AVSR_STATS_H_
#define AVSR_STATS_H_

#include <cstdint>
#include <span>
#include <string>

namespace avsr {

/// Pearson product-moment correlation. Requires equal lengths (kLengthMismatch),
/// n >= 3 (kInvalidArgument) and non-constant inputs (kConstantInput).
double Pearson(std::span<const double> x, std::span<const double> y);

/// Regularized incomplete beta I_x(a, b), by Lentz's continued fraction.
double RegularizedIncompleteBeta(double a, double b, double x);

struct PValue {
  double p = 1.0;
  /// |r| == 1: the t statistic is infinite and p is reported as 0.
  bool degenerate = false;
};

/// Two-tailed p for the null r = 0 from Student's t with n - 2 degrees of
/// freedom: t = r * sqrt((n - 2) / (1 - r^2)), p = I_{df/(df+t^2)}(df/2, 1/2).
PValue PValueForR(double r, int n);

/// Share of shuffles of y whose |r| reaches the observed |r|, add-one
/// smoothed: (k + 1) / (iterations + 1). Shuffles run in fixed batches with
/// per-batch seeds, so the result does not depend on `jobs`.
double PermutationP(std::span<const double> x, std::span<const double> y,
                    int iterations, std::uint64_t seed, int jobs = 1);

/// "***" for p < 0.001, "**" for p < 0.01, "" otherwise.
std::string Stars(double p);

/// r with three decimals followed by its stars, e.g. "-0.097**".
std::string FormatCorrelation(double r, double p);

}  // namespace avsr

#endif  // AVSR_STATS_H_
