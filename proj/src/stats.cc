// src/stats.cc

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

#include "avsr/stats.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "avsr/error.h"
#include "avsr/util.h"

namespace avsr {

namespace {

void CheckPair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::kLengthMismatch,
                "correlation inputs differ in length: " +
                    std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()));
  if (x.size() < 3)
    throw Error(ErrorCode::kInvalidArgument,
                "correlation needs at least 3 pairs, got " +
                    std::to_string(x.size()));
}

// Deviations from the mean; kConstantInput when all values are equal.
std::vector<double> Centered(std::span<const double> v) {
  long double mean = 0.0L;
  for (double a : v) mean += a;
  mean /= v.size();
  std::vector<double> d(v.size());
  bool constant = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    d[i] = static_cast<double>(v[i] - mean);
    if (v[i] != v[0]) constant = false;
  }
  if (constant)
    throw Error(ErrorCode::kConstantInput, "correlation input is constant");
  return d;
}

double CenteredR(const std::vector<double> &dx, const std::vector<double> &dy) {
  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    sxy += static_cast<long double>(dx[i]) * dy[i];
    sxx += static_cast<long double>(dx[i]) * dx[i];
    syy += static_cast<long double>(dy[i]) * dy[i];
  }
  double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
  return std::clamp(r, -1.0, 1.0);
}

// Continued fraction for I_x(a, b) (modified Lentz).
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double Pearson(std::span<const double> x, std::span<const double> y) {
  CheckPair(x, y);
  return CenteredR(Centered(x), Centered(y));
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // The fraction converges fast for x < (a + 1) / (a + b + 2); use the
  // symmetry I_x(a, b) = 1 - I_{1-x}(b, a) on the other side.
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * BetaContinuedFraction(a, b, x) / a;
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

PValue PValueForR(double r, int n) {
  if (n < 3)
    throw Error(ErrorCode::kInvalidArgument, "p-value needs n >= 3");
  if (!(r >= -1.0 && r <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "r must lie in [-1, 1]");
  if (std::fabs(r) == 1.0) return {0.0, true};
  const double df = n - 2;
  const double t2 = r * r * df / (1.0 - r * r);
  double p = RegularizedIncompleteBeta(df / 2.0, 0.5, df / (df + t2));
  return {std::clamp(p, 0.0, 1.0), false};
}

double PermutationP(std::span<const double> x, std::span<const double> y,
                    int iterations, std::uint64_t seed, int jobs) {
  if (iterations < 1000)
    throw Error(ErrorCode::kInvalidArgument,
                "permutation test needs at least 1000 iterations");
  CheckPair(x, y);
  const std::vector<double> dx = Centered(x);
  const std::vector<double> dy = Centered(y);
  const double observed = std::fabs(CenteredR(dx, dy));
  // Ties in |r| must count as "at least as extreme" despite rounding.
  const double threshold = observed - 1e-12;

  constexpr int kBatch = 1000;
  const int batches = (iterations + kBatch - 1) / kBatch;
  std::vector<long long> hits(batches, 0);
  ParallelFor(batches, jobs, [&](std::size_t b) {
    std::mt19937_64 rng(MixSeed(seed, b));
    std::vector<double> perm = dy;
    const int count = std::min(kBatch, iterations - int(b) * kBatch);
    long long k = 0;
    for (int it = 0; it < count; ++it) {
      // Fisher-Yates with an explicit draw so the sequence is fixed by rng.
      for (std::size_t i = perm.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(perm[i], perm[pick(rng)]);
      }
      if (std::fabs(CenteredR(dx, perm)) >= threshold) ++k;
    }
    hits[b] = k;
  });
  long long k = std::accumulate(hits.begin(), hits.end(), 0LL);
  return static_cast<double>(k + 1) / static_cast<double>(iterations + 1);
}

std::string Stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  return "";
}

std::string FormatCorrelation(double r, double p) {
  return FormatFixed(r, 3) + Stars(p);
}

}  // namespace avsr
