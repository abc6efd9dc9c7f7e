// tests/test_gaincurve.cc

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


#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"

#include "avsr/error.h"
#include "avsr/gaincurve.h"
#include "avsr/simkit.h"

using namespace avsr;

namespace {

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

WerCurve Curve(std::vector<CurvePoint> p) { return WerCurve(std::move(p)); }

// WER of a logistic recognizer sampled without simulation noise.
WerCurve Logistic(double shift, double lo, double hi, double step) {
  SyntheticRecognizer rec;
  rec.av_shift_db = shift;
  std::vector<CurvePoint> pts;
  for (double snr : SnrGrid(lo, hi, step))
    pts.push_back({snr, 100.0 * (1.0 - WordAccuracy(rec, snr))});
  return WerCurve(pts);
}

}  // namespace

TEST_CASE("interpolate") {
  auto c = Curve({{-5, 40}, {0, 20}});
  CHECK(c.Interpolate(-2.5) == doctest::Approx(30.0));
  CHECK(c.Interpolate(-5) == 40.0);
  CHECK(c.Interpolate(0) == 20.0);
  auto c3 = Curve({{-5, 40}, {0, 20}, {5, 10}});
  CHECK(c3.Interpolate(2) == doctest::Approx(16.0));
  CHECK(CodeOf([&] { c3.Interpolate(5.5); }) == ErrorCode::kOutOfRange);
  CHECK(CodeOf([&] { c3.Interpolate(-5.01); }) == ErrorCode::kOutOfRange);
}

TEST_CASE("curve validation") {
  CHECK(CodeOf([] { Curve({{0, 10}}); }) == ErrorCode::kInvalidCurve);
  CHECK(CodeOf([] { Curve({{0, 10}, {0, 5}}); }) == ErrorCode::kInvalidCurve);
  CHECK(CodeOf([] { Curve({{1, 10}, {0, 5}}); }) == ErrorCode::kInvalidCurve);
  CHECK(CodeOf([] { Curve({{0, 10}, {1, 101}}); }) == ErrorCode::kInvalidCurve);
  CHECK(CodeOf([] { Curve({{0, NAN}, {1, 1}}); }) == ErrorCode::kInvalidCurve);
}

TEST_CASE("effective snr gain: hand cases") {
  auto ao = Curve({{-5, 40}, {0, 20}, {5, 10}});
  auto self = EffectiveSnrGain(ao, ao, 0.0);
  CHECK(self.gain_db == 0.0);
  CHECK(!self.bounded);

  auto av = Curve({{-5, 25}, {0, 12}, {5, 8}});
  auto g = EffectiveSnrGain(ao, av, 0.0);
  CHECK(g.ref_wer == 20.0);
  double crossing = -5.0 + 5.0 * (25.0 - 20.0) / (25.0 - 12.0);
  CHECK(g.crossing_snr_db == doctest::Approx(crossing));
  CHECK(g.gain_db == doctest::Approx(-crossing));
  CHECK(std::fabs(g.gain_db - 3.08) < 0.005);
  CHECK(!g.bounded);
}

TEST_CASE("effective snr gain: edge cases") {
  auto ao = Curve({{-5, 40}, {0, 20}, {5, 10}});
  CHECK(CodeOf([&] { EffectiveSnrGain(ao, ao, 6.0); }) == ErrorCode::kRefOutOfRange);
  // AV better everywhere: only a lower bound.
  auto good = Curve({{-5, 15}, {0, 5}, {5, 2}});
  auto b = EffectiveSnrGain(ao, good, 0.0);
  CHECK(b.bounded);
  CHECK(b.gain_db == 5.0);
  CHECK(b.crossing_snr_db == -5.0);
  // AV worse everywhere.
  auto bad = Curve({{-5, 60}, {0, 50}, {5, 30}});
  CHECK(CodeOf([&] { EffectiveSnrGain(ao, bad, 0.0); }) == ErrorCode::kNoCrossing);
  // Non-monotone AV: the crossing nearest the high-SNR end is reported.
  auto wiggle = Curve({{-10, 50}, {-5, 10}, {0, 30}, {5, 5}});
  auto w = EffectiveSnrGain(ao, wiggle, 0.0);
  CHECK(w.crossing_snr_db == doctest::Approx(0.0 + 5.0 * (30.0 - 20.0) / 25.0));
  // A crossing exactly on a sample point.
  auto exact = Curve({{-5, 30}, {-2, 20}, {5, 1}});
  CHECK(EffectiveSnrGain(ao, exact, 0.0).crossing_snr_db == -2.0);
}

TEST_CASE("effective snr gain: logistic translates") {
  // AV is AO moved 4 dB to the left; sampled every 2.5 dB.
  auto ao = Logistic(0.0, -12.5, 10, 2.5);
  auto av = Logistic(4.0, -12.5, 10, 2.5);
  auto g = EffectiveSnrGain(ao, av, 0.0);
  CHECK(std::fabs(g.gain_db - 4.0) <= 0.75);
  for (double shift : {2.3, 2.5, 3.7, 4.0, 4.4, 6.1}) {
    auto fine = EffectiveSnrGain(Logistic(0, -15, 10, 1), Logistic(shift, -15, 10, 1), 0.0);
    CHECK(std::fabs(fine.gain_db - shift) <= 0.2);
  }
}

TEST_CASE("gain report") {
  auto c = Curve({{-5, 40}, {0, 20}, {5, 10}, {10, 4}});
  std::vector<SystemCurves> sys{{"S", "D", c, c}};
  std::vector<double> refs{0.0, 10.0};
  auto cells = GainReport(sys, refs);
  REQUIRE(cells.size() == 2);
  for (const auto &cell : cells) {
    REQUIRE(cell.result);
    CHECK(cell.result->gain_db == 0.0);
  }
  std::vector<double> far{20.0};
  auto bad = GainReport(sys, far);
  REQUIRE(bad.size() == 1);
  CHECK(!bad[0].result);
  CHECK(bad[0].error.find("RefOutOfRange") != std::string::npos);
}

TEST_CASE("curve csv") {
  auto c = ParseCurveCsv("# label: AVEC ao\nsnr_db,wer_percent\n-5,40\n0,20.5\n", "mem");
  CHECK(c.label() == "AVEC ao");
  REQUIRE(c.points().size() == 2);
  CHECK(c.points()[1].wer == 20.5);
  auto back = ParseCurveCsv(CurveCsv(c), "mem");
  CHECK(back.points() == c.points());
  CHECK(back.label() == c.label());
  CHECK_THROWS_AS(ParseCurveCsv("snr_db,wer_percent\n-5,x\n0,1\n", "mem"), Error);
}

namespace {

// Random strictly decreasing curve on an integer grid.
WerCurve RandomCurve(std::mt19937 &rng, double lo, double hi) {
  std::uniform_real_distribution<double> drop(0.1, 8.0);
  std::vector<CurvePoint> p;
  double wer = std::uniform_real_distribution<double>(60.0, 95.0)(rng);
  for (double s = lo; s <= hi; s += 1.0) {
    p.push_back({s, wer});
    wer = std::max(0.0, wer - drop(rng) * wer / 60.0);
  }
  return WerCurve(p);
}

WerCurve Shifted(const WerCurve &c, double dx, double wer_scale = 1.0) {
  std::vector<CurvePoint> p;
  for (const auto &q : c.points()) p.push_back({q.snr_db + dx, q.wer * wer_scale});
  return WerCurve(p);
}

}  // namespace

TEST_CASE("gain properties on random curves") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> delta(0.0, 8.0), ref(-5.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    auto c = RandomCurve(rng, -15, 10);
    const double r = ref(rng);
    // shifted copy: the gain is the shift
    const double d = delta(rng);
    auto g = EffectiveSnrGain(c, Shifted(c, -d), r);
    CHECK(std::fabs(g.gain_db - d) <= 1.0);
    CHECK(std::fabs(g.gain_db - d) <= 1e-9);
    // moving both curves and the reference leaves the gain alone
    const double k = std::uniform_int_distribution<int>(-20, 20)(rng);
    auto moved = EffectiveSnrGain(Shifted(c, k), Shifted(c, k - d), r + k);
    CHECK(moved.gain_db == doctest::Approx(g.gain_db).epsilon(1e-12).scale(1.0));
    // so does rescaling the WER axis
    for (double a : {0.5, 0.25, 1.0 / 3.0, 0.9}) {
      auto scaled = EffectiveSnrGain(Shifted(c, 0, a), Shifted(c, -d, a), r);
      if (a == 0.5 || a == 0.25)
        CHECK(scaled.gain_db == g.gain_db);
      else
        CHECK(std::fabs(scaled.gain_db - g.gain_db) <= 1e-9);
    }
    // an AV curve never above AO gives a non-negative gain
    std::vector<CurvePoint> below;
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (const auto &q : c.points()) below.push_back({q.snr_db, q.wer * frac(rng)});
    CHECK(EffectiveSnrGain(c, WerCurve(below), r).gain_db >= 0.0);
  }
}
