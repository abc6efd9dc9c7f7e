// src/gaincurve.cc

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

#include "avsr/gaincurve.h"

#include <algorithm>
#include <cmath>

#include "avsr/error.h"
#include "avsr/util.h"

namespace avsr {

WerCurve::WerCurve(std::vector<CurvePoint> points, std::string label)
    : points_(std::move(points)), label_(std::move(label)) {
  auto bad = [&](const std::string &why) {
    return Error(ErrorCode::kInvalidCurve,
                 (label_.empty() ? std::string("curve") : "curve '" + label_ + "'") +
                     ": " + why);
  };
  if (points_.size() < 2) throw bad("needs at least two points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto &p = points_[i];
    if (!std::isfinite(p.snr_db) || !std::isfinite(p.wer))
      throw bad("non-finite value");
    if (p.wer < 0.0 || p.wer > 100.0) throw bad("WER outside [0, 100]");
    if (i > 0 && !(p.snr_db > points_[i - 1].snr_db))
      throw bad("SNRs must be strictly increasing");
  }
}

double WerCurve::Interpolate(double snr) const {
  if (!(snr >= min_snr() && snr <= max_snr()))
    throw Error(ErrorCode::kOutOfRange,
                "SNR " + FormatExact(snr) + " dB outside curve range [" +
                    FormatExact(min_snr()) + ", " + FormatExact(max_snr()) +
                    "]");
  auto hi = std::lower_bound(
      points_.begin(), points_.end(), snr,
      [](const CurvePoint &p, double s) { return p.snr_db < s; });
  if (hi->snr_db == snr) return hi->wer;
  auto lo = hi - 1;
  double t = (snr - lo->snr_db) / (hi->snr_db - lo->snr_db);
  return lo->wer + t * (hi->wer - lo->wer);
}

GainResult EffectiveSnrGain(const WerCurve &ao, const WerCurve &av,
                            double ref_snr) {
  if (!(ref_snr >= ao.min_snr() && ref_snr <= ao.max_snr()))
    throw Error(ErrorCode::kRefOutOfRange,
                "reference SNR " + FormatExact(ref_snr) +
                    " dB outside the audio-only curve range");
  GainResult g;
  g.ref_snr_db = ref_snr;
  g.ref_wer = ao.Interpolate(ref_snr);
  const double target = g.ref_wer;
  const auto &pts = av.points();

  bool all_at_or_below = std::all_of(
      pts.begin(), pts.end(), [&](const CurvePoint &p) { return p.wer <= target; });
  if (all_at_or_below) {
    g.bounded = true;
    g.crossing_snr_db = av.min_snr();
    g.gain_db = ref_snr - av.min_snr();
    return g;
  }

  // Scan segments from the high-SNR end; the first qualifying point found is
  // the largest-SNR downward crossing.
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    const CurvePoint &a = pts[i], &b = pts[i + 1];
    if (b.wer == target && a.wer >= target) {
      g.crossing_snr_db = b.snr_db;
      g.gain_db = ref_snr - g.crossing_snr_db;
      return g;
    }
    if (a.wer > target && b.wer < target) {
      double t = (a.wer - target) / (a.wer - b.wer);
      g.crossing_snr_db = a.snr_db + t * (b.snr_db - a.snr_db);
      g.gain_db = ref_snr - g.crossing_snr_db;
      return g;
    }
    // The curve's lowest-SNR point has nothing to its left; reaching the
    // target there counts as a crossing.
    if (i == 0 && a.wer == target) {
      g.crossing_snr_db = a.snr_db;
      g.gain_db = ref_snr - g.crossing_snr_db;
      return g;
    }
  }
  throw Error(ErrorCode::kNoCrossing,
              "audio-visual curve '" + av.label() +
                  "' never comes down to the reference WER " +
                  FormatExact(target) + "%");
}

std::vector<GainCell> GainReport(std::span<const SystemCurves> systems,
                                 std::span<const double> ref_snrs) {
  std::vector<GainCell> cells;
  for (const auto &s : systems) {
    for (double ref : ref_snrs) {
      GainCell c{s.system, s.dataset, ref, std::nullopt, {}};
      try {
        c.result = EffectiveSnrGain(s.ao, s.av, ref);
      } catch (const Error &e) {
        c.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
      }
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

WerCurve ParseCurveCsv(std::string_view text, const std::string &origin) {
  std::vector<CurvePoint> pts;
  std::string label;
  int line_no = 0;
  bool first_data = true;
  for (const auto &raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::string_view body = Trim(line.substr(1));
      if (body.rfind("label:", 0) == 0) label = std::string(Trim(body.substr(6)));
      continue;
    }
    auto f = ParseCsvLine(line);
    if (f.size() != 2)
      throw Error(ErrorCode::kMalformedLine, "expected snr_db,wer_percent",
                  origin, line_no);
    auto snr = ParseDouble(f[0]), wer = ParseDouble(f[1]);
    if (!snr || !wer) {
      if (first_data) {
        first_data = false;
        continue;  // header row
      }
      throw Error(ErrorCode::kMalformedLine, "non-numeric curve value", origin,
                  line_no);
    }
    first_data = false;
    pts.push_back({*snr, *wer});
  }
  try {
    return WerCurve(std::move(pts), label);
  } catch (const Error &e) {
    throw Error(e.code(), e.what(), origin, 0);
  }
}

WerCurve ReadCurveCsv(const std::filesystem::path &path) {
  return ParseCurveCsv(ReadFile(path), path.string());
}

std::string CurveCsv(const WerCurve &curve) {
  std::string s;
  if (!curve.label().empty()) s += "# label: " + curve.label() + "\n";
  s += "snr_db,wer_percent\n";
  for (const auto &p : curve.points())
    s += FormatExact(p.snr_db) + "," + FormatExact(p.wer) + "\n";
  return s;
}

}  // namespace avsr
