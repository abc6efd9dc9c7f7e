// avsr/gaincurve.h

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

// WER-vs-SNR curves and the effective SNR gain of an audio-visual system over
// an audio-only reference: the SNR distance between the reference point and
// the point where the audio-visual curve falls to the audio-only WER
// measured at that reference.

#ifndef AVSR_GAINCURVE_H_
#define AVSR_GAINCURVE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace avsr {

struct CurvePoint {
  double snr_db;
  double wer;  // percent

  friend bool operator==(const CurvePoint &, const CurvePoint &) = default;
};

/// Immutable WER curve: SNR strictly increasing, WER in [0, 100], at least
/// two points.
class WerCurve {
 public:
  /// Throws kInvalidCurve when an invariant is violated.
  WerCurve(std::vector<CurvePoint> points, std::string label = {});

  const std::vector<CurvePoint> &points() const { return points_; }
  const std::string &label() const { return label_; }
  double min_snr() const { return points_.front().snr_db; }
  double max_snr() const { return points_.back().snr_db; }

  /// Piecewise-linear WER at `snr`; exact at sample points. Throws
  /// kOutOfRange outside [min_snr, max_snr].
  double Interpolate(double snr) const;

 private:
  std::vector<CurvePoint> points_;
  std::string label_;
};

struct GainResult {
  double gain_db = 0.0;
  double ref_snr_db = 0.0;
  double ref_wer = 0.0;
  /// SNR where the AV curve reaches ref_wer; for bounded results the AV
  /// curve's lowest SNR.
  double crossing_snr_db = 0.0;
  /// The AV curve never rises above ref_wer in the measured range, so the
  /// true gain is at least gain_db.
  bool bounded = false;
};

/// ref_wer = ao(ref_snr). The crossing is the largest SNR at which av equals
/// ref_wer while av is at or above ref_wer just to its left. Throws
/// kRefOutOfRange when ref_snr is outside ao's range and kNoCrossing when av
/// never comes down to ref_wer.
GainResult EffectiveSnrGain(const WerCurve &ao, const WerCurve &av,
                            double ref_snr = 0.0);

struct SystemCurves {
  std::string system;
  std::string dataset;
  WerCurve ao;
  WerCurve av;
};

struct GainCell {
  std::string system;
  std::string dataset;
  double ref_snr_db = 0.0;
  std::optional<GainResult> result;
  /// Set when result is empty: the error name and message.
  std::string error;
};

/// One cell per system x ref_snr, in input order. Per-pair failures become
/// cells without a result instead of aborting the report.
std::vector<GainCell> GainReport(std::span<const SystemCurves> systems,
                                 std::span<const double> ref_snrs);

/// `snr_db,wer_percent` rows; a `# label: NAME` comment sets the label and a
/// non-numeric first row is treated as a header.
WerCurve ParseCurveCsv(std::string_view text, const std::string &origin);
WerCurve ReadCurveCsv(const std::filesystem::path &path);
std::string CurveCsv(const WerCurve &curve);

}  // namespace avsr

#endif  // AVSR_GAINCURVE_H_
