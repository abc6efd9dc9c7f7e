// avsr/report.h

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

#ifndef AVSR_REPORT_H_
#define AVSR_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avsr/gaincurve.h"

namespace avsr {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

enum class TableStyle { kMarkdown, kCsv };

TableStyle ParseTableStyle(std::string_view name);

/// Columns in header order. Throws kRaggedRows when a row's width differs
/// from the header's.
std::string RenderTable(const Table &table, TableStyle style);

/// Inverse of RenderTable(.., kCsv): first record is the header.
Table ParseCsvTable(std::string_view text);

struct PlotOptions {
  int width = 720;
  int height = 450;
  int margin_left = 64;
  int margin_right = 190;  // legend column
  int margin_top = 36;
  int margin_bottom = 56;
  std::optional<double> y_min;  // default 0
  std::optional<double> y_max;  // default: max WER rounded up to a multiple of 10
  std::string title;
};

/// Data-to-pixel mapping of the plot area.
class PlotGeometry {
 public:
  PlotGeometry(const PlotOptions &opts, double x_min, double x_max,
               double y_min, double y_max);

  double MapX(double snr_db) const;
  double MapY(double wer) const;

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  double left() const { return left_; }
  double right() const { return right_; }
  double top() const { return top_; }
  double bottom() const { return bottom_; }

  /// Bounds derived from the curves and options as RenderCurvesSvg uses them.
  static PlotGeometry Fit(const PlotOptions &opts,
                          std::span<const WerCurve> curves,
                          std::span<const GainResult> gains);

 private:
  double x_min_, x_max_, y_min_, y_max_;
  double left_, right_, top_, bottom_;
};

/// WER-vs-SNR figure: one polyline per curve with a legend, axes labelled
/// "SNR (dB)" and "WER (%)", and for each gain a dashed horizontal line at
/// the reference WER plus an arrow from the reference SNR to the crossing
/// labelled with the gain. Throws kEmptyInput without curves.
std::string RenderCurvesSvg(std::span<const WerCurve> curves,
                            std::span<const GainResult> gains,
                            const PlotOptions &opts = {});

std::string XmlEscape(std::string_view s);

}  // namespace avsr

#endif  // AVSR_REPORT_H_
