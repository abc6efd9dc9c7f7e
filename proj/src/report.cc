// src/report.cc

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

#include "avsr/report.h"

#include <algorithm>
#include <cmath>

#include "avsr/error.h"
#include "avsr/util.h"

namespace avsr {

TableStyle ParseTableStyle(std::string_view name) {
  if (name == "markdown" || name == "md") return TableStyle::kMarkdown;
  if (name == "csv") return TableStyle::kCsv;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown table style '" + std::string(name) + "'");
}

std::string RenderTable(const Table &table, TableStyle style) {
  for (std::size_t k = 0; k < table.rows.size(); ++k)
    if (table.rows[k].size() != table.header.size())
      throw Error(ErrorCode::kRaggedRows,
                  "row " + std::to_string(k + 1) + " has " +
                      std::to_string(table.rows[k].size()) + " cells, header has " +
                      std::to_string(table.header.size()));
  std::string out;
  if (style == TableStyle::kCsv) {
    out += CsvRow(table.header) + "\n";
    for (const auto &row : table.rows) out += CsvRow(row) + "\n";
    return out;
  }
  auto cell = [](const std::string &s) {
    std::string c;
    for (char ch : s) {
      if (ch == '|') c += '\\';
      c += ch == '\n' ? ' ' : ch;
    }
    return c;
  };
  auto line = [&](const std::vector<std::string> &cells) {
    std::string l = "|";
    for (const auto &c : cells) l += " " + cell(c) + " |";
    return l + "\n";
  };
  out += line(table.header);
  out += "|";
  for (std::size_t k = 0; k < table.header.size(); ++k) out += " --- |";
  out += "\n";
  for (const auto &row : table.rows) out += line(row);
  return out;
}

Table ParseCsvTable(std::string_view text) {
  Table t;
  bool first = true;
  for (const auto &line : SplitLines(text)) {
    if (first) {
      t.header = ParseCsvLine(line);
      first = false;
    } else {
      t.rows.push_back(ParseCsvLine(line));
    }
  }
  return t;
}

std::string XmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

// ---- plotting ----------------------------------------------------------------

PlotGeometry::PlotGeometry(const PlotOptions &opts, double x_min, double x_max,
                           double y_min, double y_max)
    : x_min_(x_min),
      x_max_(x_max),
      y_min_(y_min),
      y_max_(y_max),
      left_(opts.margin_left),
      right_(opts.width - opts.margin_right),
      top_(opts.margin_top),
      bottom_(opts.height - opts.margin_bottom) {
  if (!(x_max_ > x_min_)) x_max_ = x_min_ + 1.0;
  if (!(y_max_ > y_min_)) y_max_ = y_min_ + 1.0;
}

double PlotGeometry::MapX(double snr_db) const {
  return left_ + (snr_db - x_min_) / (x_max_ - x_min_) * (right_ - left_);
}

double PlotGeometry::MapY(double wer) const {
  return bottom_ - (wer - y_min_) / (y_max_ - y_min_) * (bottom_ - top_);
}

PlotGeometry PlotGeometry::Fit(const PlotOptions &opts,
                               std::span<const WerCurve> curves,
                               std::span<const GainResult> gains) {
  double x0 = curves.front().min_snr(), x1 = curves.front().max_snr();
  double wmax = 0.0;
  for (const auto &c : curves) {
    x0 = std::min(x0, c.min_snr());
    x1 = std::max(x1, c.max_snr());
    for (const auto &p : c.points()) wmax = std::max(wmax, p.wer);
  }
  for (const auto &g : gains) {
    x0 = std::min({x0, g.ref_snr_db, g.crossing_snr_db});
    x1 = std::max({x1, g.ref_snr_db, g.crossing_snr_db});
  }
  double y0 = opts.y_min.value_or(0.0);
  double y1 = opts.y_max.value_or(std::max(10.0, std::ceil(wmax / 10.0) * 10.0));
  return PlotGeometry(opts, x0, x1, y0, y1);
}

namespace {

constexpr const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string Px(double v) { return FormatFixed(v, 2); }

// Tick spacing giving roughly 5 to 10 ticks.
double TickStep(double span) {
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

std::string TickLabel(double v) {
  if (std::fabs(v - std::round(v)) < 1e-9) return FormatFixed(v, 0);
  return FormatFixed(v, 1);
}

}  // namespace

std::string RenderCurvesSvg(std::span<const WerCurve> curves,
                            std::span<const GainResult> gains,
                            const PlotOptions &opts) {
  if (curves.empty())
    throw Error(ErrorCode::kEmptyInput, "nothing to plot: no curves");
  const PlotGeometry g = PlotGeometry::Fit(opts, curves, gains);
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(opts.width) + "\" height=\"" +
       std::to_string(opts.height) + "\" viewBox=\"0 0 " +
       std::to_string(opts.width) + " " + std::to_string(opts.height) +
       "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "  <defs>\n    <marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" "
       "refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\">\n"
       "      <path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#000000\"/>\n"
       "    </marker>\n  </defs>\n";
  s += "  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(opts.width) +
       "\" height=\"" + std::to_string(opts.height) + "\" fill=\"#ffffff\"/>\n";
  if (!opts.title.empty())
    s += "  <text class=\"title\" x=\"" + Px((g.left() + g.right()) / 2) +
         "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
         XmlEscape(opts.title) + "</text>\n";

  // Axes, grid and ticks.
  s += "  <g class=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
  s += "    <line x1=\"" + Px(g.left()) + "\" y1=\"" + Px(g.bottom()) +
       "\" x2=\"" + Px(g.right()) + "\" y2=\"" + Px(g.bottom()) + "\"/>\n";
  s += "    <line x1=\"" + Px(g.left()) + "\" y1=\"" + Px(g.top()) + "\" x2=\"" +
       Px(g.left()) + "\" y2=\"" + Px(g.bottom()) + "\"/>\n";
  s += "  </g>\n  <g class=\"ticks\" fill=\"#000000\">\n";
  const double xs = TickStep(g.x_max() - g.x_min());
  for (double v = std::ceil(g.x_min() / xs - 1e-9) * xs; v <= g.x_max() + 1e-9;
       v += xs) {
    s += "    <line x1=\"" + Px(g.MapX(v)) + "\" y1=\"" + Px(g.bottom()) +
         "\" x2=\"" + Px(g.MapX(v)) + "\" y2=\"" + Px(g.bottom() + 5) +
         "\" stroke=\"#000000\"/>\n";
    s += "    <text x=\"" + Px(g.MapX(v)) + "\" y=\"" + Px(g.bottom() + 18) +
         "\" text-anchor=\"middle\">" + TickLabel(v) + "</text>\n";
  }
  const double ys = TickStep(g.y_max() - g.y_min());
  for (double v = std::ceil(g.y_min() / ys - 1e-9) * ys; v <= g.y_max() + 1e-9;
       v += ys) {
    s += "    <line x1=\"" + Px(g.left() - 5) + "\" y1=\"" + Px(g.MapY(v)) +
         "\" x2=\"" + Px(g.left()) + "\" y2=\"" + Px(g.MapY(v)) +
         "\" stroke=\"#000000\"/>\n";
    s += "    <text x=\"" + Px(g.left() - 8) + "\" y=\"" + Px(g.MapY(v) + 4) +
         "\" text-anchor=\"end\">" + TickLabel(v) + "</text>\n";
  }
  s += "  </g>\n";
  s += "  <text class=\"xlabel\" x=\"" + Px((g.left() + g.right()) / 2) +
       "\" y=\"" + Px(opts.height - 14.0) +
       "\" text-anchor=\"middle\">SNR (dB)</text>\n";
  s += "  <text class=\"ylabel\" x=\"16\" y=\"" + Px((g.top() + g.bottom()) / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       Px((g.top() + g.bottom()) / 2) + ")\">WER (%)</text>\n";

  // Curves.
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const char *color = kPalette[k % std::size(kPalette)];
    std::string pts;
    for (const auto &p : curves[k].points()) {
      if (!pts.empty()) pts += ' ';
      pts += Px(g.MapX(p.snr_db)) + "," + Px(g.MapY(p.wer));
    }
    s += "  <polyline class=\"curve\" data-label=\"" +
         XmlEscape(curves[k].label()) + "\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
  }

  // Gain annotations.
  for (const auto &gr : gains) {
    const double y = g.MapY(gr.ref_wer);
    s += "  <line class=\"ref-wer\" x1=\"" + Px(g.left()) + "\" y1=\"" + Px(y) +
         "\" x2=\"" + Px(g.right()) + "\" y2=\"" + Px(y) +
         "\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n";
    const double xa = g.MapX(gr.ref_snr_db), xb = g.MapX(gr.crossing_snr_db);
    s += "  <line class=\"gain\" x1=\"" + Px(xa) + "\" y1=\"" + Px(y) +
         "\" x2=\"" + Px(xb) + "\" y2=\"" + Px(y) +
         "\" stroke=\"#000000\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>\n";
    std::string label = (gr.bounded ? ">= " : "") +
                        FormatFixed(gr.gain_db, 1) + " dB";
    s += "  <text class=\"gain-label\" x=\"" + Px((xa + xb) / 2) + "\" y=\"" +
         Px(y - 6) + "\" text-anchor=\"middle\">" + XmlEscape(label) +
         "</text>\n";
  }

  // Legend.
  s += "  <g class=\"legend\">\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const char *color = kPalette[k % std::size(kPalette)];
    const double ly = g.top() + 8 + 18.0 * k;
    s += "    <line x1=\"" + Px(g.right() + 14) + "\" y1=\"" + Px(ly) +
         "\" x2=\"" + Px(g.right() + 38) + "\" y2=\"" + Px(ly) +
         "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    s += "    <text x=\"" + Px(g.right() + 44) + "\" y=\"" + Px(ly + 4) + "\">" +
         XmlEscape(curves[k].label().empty() ? "curve " + std::to_string(k + 1)
                                             : curves[k].label()) +
         "</text>\n";
  }
  s += "  </g>\n</svg>\n";
  return s;
}

}  // namespace avsr
