// avsr/occlusion.h

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

// Word-timed occlusion of mouth video. Word timestamps from a forced aligner
// (CTM or Praat TextGrid) are mapped to frame windows; a third of each word's
// frames, at its start or its middle, is then covered by a region fill.
// Words shorter than three frames are never touched.

#ifndef AVSR_OCCLUSION_H_
#define AVSR_OCCLUSION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avsr/scoring.h"

namespace avsr {

struct WordSpan {
  std::string utt_id;
  Token word;
  double t_start;  // seconds
  double t_end;    // seconds, exclusive
};

/// Spans keyed by utterance id; each list time-ordered and non-overlapping.
using AlignmentSet = std::map<std::string, std::vector<WordSpan>>;

/// Half-open frame range [start_frame, end_frame).
struct FrameWindow {
  int start_frame = 0;
  int end_frame = 0;

  int size() const { return end_frame - start_frame; }
  friend bool operator==(const FrameWindow &, const FrameWindow &) = default;
};

enum class OcclusionPosition { kInitial, kMiddle };
enum class FillMode { kSolidGray, kFrameMean, kBlur };

OcclusionPosition ParsePosition(std::string_view name);
std::string_view PositionName(OcclusionPosition p);
FillMode ParseFill(std::string_view name);
std::string_view FillName(FillMode f);

/// Pixel rectangle; an empty optional in the manifest means the full frame.
struct Region {
  int x = 0, y = 0, w = 0, h = 0;
  friend bool operator==(const Region &, const Region &) = default;
};

/// Parses `full-frame` (returns nullopt) or `X,Y,W,H`.
std::optional<Region> ParseRegion(std::string_view text);

// ---- alignment input ---------------------------------------------------------

/// CTM lines `utt_id channel start_sec duration_sec word [confidence]`.
/// Blank lines and `;;` comments are skipped. Throws kMalformedLine (with the
/// line number) and kOverlapDetected.
AlignmentSet ParseCtm(std::string_view text, const std::string &origin);

/// Praat TextGrid (long or short text format). Labels are normalized like
/// transcripts; empty and silence labels (sil, sp, spn, <eps>) are skipped.
/// Throws kTierNotFound and kMalformedFile.
AlignmentSet ParseTextGrid(std::string_view text, const std::string &utt_id,
                           const std::string &tier_name = "words");

/// Writes spans of one utterance as a long-format TextGrid with a single
/// interval tier; gaps become empty intervals.
std::string WriteTextGrid(const std::vector<WordSpan> &spans,
                          const std::string &tier_name = "words");

/// Chooses the parser by extension (.TextGrid, otherwise CTM); the TextGrid
/// utterance id is the file stem.
AlignmentSet ReadAlignment(const std::filesystem::path &path,
                           const std::string &tier_name = "words");

// ---- planning ----------------------------------------------------------------

/// [floor(t_start * fps), ceil(t_end * fps)), with products within 1e-6 of
/// an integer snapped to it, and at least one frame.
FrameWindow WordFrames(const WordSpan &span, double fps);

/// Word-relative window covering a third of `n_frames` frames, or nullopt
/// when n_frames < 3. Length m = max(1, round_half_up(n / 3)); initial is
/// [0, m), middle starts at floor((n - m) / 2).
std::optional<FrameWindow> OcclusionWindow(int n_frames,
                                           OcclusionPosition position);

struct PlannedWindow {
  FrameWindow window;  // absolute frame indices
  FrameWindow word_frames;
  int word_index = 0;
  std::string word;
};

struct SkippedWord {
  int word_index = 0;
  std::string word;
  FrameWindow word_frames;
  std::string reason;
};

struct OcclusionManifest {
  std::string utt_id;
  double fps = 25.0;
  OcclusionPosition position = OcclusionPosition::kInitial;
  std::optional<Region> region;  // nullopt = full frame
  FillMode fill = FillMode::kSolidGray;
  std::vector<PlannedWindow> windows;  // sorted, non-overlapping
  std::vector<SkippedWord> skipped;
};

OcclusionManifest Plan(const std::string &utt_id,
                       const std::vector<WordSpan> &spans, double fps,
                       OcclusionPosition position, std::optional<Region> region,
                       FillMode fill);

constexpr int kManifestSchemaVersion = 1;

/// Manifest file: `{"schema_version": 1, "utterances": [...]}`.
std::string ManifestJson(const std::vector<OcclusionManifest> &manifests);
std::vector<OcclusionManifest> ParseManifestJson(std::string_view text,
                                                 const std::string &origin);

// ---- application -------------------------------------------------------------

/// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  std::uint8_t &at(int x, int y, int c) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  friend bool operator==(const Image &, const Image &) = default;
};

/// Box-blur radius used by FillMode::kBlur.
constexpr int kBlurRadius = 7;

/// Fills the region of every frame listed in the manifest. Throws
/// kFrameIndexOutOfRange when a window ends past the last frame and
/// kRegionOutOfBounds when the region does not fit a listed frame.
std::vector<Image> ApplyOcclusion(std::vector<Image> frames,
                                  const OcclusionManifest &manifest,
                                  int jobs = 1);

/// Fills one frame in place.
void FillRegion(Image &frame, const std::optional<Region> &region,
                FillMode fill);

Image ReadPng(const std::filesystem::path &path);
void WritePng(const std::filesystem::path &path, const Image &image);

/// Lists `%06d.png` files of a directory in frame order. Frame numbering
/// must be contiguous from 0 (or from 1; the first file is frame 0).
std::vector<std::filesystem::path> ListFrames(
    const std::filesystem::path &dir);

}  // namespace avsr

#endif  // AVSR_OCCLUSION_H_
