// src/occlusion.cc

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

#include "avsr/occlusion.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <variant>

#include "json.hpp"

#include "avsr/error.h"
#include "avsr/util.h"

namespace avsr {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Adjacent aligner boundaries computed as start + duration can disagree in
// the last few bits.
constexpr double kTimeTolerance = 1e-6;

void SortAndValidate(AlignmentSet &set) {
  for (auto &[utt, spans] : set) {
    std::stable_sort(spans.begin(), spans.end(),
                     [](const WordSpan &a, const WordSpan &b) {
                       return a.t_start < b.t_start;
                     });
    for (std::size_t i = 1; i < spans.size(); ++i) {
      if (spans[i].t_start < spans[i - 1].t_end - kTimeTolerance)
        throw Error(ErrorCode::kOverlapDetected,
                    "utterance '" + utt + "': word " + std::to_string(i) +
                        " ('" + spans[i].word.text() +
                        "') overlaps the previous word");
    }
  }
}

}  // namespace

OcclusionPosition ParsePosition(std::string_view name) {
  if (name == "initial") return OcclusionPosition::kInitial;
  if (name == "middle") return OcclusionPosition::kMiddle;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown occlusion position '" + std::string(name) + "'");
}

std::string_view PositionName(OcclusionPosition p) {
  return p == OcclusionPosition::kInitial ? "initial" : "middle";
}

FillMode ParseFill(std::string_view name) {
  if (name == "solid-gray") return FillMode::kSolidGray;
  if (name == "frame-mean") return FillMode::kFrameMean;
  if (name == "blur") return FillMode::kBlur;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown fill mode '" + std::string(name) + "'");
}

std::string_view FillName(FillMode f) {
  switch (f) {
    case FillMode::kSolidGray: return "solid-gray";
    case FillMode::kFrameMean: return "frame-mean";
    case FillMode::kBlur: return "blur";
  }
  return "solid-gray";
}

std::optional<Region> ParseRegion(std::string_view text) {
  if (Trim(text) == "full-frame") return std::nullopt;
  auto parts = Split(text, ',');
  if (parts.size() == 4) {
    auto x = ParseInt(parts[0]), y = ParseInt(parts[1]), w = ParseInt(parts[2]),
         h = ParseInt(parts[3]);
    if (x && y && w && h && *x >= 0 && *y >= 0 && *w > 0 && *h > 0)
      return Region{int(*x), int(*y), int(*w), int(*h)};
  }
  throw Error(ErrorCode::kInvalidArgument,
              "region must be 'full-frame' or 'X,Y,W,H', got '" +
                  std::string(text) + "'");
}

// ---- CTM -------------------------------------------------------------------

AlignmentSet ParseCtm(std::string_view text, const std::string &origin) {
  AlignmentSet set;
  int line_no = 0;
  for (const auto &line : SplitLines(text)) {
    ++line_no;
    std::string_view t = Trim(line);
    if (t.empty() || t.rfind(";;", 0) == 0) continue;
    auto f = SplitWhitespace(t);
    auto malformed = [&](const std::string &why) {
      return Error(ErrorCode::kMalformedLine,
                   "line " + std::to_string(line_no) + ": " + why, origin,
                   line_no);
    };
    if (f.size() != 5 && f.size() != 6)
      throw malformed("expected 'utt_id channel start duration word'");
    auto start = ParseDouble(f[2]), dur = ParseDouble(f[3]);
    if (!start || !dur) throw malformed("non-numeric time");
    if (*start < 0.0 || *dur <= 0.0)
      throw malformed("negative start or non-positive duration");
    auto words = Normalize(f[4]);
    if (words.size() != 1) throw malformed("word normalizes to nothing");
    set[f[0]].push_back({f[0], words[0], *start, *start + *dur});
  }
  SortAndValidate(set);
  return set;
}

// ---- TextGrid --------------------------------------------------------------

namespace {

// Praat text files are a stream of numbers and quoted strings decorated with
// labels (`xmin =`, `intervals [3]:`, `<exists>`). The long and short
// formats differ only in the decoration, so both reduce to the same stream.
using TgToken = std::variant<double, std::string>;

std::vector<TgToken> TokenizeTextGrid(std::string_view s) {
  std::vector<TgToken> out;
  if (s.rfind("\xEF\xBB\xBF", 0) == 0) s.remove_prefix(3);
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '"') {
      std::string str;
      ++i;
      while (true) {
        if (i >= s.size())
          throw Error(ErrorCode::kMalformedFile, "unterminated string");
        if (s[i] == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            str += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        str += s[i++];
      }
      out.emplace_back(std::move(str));
    } else if (c == '[') {
      std::size_t close = s.find(']', i);
      i = close == std::string_view::npos ? s.size() : close + 1;
    } else if (c == '!') {
      std::size_t nl = s.find('\n', i);
      i = nl == std::string_view::npos ? s.size() : nl + 1;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
               c == '+' || c == '.') {
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])))
        ++j;
      auto v = ParseDouble(s.substr(i, j - i));
      if (!v)
        throw Error(ErrorCode::kMalformedFile,
                    "bad number '" + std::string(s.substr(i, j - i)) + "'");
      out.emplace_back(*v);
      i = j;
    } else if (std::isspace(static_cast<unsigned char>(c)) || c == '=' ||
               c == ':') {
      ++i;
    } else {
      // Label word such as `xmin`, `tiers?`, `<exists>`, `intervals`.
      while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
             s[i] != '=' && s[i] != '[' && s[i] != '"')
        ++i;
    }
  }
  return out;
}

class TgStream {
 public:
  explicit TgStream(std::vector<TgToken> toks) : toks_(std::move(toks)) {}
  bool done() const { return pos_ >= toks_.size(); }
  double Number() {
    if (done() || !std::holds_alternative<double>(toks_[pos_]))
      throw Error(ErrorCode::kMalformedFile, "TextGrid: expected a number");
    return std::get<double>(toks_[pos_++]);
  }
  std::string String() {
    if (done() || !std::holds_alternative<std::string>(toks_[pos_]))
      throw Error(ErrorCode::kMalformedFile, "TextGrid: expected a string");
    return std::get<std::string>(toks_[pos_++]);
  }
  int Count() {
    double v = Number();
    if (v < 0 || v != std::floor(v) || v > 1e7)
      throw Error(ErrorCode::kMalformedFile, "TextGrid: bad count");
    return static_cast<int>(v);
  }

 private:
  std::vector<TgToken> toks_;
  std::size_t pos_ = 0;
};

bool IsSilenceLabel(std::string_view label) {
  std::string l(Trim(label));
  for (auto &c : l) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return l.empty() || l == "sil" || l == "sp" || l == "spn" || l == "<eps>" ||
         l == "<sil>";
}

}  // namespace

AlignmentSet ParseTextGrid(std::string_view text, const std::string &utt_id,
                           const std::string &tier_name) {
  TgStream in(TokenizeTextGrid(text));
  if (in.String() != "ooTextFile" || in.String() != "TextGrid")
    throw Error(ErrorCode::kMalformedFile, "not a Praat TextGrid text file");
  in.Number();  // xmin
  in.Number();  // xmax
  int n_tiers = in.done() ? 0 : in.Count();
  for (int t = 0; t < n_tiers; ++t) {
    std::string klass = in.String();
    std::string name = in.String();
    in.Number();
    in.Number();
    int n = in.Count();
    if (klass == "IntervalTier") {
      std::vector<WordSpan> spans;
      for (int k = 0; k < n; ++k) {
        double a = in.Number(), b = in.Number();
        std::string label = in.String();
        if (name != tier_name || IsSilenceLabel(label)) continue;
        auto words = Normalize(label);
        if (words.empty()) continue;
        if (!(a >= 0.0 && b > a))
          throw Error(ErrorCode::kMalformedFile,
                      "TextGrid interval with non-positive duration");
        std::string joined;
        for (const auto &w : words) joined += w.text();
        spans.push_back({utt_id, Token(joined), a, b});
      }
      if (name == tier_name) {
        AlignmentSet set;
        if (!spans.empty()) set[utt_id] = std::move(spans);
        SortAndValidate(set);
        return set;
      }
    } else if (klass == "TextTier") {
      for (int k = 0; k < n; ++k) {
        in.Number();
        in.String();
      }
    } else {
      throw Error(ErrorCode::kMalformedFile, "unknown tier class '" + klass + "'");
    }
  }
  throw Error(ErrorCode::kTierNotFound,
              "no interval tier named '" + tier_name + "'");
}

std::string WriteTextGrid(const std::vector<WordSpan> &spans,
                          const std::string &tier_name) {
  struct Interval {
    double a, b;
    std::string text;
  };
  std::vector<Interval> iv;
  double t = 0.0;
  for (const auto &s : spans) {
    if (s.t_start > t) iv.push_back({t, s.t_start, ""});
    iv.push_back({s.t_start, s.t_end, s.word.text()});
    t = s.t_end;
  }
  const double xmax = t;
  std::string o;
  o += "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  o += "xmin = 0 \nxmax = " + FormatExact(xmax) + " \ntiers? <exists> \n";
  o += "size = 1 \nitem []: \n    item [1]:\n";
  o += "        class = \"IntervalTier\" \n";
  o += "        name = \"" + tier_name + "\" \n";
  o += "        xmin = 0 \n        xmax = " + FormatExact(xmax) + " \n";
  o += "        intervals: size = " + std::to_string(iv.size()) + " \n";
  for (std::size_t k = 0; k < iv.size(); ++k) {
    o += "        intervals [" + std::to_string(k + 1) + "]:\n";
    o += "            xmin = " + FormatExact(iv[k].a) + " \n";
    o += "            xmax = " + FormatExact(iv[k].b) + " \n";
    o += "            text = \"" + iv[k].text + "\" \n";
  }
  return o;
}

AlignmentSet ReadAlignment(const fs::path &path, const std::string &tier_name) {
  std::string ext = path.extension().string();
  for (auto &c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::string text = ReadFile(path);
  if (ext == ".textgrid") {
    try {
      return ParseTextGrid(text, path.stem().string(), tier_name);
    } catch (const Error &e) {
      throw Error(e.code(), e.what(), path.string(), 0);
    }
  }
  return ParseCtm(text, path.string());
}

// ---- planning ----------------------------------------------------------------

namespace {

long long SnapFloor(double x) {
  double r = std::round(x);
  return std::fabs(x - r) < 1e-6 ? static_cast<long long>(r)
                                 : static_cast<long long>(std::floor(x));
}

long long SnapCeil(double x) {
  double r = std::round(x);
  return std::fabs(x - r) < 1e-6 ? static_cast<long long>(r)
                                 : static_cast<long long>(std::ceil(x));
}

}  // namespace

FrameWindow WordFrames(const WordSpan &span, double fps) {
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fps must be > 0");
  auto start = SnapFloor(span.t_start * fps);
  auto end = SnapCeil(span.t_end * fps);
  if (end <= start) end = start + 1;
  return {static_cast<int>(start), static_cast<int>(end)};
}

std::optional<FrameWindow> OcclusionWindow(int n_frames,
                                           OcclusionPosition position) {
  if (n_frames < 3) return std::nullopt;
  // n/3 never lands exactly on .5, so half-up rounding is (n + 1) / 3.
  int m = std::max(1, (n_frames + 1) / 3);
  if (position == OcclusionPosition::kInitial) return FrameWindow{0, m};
  int offset = (n_frames - m) / 2;
  return FrameWindow{offset, offset + m};
}

OcclusionManifest Plan(const std::string &utt_id,
                       const std::vector<WordSpan> &spans, double fps,
                       OcclusionPosition position, std::optional<Region> region,
                       FillMode fill) {
  OcclusionManifest m;
  m.utt_id = utt_id;
  m.fps = fps;
  m.position = position;
  m.region = region;
  m.fill = fill;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    FrameWindow word = WordFrames(spans[k], fps);
    auto rel = OcclusionWindow(word.size(), position);
    if (!rel) {
      m.skipped.push_back({int(k), spans[k].word.text(), word,
                           "fewer than 3 frames"});
      continue;
    }
    FrameWindow abs{word.start_frame + rel->start_frame,
                    word.start_frame + rel->end_frame};
    m.windows.push_back({abs, word, int(k), spans[k].word.text()});
  }
  for (std::size_t k = 1; k < m.windows.size(); ++k) {
    if (m.windows[k].window.start_frame < m.windows[k - 1].window.end_frame)
      throw Error(ErrorCode::kOverlapDetected,
                  "utterance '" + utt_id + "': occlusion windows of words " +
                      std::to_string(m.windows[k - 1].word_index) + " and " +
                      std::to_string(m.windows[k].word_index) + " overlap");
  }
  return m;
}

// ---- manifest JSON -----------------------------------------------------------

namespace {

json FrameJson(const FrameWindow &w) {
  return json::array({w.start_frame, w.end_frame});
}

FrameWindow FrameFromJson(const json &j) {
  if (!j.is_array() || j.size() != 2)
    throw Error(ErrorCode::kMalformedFile, "frame window must be [start, end]");
  FrameWindow w{j[0].get<int>(), j[1].get<int>()};
  if (w.start_frame < 0 || w.end_frame <= w.start_frame)
    throw Error(ErrorCode::kMalformedFile, "invalid frame window");
  return w;
}

}  // namespace

std::string ManifestJson(const std::vector<OcclusionManifest> &manifests) {
  json root;
  root["schema_version"] = kManifestSchemaVersion;
  json utts = json::array();
  for (const auto &m : manifests) {
    json u;
    u["utt_id"] = m.utt_id;
    u["fps"] = m.fps;
    u["position"] = PositionName(m.position);
    if (m.region)
      u["region"] = {{"x", m.region->x}, {"y", m.region->y},
                     {"w", m.region->w}, {"h", m.region->h}};
    else
      u["region"] = "full-frame";
    u["fill"] = FillName(m.fill);
    json wins = json::array();
    for (const auto &w : m.windows)
      wins.push_back({{"frames", FrameJson(w.window)},
                      {"word_index", w.word_index},
                      {"word", w.word},
                      {"word_frames", FrameJson(w.word_frames)}});
    u["windows"] = std::move(wins);
    json skipped = json::array();
    for (const auto &s : m.skipped)
      skipped.push_back({{"word_index", s.word_index},
                         {"word", s.word},
                         {"word_frames", FrameJson(s.word_frames)},
                         {"reason", s.reason}});
    u["skipped"] = std::move(skipped);
    utts.push_back(std::move(u));
  }
  root["utterances"] = std::move(utts);
  return root.dump(2) + "\n";
}

std::vector<OcclusionManifest> ParseManifestJson(std::string_view text,
                                                 const std::string &origin) {
  try {
    json root = json::parse(text);
    if (root.value("schema_version", -1) != kManifestSchemaVersion)
      throw Error(ErrorCode::kMalformedFile,
                  "unsupported manifest schema_version");
    std::vector<OcclusionManifest> out;
    for (const auto &u : root.at("utterances")) {
      OcclusionManifest m;
      m.utt_id = u.at("utt_id").get<std::string>();
      m.fps = u.at("fps").get<double>();
      if (!(m.fps > 0.0)) throw Error(ErrorCode::kMalformedFile, "fps must be > 0");
      m.position = ParsePosition(u.at("position").get<std::string>());
      m.fill = ParseFill(u.at("fill").get<std::string>());
      const json &r = u.at("region");
      if (r.is_string()) {
        m.region = ParseRegion(r.get<std::string>());
      } else {
        m.region = Region{r.at("x").get<int>(), r.at("y").get<int>(),
                          r.at("w").get<int>(), r.at("h").get<int>()};
      }
      for (const auto &w : u.at("windows"))
        m.windows.push_back({FrameFromJson(w.at("frames")),
                             FrameFromJson(w.at("word_frames")),
                             w.at("word_index").get<int>(),
                             w.at("word").get<std::string>()});
      for (std::size_t k = 1; k < m.windows.size(); ++k)
        if (m.windows[k].window.start_frame < m.windows[k - 1].window.end_frame)
          throw Error(ErrorCode::kMalformedFile,
                      "manifest windows must be sorted and non-overlapping");
      if (u.contains("skipped"))
        for (const auto &s : u.at("skipped"))
          m.skipped.push_back({s.at("word_index").get<int>(),
                               s.at("word").get<std::string>(),
                               FrameFromJson(s.at("word_frames")),
                               s.at("reason").get<std::string>()});
      out.push_back(std::move(m));
    }
    return out;
  } catch (const Error &e) {
    throw Error(e.code(), e.what(), origin, 0);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kMalformedFile, e.what(), origin, 0);
  }
}

// ---- fills -------------------------------------------------------------------

void FillRegion(Image &frame, const std::optional<Region> &region,
                FillMode fill) {
  Region r = region.value_or(Region{0, 0, frame.width, frame.height});
  if (r.x < 0 || r.y < 0 || r.w <= 0 || r.h <= 0 || r.x + r.w > frame.width ||
      r.y + r.h > frame.height)
    throw Error(ErrorCode::kRegionOutOfBounds,
                "region " + std::to_string(r.x) + "," + std::to_string(r.y) +
                    "," + std::to_string(r.w) + "," + std::to_string(r.h) +
                    " does not fit a " + std::to_string(frame.width) + "x" +
                    std::to_string(frame.height) + " frame");
  const int ch = frame.channels;
  switch (fill) {
    case FillMode::kSolidGray:
      for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x)
          for (int c = 0; c < ch; ++c) frame.at(x, y, c) = 128;
      break;
    case FillMode::kFrameMean: {
      for (int c = 0; c < ch; ++c) {
        std::uint64_t sum = 0;
        for (int y = r.y; y < r.y + r.h; ++y)
          for (int x = r.x; x < r.x + r.w; ++x) sum += frame.at(x, y, c);
        const std::uint64_t area = std::uint64_t(r.w) * r.h;
        auto mean = static_cast<std::uint8_t>((2 * sum + area) / (2 * area));
        for (int y = r.y; y < r.y + r.h; ++y)
          for (int x = r.x; x < r.x + r.w; ++x) frame.at(x, y, c) = mean;
      }
      break;
    }
    case FillMode::kBlur: {
      // Box blur from the original pixels, window clamped to the region.
      const Image src = frame;
      for (int y = r.y; y < r.y + r.h; ++y) {
        int y0 = std::max(r.y, y - kBlurRadius);
        int y1 = std::min(r.y + r.h - 1, y + kBlurRadius);
        for (int x = r.x; x < r.x + r.w; ++x) {
          int x0 = std::max(r.x, x - kBlurRadius);
          int x1 = std::min(r.x + r.w - 1, x + kBlurRadius);
          const std::uint64_t area = std::uint64_t(x1 - x0 + 1) * (y1 - y0 + 1);
          for (int c = 0; c < ch; ++c) {
            std::uint64_t sum = 0;
            for (int yy = y0; yy <= y1; ++yy)
              for (int xx = x0; xx <= x1; ++xx) sum += src.at(xx, yy, c);
            frame.at(x, y, c) =
                static_cast<std::uint8_t>((2 * sum + area) / (2 * area));
          }
        }
      }
      break;
    }
  }
}

std::vector<Image> ApplyOcclusion(std::vector<Image> frames,
                                  const OcclusionManifest &manifest, int jobs) {
  std::vector<int> listed;
  for (const auto &w : manifest.windows) {
    if (w.window.end_frame > static_cast<int>(frames.size()))
      throw Error(ErrorCode::kFrameIndexOutOfRange,
                  "utterance '" + manifest.utt_id + "': window ends at frame " +
                      std::to_string(w.window.end_frame) + " but only " +
                      std::to_string(frames.size()) + " frames exist");
    for (int f = w.window.start_frame; f < w.window.end_frame; ++f)
      listed.push_back(f);
  }
  ParallelFor(listed.size(), jobs, [&](std::size_t k) {
    FillRegion(frames[listed[k]], manifest.region, manifest.fill);
  });
  return frames;
}

// ---- PNG ---------------------------------------------------------------------

Image ReadPng(const fs::path &path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.string().c_str()))
    throw Error(ErrorCode::kBadImage,
                path.string() + ": " + img.message);
  Image out;
  const bool color = (img.format & PNG_FORMAT_FLAG_COLOR) != 0;
  img.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.channels = color ? 3 : 1;
  out.pixels.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw Error(ErrorCode::kBadImage, path.string() + ": " + msg);
  }
  return out;
}

void WritePng(const fs::path &path, const Image &image) {
  if (image.channels != 1 && image.channels != 3)
    throw Error(ErrorCode::kBadImage, "only gray and RGB images are supported");
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.pixels.data(),
                                 0, nullptr))
    throw Error(ErrorCode::kBadImage, path.string() + ": " + img.message);
  std::string buf(size, '\0');
  if (!png_image_write_to_memory(&img, buf.data(), &size, 0,
                                 image.pixels.data(), 0, nullptr))
    throw Error(ErrorCode::kBadImage, path.string() + ": " + img.message);
  buf.resize(size);
  WriteFileAtomic(path, buf);
}

std::vector<fs::path> ListFrames(const fs::path &dir) {
  if (!fs::is_directory(dir))
    throw Error(ErrorCode::kIo, dir.string() + " is not a directory");
  std::vector<std::pair<long long, fs::path>> numbered;
  for (const auto &e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".png") continue;
    auto n = ParseInt(e.path().stem().string());
    if (!n) continue;
    numbered.emplace_back(*n, e.path());
  }
  std::sort(numbered.begin(), numbered.end());
  for (std::size_t k = 1; k < numbered.size(); ++k)
    if (numbered[k].first != numbered[k - 1].first + 1)
      throw Error(ErrorCode::kFrameIndexOutOfRange,
                  dir.string() + ": frame numbering has a gap after " +
                      std::to_string(numbered[k - 1].first));
  std::vector<fs::path> out;
  for (auto &[n, p] : numbered) out.push_back(std::move(p));
  return out;
}

}  // namespace avsr
