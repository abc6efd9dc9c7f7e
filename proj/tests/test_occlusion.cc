// tests/test_occlusion.cc

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
#include <cstdio>
#include <random>

#include "doctest.h"
#include "oracles.h"

#include "avsr/error.h"
#include "avsr/occlusion.h"

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

WordSpan Span(const std::string &w, double a, double b) {
  return {"u1", Token(w), a, b};
}

Image Noise(int w, int h, int ch, std::uint32_t seed) {
  Image im{w, h, ch, {}};
  std::mt19937 rng(seed);
  for (int i = 0; i < w * h * ch; ++i) im.pixels.push_back(rng() & 0xff);
  return im;
}

const char *kShortTextGrid = R"(File type = "ooTextFile"
Object class = "TextGrid"

0
0.5
<exists>
1
"IntervalTier"
"words"
0
0.5
3
0
0.12
"the"
0.12
0.30
""
0.30
0.5
"cat's"
)";

}  // namespace

TEST_CASE("ctm") {
  auto set = ParseCtm("u1 1 0.00 0.12 THE\n", "mem");
  REQUIRE(set.at("u1").size() == 1);
  const auto &s = set.at("u1")[0];
  CHECK(s.utt_id == "u1");
  CHECK(s.word.text() == "THE");
  CHECK(s.t_start == 0.0);
  CHECK(s.t_end == doctest::Approx(0.12));
  CHECK(ParseCtm("", "mem").empty());
  CHECK(CodeOf([] { ParseCtm("u1 1 0.0 0.2 A\nu1 1 0.1 0.2 B\n", "mem"); }) ==
        ErrorCode::kOverlapDetected);
  try {
    ParseCtm(";; comment\nu1 1 0.0 0.2 A\nu1 1 zero 0.2 B\n", "f.ctm");
    FAIL("expected MalformedLine");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kMalformedLine);
    CHECK(e.line() == 3);
  }
  auto six = ParseCtm("u2 1 0.5 0.1 b 0.93\nu2 1 0.0 0.1 a\n", "mem");
  REQUIRE(six.at("u2").size() == 2);
  CHECK(six.at("u2")[0].word.text() == "A");  // sorted by time, normalized
}

TEST_CASE("textgrid") {
  auto set = ParseTextGrid(kShortTextGrid, "utt");
  REQUIRE(set.at("utt").size() == 2);
  CHECK(set.at("utt")[0].word.text() == "THE");
  CHECK(set.at("utt")[1].word.text() == "CAT'S");
  CHECK(CodeOf([] { ParseTextGrid(kShortTextGrid, "utt", "phones"); }) ==
        ErrorCode::kTierNotFound);
  CHECK(CodeOf([] { ParseTextGrid("garbage", "utt"); }) != ErrorCode::kIo);

  std::vector<WordSpan> one{Span("THE", 0.0, 0.12)};
  auto one_back = ParseTextGrid(WriteTextGrid(one), "u1");
  CHECK(one_back.at("u1").size() == 1);
}

TEST_CASE("textgrid round trip") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> gap(0.0, 0.2), dur(0.01, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<WordSpan> spans;
    double t = gap(rng);
    int n = 1 + trial % 7;
    for (int i = 0; i < n; ++i) {
      double d = std::round(dur(rng) * 1000) / 1000;
      spans.push_back({"u1", Token("W" + std::to_string(i)), t, t + d});
      t = t + d + (i % 2 ? 0.0 : std::round(gap(rng) * 1000) / 1000);
    }
    auto back = ParseTextGrid(WriteTextGrid(spans), "u1").at("u1");
    REQUIRE(back.size() == spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
      CHECK(back[i].word == spans[i].word);
      CHECK(back[i].t_start == spans[i].t_start);
      CHECK(back[i].t_end == spans[i].t_end);
    }
  }
}

TEST_CASE("word frames") {
  CHECK(WordFrames(Span("A", 0.00, 0.12), 25) == FrameWindow{0, 3});
  CHECK(WordFrames(Span("A", 0.40, 0.52), 25) == FrameWindow{10, 13});
  CHECK(WordFrames(Span("A", 0.40, 0.44), 25) == FrameWindow{10, 11});
  CHECK(WordFrames(Span("A", 0.41, 0.41), 25).size() == 1);
}

TEST_CASE("occlusion window rule") {
  CHECK(!OcclusionWindow(2, OcclusionPosition::kInitial));
  CHECK(*OcclusionWindow(9, OcclusionPosition::kInitial) == FrameWindow{0, 3});
  CHECK(*OcclusionWindow(9, OcclusionPosition::kMiddle) == FrameWindow{3, 6});
  CHECK(*OcclusionWindow(3, OcclusionPosition::kInitial) == FrameWindow{0, 1});
  CHECK(*OcclusionWindow(3, OcclusionPosition::kMiddle) == FrameWindow{1, 2});
  for (int n = 1; n <= 100; ++n) {
    for (auto pos : {OcclusionPosition::kInitial, OcclusionPosition::kMiddle}) {
      auto w = OcclusionWindow(n, pos);
      if (n < 3) {
        CHECK(!w);
        continue;
      }
      REQUIRE(w);
      CHECK(w->size() == std::max(1, static_cast<int>(std::lround(n / 3.0))));
      CHECK(w->start_frame >= 0);
      CHECK(w->end_frame <= n);
      if (pos == OcclusionPosition::kInitial) CHECK(w->start_frame == 0);
      else CHECK(std::fabs((w->start_frame + w->end_frame) / 2.0 - n / 2.0) <= 1.0);
    }
  }
}

TEST_CASE("plan") {
  std::vector<WordSpan> nine{Span("A", 10 / 25.0, 19 / 25.0)};
  auto m = Plan("u1", nine, 25, OcclusionPosition::kMiddle, std::nullopt,
                FillMode::kSolidGray);
  REQUIRE(m.windows.size() == 1);
  CHECK(m.windows[0].window == FrameWindow{13, 16});
  CHECK(m.windows[0].word_frames == FrameWindow{10, 19});

  std::vector<WordSpan> short_words{Span("A", 0.0, 0.08), Span("B", 0.08, 0.12)};
  auto s = Plan("u1", short_words, 25, OcclusionPosition::kInitial, std::nullopt,
                FillMode::kSolidGray);
  CHECK(s.windows.empty());
  CHECK(s.skipped.size() == 2);

  std::vector<WordSpan> adjacent{Span("A", 0.0, 0.2), Span("B", 0.2, 0.44)};
  auto a = Plan("u1", adjacent, 25, OcclusionPosition::kMiddle, std::nullopt,
                FillMode::kSolidGray);
  REQUIRE(a.windows.size() == 2);
  CHECK(a.windows[0].window.end_frame <= a.windows[1].window.start_frame);
}

TEST_CASE("manifest json round trip") {
  std::vector<WordSpan> spans{Span("A", 0.0, 0.2), Span("B", 0.2, 0.24),
                              Span("C", 0.3, 0.7)};
  std::vector<OcclusionManifest> ms{
      Plan("u1", spans, 25, OcclusionPosition::kInitial, Region{1, 2, 3, 4},
           FillMode::kBlur),
      Plan("u2", spans, 30, OcclusionPosition::kMiddle, std::nullopt,
           FillMode::kFrameMean)};
  auto text = ManifestJson(ms);
  CHECK(text.find("\"schema_version\": 1") != std::string::npos);
  auto back = ParseManifestJson(text, "mem");
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].utt_id == ms[i].utt_id);
    CHECK(back[i].fps == ms[i].fps);
    CHECK(back[i].position == ms[i].position);
    CHECK(back[i].region == ms[i].region);
    CHECK(back[i].fill == ms[i].fill);
    REQUIRE(back[i].windows.size() == ms[i].windows.size());
    for (std::size_t k = 0; k < ms[i].windows.size(); ++k)
      CHECK(back[i].windows[k].window == ms[i].windows[k].window);
    CHECK(back[i].skipped.size() == ms[i].skipped.size());
  }
  CHECK(ManifestJson(back) == text);
  CHECK_THROWS_AS(ParseManifestJson(R"({"schema_version": 99, "utterances": []})", "m"),
                  Error);
}

TEST_CASE("apply occlusion") {
  std::vector<Image> frames;
  for (int f = 0; f < 12; ++f) frames.push_back(Noise(6, 5, 3, f));
  OcclusionManifest none;
  none.utt_id = "u";
  CHECK(ApplyOcclusion(frames, none) == frames);

  std::vector<WordSpan> spans{Span("A", 0.0, 9 / 25.0)};
  auto m = Plan("u", spans, 25, OcclusionPosition::kMiddle, std::nullopt,
                FillMode::kSolidGray);
  auto out = ApplyOcclusion(frames, m, 3);
  for (int f = 0; f < 12; ++f) {
    bool inside = f >= 3 && f < 6;
    if (inside)
      for (auto v : out[f].pixels) CHECK(v == 128);
    else
      CHECK(out[f] == frames[f]);
  }

  m.fill = FillMode::kFrameMean;
  m.region = Region{1, 1, 3, 2};
  out = ApplyOcclusion(frames, m);
  for (int c = 0; c < 3; ++c) {
    double sum = 0;
    for (int y = 1; y < 3; ++y)
      for (int x = 1; x < 4; ++x) sum += frames[4].at(x, y, c);
    double mean = sum / 6.0;
    for (int y = 1; y < 3; ++y)
      for (int x = 1; x < 4; ++x) CHECK(std::fabs(out[4].at(x, y, c) - mean) <= 1.0);
    CHECK(out[4].at(0, 0, c) == frames[4].at(0, 0, c));
  }

  m.fill = FillMode::kBlur;
  m.region = std::nullopt;
  Image flat{6, 5, 1, std::vector<std::uint8_t>(30, 77)};
  std::vector<Image> flats(12, flat);
  CHECK(ApplyOcclusion(flats, m) == flats);  // blurring a flat image is a no-op

  m.region = Region{4, 4, 5, 5};
  CHECK(CodeOf([&] { ApplyOcclusion(frames, m); }) == ErrorCode::kRegionOutOfBounds);
  m.region = std::nullopt;
  std::vector<Image> few(frames.begin(), frames.begin() + 4);
  CHECK(CodeOf([&] { ApplyOcclusion(few, m); }) == ErrorCode::kFrameIndexOutOfRange);
}

TEST_CASE("region and names") {
  CHECK(!ParseRegion("full-frame"));
  CHECK(*ParseRegion("1,2,3,4") == Region{1, 2, 3, 4});
  CHECK_THROWS_AS(ParseRegion("1,2,3"), Error);
  CHECK(ParseFill(FillName(FillMode::kFrameMean)) == FillMode::kFrameMean);
  CHECK(ParsePosition(PositionName(OcclusionPosition::kMiddle)) ==
        OcclusionPosition::kMiddle);
}

TEST_CASE("png frames") {
  auto dir = oracle::TempDir("png");
  std::vector<Image> frames{Noise(7, 4, 3, 1), Noise(7, 4, 3, 2), Noise(7, 4, 3, 3)};
  char name[32];
  for (int i = 0; i < 3; ++i) {
    std::snprintf(name, sizeof(name), "%06d.png", i + 1);
    WritePng(dir / name, frames[i]);
  }
  auto paths = ListFrames(dir);
  REQUIRE(paths.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(ReadPng(paths[i]) == frames[i]);
  auto gray = Noise(5, 5, 1, 9);
  WritePng(dir / "g" / "000000.png", gray);
  CHECK(ReadPng(dir / "g" / "000000.png") == gray);
  std::filesystem::remove(dir / "000002.png");
  CHECK_THROWS_AS(ListFrames(dir), Error);
}

TEST_CASE("solid gray fill is idempotent") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> len(1, 40);
  for (int t = 0; t < 30; ++t) {
    std::vector<WordSpan> words;
    int frame = 1;
    for (int w = 0; w < 4; ++w) {
      int n = len(rng);
      words.push_back(Span("W" + std::to_string(w), frame / 25.0, (frame + n) / 25.0));
      frame += n + 1;
    }
    std::vector<Image> frames;
    for (int f = 0; f < frame + 2; ++f) frames.push_back(Noise(4, 3, 3, rng()));
    for (auto pos : {OcclusionPosition::kInitial, OcclusionPosition::kMiddle}) {
      auto m = Plan("u1", words, 25, pos, std::nullopt, FillMode::kSolidGray);
      auto once = ApplyOcclusion(frames, m);
      CHECK(ApplyOcclusion(once, m) == once);
    }
  }
}
