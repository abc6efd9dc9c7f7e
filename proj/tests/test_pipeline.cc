// tests/test_pipeline.cc

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


#include "doctest.h"
#include "fixtures.h"
#include "json.hpp"
#include "oracles.h"

#include "avsr/error.h"
#include "avsr/pipeline.h"

using namespace avsr;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

ErrorCode CodeOf(const std::function<void()> &fn, int *line = nullptr) {
  try {
    fn();
  } catch (const Error &e) {
    if (line) *line = e.line();
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kIo;
}

std::vector<double> Grid(double lo, double hi, double step) {
  return SnrGrid(lo, hi, step);
}

}  // namespace

TEST_CASE("config parsing") {
  auto dir = oracle::TempDir("conf");
  oracle::Spit(dir / "r.tsv", "a\tx\n");
  oracle::Spit(dir / "h_-5.tsv", "a\tx\n");
  oracle::Spit(dir / "h_0.tsv", "a\tx\n");
  auto c = ParseEvalConfig(
      "snrs = -5, 0\nrefs.D = r.tsv\nhyp.D.S.ao = h_{snr}.tsv  \n"
      "occlusion_wer.D.S.none = 3.5\nmafi.permutations = 1000\n",
      "e.conf", dir);
  CHECK(c.snrs == std::vector<double>{-5, 0});
  CHECK(c.ref_snrs == std::vector<double>{0});
  REQUIRE(c.hyps.size() == 1);
  CHECK(c.hyps[0].pattern == "h_{snr}.tsv");
  CHECK(c.occlusion.at({"D", "S"}).wers.at("none") == 3.5);
  CHECK(ExpandSnr("x_{snr}_{snr}", -2.5) == "x_-2.5_-2.5");
  CHECK(ExpandSnr("x_{snr}", 0.0) == "x_0");

  int line = 0;
  CHECK(CodeOf([&] { ParseEvalConfig("snrs = 0\nbogus = 1\n", "e", dir); }, &line) ==
        ErrorCode::kConfig);
  CHECK(line == 2);
  CHECK(CodeOf([&] { ParseEvalConfig("refs.D = missing.tsv\n", "e", dir); }, &line) ==
        ErrorCode::kConfig);
  CHECK(line == 1);
  CHECK(CodeOf([&] {
          ParseEvalConfig("snrs = -5,0,5\nrefs.D = r.tsv\nhyp.D.S.ao = h_{snr}.tsv\n", "e", dir);
        }, &line) == ErrorCode::kConfig);  // h_5.tsv is missing
  CHECK(line == 3);
  CHECK(CodeOf([&] { ParseEvalConfig("snrs = 0\nrefs.D = r.tsv\nhyp.D.S.xx = r.tsv\n", "e", dir); }) ==
        ErrorCode::kConfig);
  CHECK(CodeOf([&] { ParseEvalConfig("snrs = 0,-5\n", "e", dir); }) == ErrorCode::kConfig);
  CHECK(CodeOf([&] { ParseEvalConfig("snrs = 0\nsnrs = 1\n", "e", dir); }) == ErrorCode::kConfig);
  CHECK(CodeOf([&] { ParseEvalConfig("hyp.D.S.ao = r.tsv\nsnrs = 0\n", "e", dir); }) ==
        ErrorCode::kConfig);  // no refs.D
  CHECK(CodeOf([] { LoadEvalConfig("/nonexistent/eval.conf"); }) == ErrorCode::kConfig);
}

TEST_CASE("run: identical refs and hyps") {
  auto dir = oracle::TempDir("ident");
  std::string refs = "u1\tthe cat sat\nu2\ton the mat\n";
  oracle::Spit(dir / "refs.tsv", refs);
  for (const char *f : {"ao_-5.tsv", "ao_0.tsv", "ao_5.tsv", "av_-5.tsv", "av_0.tsv", "av_5.tsv"})
    oracle::Spit(dir / f, refs);
  oracle::Spit(dir / "e.conf",
               "snrs = -5,0,5\nref_snrs = 0,5\nrefs.L = refs.tsv\n"
               "hyp.L.M.ao = ao_{snr}.tsv\nhyp.L.M.av = av_{snr}.tsv\n");
  auto cfg = LoadEvalConfig(dir / "e.conf");
  auto res = Run(cfg, dir / "out");
  REQUIRE(res.conditions.size() == 6);
  for (const auto &c : res.conditions) CHECK(c.wer == 0.0);
  REQUIRE(res.gains.size() == 2);
  for (const auto &g : res.gains) {
    // audio-only WER of 0 leaves nothing to match: undefined, never a number
    CHECK(!g.result);
    CHECK(g.error.find("undefined") != std::string::npos);
  }
  auto wer = oracle::ParseCsv(oracle::Slurp(dir / "out" / "wer_table.csv"));
  REQUIRE(wer.size() == 7);
  for (std::size_t i = 1; i < wer.size(); ++i) CHECK(wer[i][4] == "0.0");
  CHECK(fs::exists(dir / "out" / "plots" / "L.svg"));
}

TEST_CASE("run: occlusion fixture") {
  auto dir = oracle::TempDir("occ");
  oracle::Spit(dir / "e.conf",
               "occlusion_wer.LRS2.Auto-AVSR.none = 3.5\n"
               "occlusion_wer.LRS2.Auto-AVSR.initial = 6.1\n"
               "occlusion_wer.LRS2.Auto-AVSR.middle = 5.9\n"
               "occlusion_note.LRS2.Auto-AVSR = around 70% for both\n"
               "occlusion_wer.LRS2.AVEC.none = 15.6\n"
               "occlusion_wer.LRS2.AVEC.initial = 24.6\n"
               "occlusion_wer.LRS2.AVEC.middle = 27.0\n");
  auto res = Run(LoadEvalConfig(dir / "e.conf"), dir / "out");
  auto rows = oracle::ParseCsv(oracle::Slurp(dir / "out" / "occlusion.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][5] == "initial_increase");
  CHECK(rows[1][1] == "AVEC");
  CHECK(rows[1][5] == "57.7%");
  CHECK(rows[1][6] == "73.1%");
  CHECK(rows[2][1] == "Auto-AVSR");
  CHECK(rows[2][5] == "74.3%");
  CHECK(rows[2][6] == "68.6%");
  CHECK(rows[2][7] == "around 70% for both");
}

TEST_CASE("run: simulated bundle recovers the shift") {
  auto dir = oracle::TempDir("sim");
  fixture::WriteSimBundle(dir, 3.7, 50000, Grid(-15, 10, 1), 21,
                          "min_count = 7\nmafi.pool_snrs = true\n");
  auto cfg = LoadEvalConfig(dir / "eval.conf");
  auto res = Run(cfg, dir / "report", 4);
  REQUIRE(res.gains.size() == 1);
  REQUIRE(res.gains[0].result);
  CHECK(std::fabs(res.gains[0].result->gain_db - 3.7) <= 0.2);
  auto rows = oracle::ParseCsv(oracle::Slurp(dir / "report" / "gains.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(std::fabs(std::stod(rows[1][5]) - 3.7) <= 0.2);
  // one correlation per condition plus two pooled rows
  CHECK(res.correlations.size() == 26 * 2 + 2);
  for (const auto &c : res.correlations) CHECK((c.result || !c.error.empty()));

  // every table row is traced
  auto prov = json::parse(oracle::Slurp(dir / "report" / "provenance.json"));
  std::map<std::string, int> traced;
  for (const auto &e : prov["entries"]) {
    traced[e["output"].get<std::string>()]++;
    CHECK(!e["inputs"].empty());
  }
  for (const char *table : {"wer_table.csv", "gains.csv", "correlations.csv"}) {
    auto t = oracle::ParseCsv(oracle::Slurp(dir / "report" / table));
    CHECK(traced[table] == static_cast<int>(t.size()) - 1);
  }
  auto results = json::parse(oracle::Slurp(dir / "report" / "results.json"));
  CHECK(results["conditions"].size() == 52);
  CHECK(fs::exists(dir / "report" / "correlations.json"));
}

TEST_CASE("run: deterministic across jobs") {
  auto dir = oracle::TempDir("det");
  fixture::WriteSimBundle(dir, 2.5, 4000, Grid(-10, 5, 2.5), 8,
                          "mafi.permutations = 2000\nmin_count = 3\n");
  auto cfg = LoadEvalConfig(dir / "eval.conf");
  auto a = Run(cfg, dir / "a", 1);
  auto b = Run(cfg, dir / "b", 6);
  REQUIRE(a.files == b.files);
  for (const auto &f : a.files)
    CHECK_MESSAGE(oracle::Slurp(dir / "a" / f) == oracle::Slurp(dir / "b" / f), f);
}

TEST_CASE("run: data errors carry the file") {
  auto dir = oracle::TempDir("bad");
  oracle::Spit(dir / "refs.tsv", "u1\ta b\n");
  oracle::Spit(dir / "h.tsv", "u1\ta b\nu9\tc\n");
  oracle::Spit(dir / "e.conf", "snrs = 0\nrefs.L = refs.tsv\nhyp.L.M.ao = h.tsv\n");
  try {
    Run(LoadEvalConfig(dir / "e.conf"), dir / "out");
    FAIL("expected MissingReference");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kMissingReference);
    CHECK(e.file() == "h.tsv");
  }
  auto j = json::parse(ErrorJson("ConfigError", "bad", "e.conf", 3));
  CHECK(j["line"] == 3);
  CHECK(j["status"] == "error");
}
