// tests/acceptance.cc

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


// Runs the acceptance checks and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures.h"
#include "oracles.h"

#include "avsr/error.h"
#include "avsr/gaincurve.h"
#include "avsr/mafi.h"
#include "avsr/noisemix.h"
#include "avsr/occlusion.h"
#include "avsr/scoring.h"
#include "avsr/simkit.h"
#include "avsr/stats.h"
#include "avsr/util.h"

using namespace avsr;
namespace fs = std::filesystem;

namespace {

// Collects failed expectations of one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void Note(const std::string &s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    std::string s = notes_;
    for (const auto &f : failures_) s += (s.empty() ? "" : "; ") + ("failed: " + f);
    if (failed_ > static_cast<int>(failures_.size()))
      s += "; " + std::to_string(failed_ - failures_.size()) + " more failures";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::string notes_;
  int failed_ = 0;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0 = no runtime limit
  std::function<void(Check &)> body;
};

std::string F(double v, int d) { return FormatFixed(v, d); }

// 1. Relative-increase replay of the occlusion table.
void RelativeIncreaseReplay(Check &c) {
  struct Row {
    const char *model;
    double none, initial, middle;
    const char *want_i, *want_m;
    double paper_i, paper_m;
  };
  const Row rows[] = {{"AVEC", 15.6, 24.6, 27.0, "57.7", "73.1", 58, 73},
                      {"AV-RelScore", 13.0, 21.5, 21.5, "65.4", "65.4", 65, 65},
                      {"Auto-AVSR", 3.5, 6.1, 5.9, "74.3", "68.6", 70, 70}};
  for (const auto &r : rows) {
    double i = RelativeIncrease(r.none, r.initial);
    double m = RelativeIncrease(r.none, r.middle);
    c.Expect(F(i, 1) == r.want_i, std::string(r.model) + " initial " + F(i, 1));
    c.Expect(F(m, 1) == r.want_m, std::string(r.model) + " middle " + F(m, 1));
    c.Expect(std::fabs(i - r.paper_i) <= 5 && std::fabs(m - r.paper_m) <= 5,
             std::string(r.model) + " far from the stated increase");
    c.Note(std::string(r.model) + " " + F(i, 1) + "%/" + F(m, 1) + "%");
  }
}

// 2. Effective SNR gain recovered from simulated AO/AV pairs.
void GainOracle(Check &c) {
  const auto refs = MakeCorpus(50000, 2000, 10, 2024);
  double worst_fine = 0, worst_coarse = 0;
  for (double shift : {2.3, 2.5, 3.7, 4.0, 4.4, 6.1}) {
    SyntheticRecognizer ao, av;
    av.av_shift_db = shift;
    for (double step : {1.0, 2.5}) {
      auto [a, v] = Sweep(ao, av, refs, SnrGrid(-15, 10, step), 99, 0);
      double err = std::fabs(EffectiveSnrGain(a, v, 0.0).gain_db - shift);
      double tol = step == 1.0 ? 0.2 : 0.75;
      c.Expect(err <= tol, "shift " + F(shift, 1) + " on " + F(step, 1) +
                               " dB grid off by " + F(err, 3));
      (step == 1.0 ? worst_fine : worst_coarse) =
          std::max(step == 1.0 ? worst_fine : worst_coarse, err);
    }
  }
  c.Note("max error " + F(worst_fine, 3) + " dB (1 dB grid), " +
         F(worst_coarse, 3) + " dB (2.5 dB grid)");
}

// 3. Edit-distance counts against exhaustive search.
void WerOracle(Check &c) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> len(0, 8), alpha(1, 4);
  int agree = 0;
  for (int t = 0; t < 1000; ++t) {
    const int k = alpha(rng);
    std::uniform_int_distribution<int> sym(0, k - 1);
    std::vector<std::string> r(len(rng)), h(len(rng));
    for (auto &s : r) s = std::string(1, 'a' + sym(rng));
    for (auto &s : h) s = std::string(1, 'a' + sym(rng));
    TokenSeq rt, ht;
    for (auto &s : r) rt.emplace_back(s);
    for (auto &s : h) ht.emplace_back(s);
    auto a = Align(rt, ht);
    auto o = oracle::ExhaustiveAlign(r, h);
    bool same = a.subs == o.s && a.dels == o.d && a.ins == o.i;
    agree += same;
    c.Expect(same, "pair " + std::to_string(t));
  }
  c.Note(std::to_string(agree) + "/1000 pairs identical");
}

// 4. IWER conserves S + D and ignores insertions.
void IwerConservation(Check &c) {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto refs = MakeCorpus(20000, 500, 12, seed);
    SyntheticRecognizer rec;
    auto hyps = Simulate(refs, rec, -4.0 + 3.0 * seed, seed, 0);
    std::vector<AlignmentResult> al;
    long long s = 0, d = 0;
    for (auto &u : ScoreCorpus(refs, hyps, 0)) {
      s += u.alignment.subs, d += u.alignment.dels;
      al.push_back(std::move(u.alignment));
    }
    long long ts = 0, td = 0;
    for (const auto &w : IwerTable(al, 1)) ts += w.subs, td += w.dels;
    c.Expect(ts == s && td == d, "seed " + std::to_string(seed) + " table " +
                                     std::to_string(ts + td) + " vs corpus " +
                                     std::to_string(s + d));
  }
  // insertion-only errors
  auto refs = MakeCorpus(5000, 100, 10, 4);
  SyntheticRecognizer ins;
  ins.p_sub = 0, ins.p_del = 0, ins.p_ins = 1;
  auto hyps = Simulate(refs, ins, -10.0, 4, 0);
  std::vector<AlignmentResult> al;
  int inserted = 0;
  for (auto &u : ScoreCorpus(refs, hyps, 0)) {
    inserted += u.alignment.ins;
    al.push_back(std::move(u.alignment));
  }
  bool all_zero = true;
  for (const auto &w : IwerTable(al, 1))
    all_zero &= w.subs == 0 && w.dels == 0 && w.iwer == 0.0;
  c.Expect(inserted > 0, "insertion corpus has no insertions");
  c.Expect(all_zero, "insertion-only corpus has nonzero IWER");
  c.Note("insertion-only corpus: " + std::to_string(inserted) + " insertions, all-zero table");
}

// 5. Pink-noise spectrum and mixing accuracy.
void PinkNoise(Check &c) {
  auto noise = GeneratePinkNoise(1 << 17, 16000, 42);
  auto psd = oracle::WelchPsd(noise.samples, 4096);
  double slope = oracle::SlopeDbPerOctave(psd, 4096, 16000, 50, 4000);
  c.Expect(std::fabs(slope + 3.0) <= 0.5, "slope " + F(slope, 3));
  c.Note("slope " + F(slope, 3) + " dB/octave");

  AudioBuffer speech;
  std::mt19937 rng(1);
  std::normal_distribution<double> g(0.0, 0.1);
  for (int i = 0; i < 48000; ++i)
    speech.samples.push_back(0.2 * std::sin(2 * M_PI * 180 * i / 16000.0) *
                                 (1 + std::sin(2 * M_PI * 3 * i / 16000.0)) +
                             0.3 * g(rng) * (i % 8000 < 4000));
  double worst = 0;
  for (double target : {-10.0, -5.0, 0.0, 5.0, 10.0}) {
    auto r = MixAtSnr(speech, noise, {target, 0, PeakPolicy::kRescale});
    // noise recovered from the mixture, powers summed here rather than by the library
    double ps = 0, pn = 0;
    for (std::size_t i = 0; i < speech.samples.size(); ++i) {
      double n = r.mixture.samples[i] / r.mixture_gain - speech.samples[i];
      ps += speech.samples[i] * speech.samples[i];
      pn += n * n;
    }
    double err = std::fabs(10.0 * std::log10(ps / pn) - target);
    worst = std::max(worst, err);
    c.Expect(err <= 0.05, "target " + F(target, 0) + " off by " + F(err, 4));
  }
  c.Note("max mix error " + FormatExact(worst) + " dB");
}

// 6. Occlusion windows for every word length.
void OcclusionSuite(Check &c) {
  std::mt19937 rng(6);
  int windows = 0;
  for (int n = 1; n <= 100; ++n) {
    for (auto pos : {OcclusionPosition::kInitial, OcclusionPosition::kMiddle}) {
      const std::string tag = "n=" + std::to_string(n) + " " +
                              std::string(PositionName(pos));
      auto w = OcclusionWindow(n, pos);
      if (n < 3) {
        c.Expect(!w, tag + " got a window");
      } else {
        c.Expect(w.has_value(), tag + " has no window");
        if (!w) continue;
        ++windows;
        c.Expect(w->size() == std::max(1, int(std::lround(n / 3.0))), tag + " length");
        if (pos == OcclusionPosition::kInitial)
          c.Expect(w->start_frame == 0, tag + " start");
        else
          c.Expect(std::fabs((w->start_frame + w->end_frame) / 2.0 - n / 2.0) <= 1.0,
                   tag + " centre");
      }
      // Apply to a word starting at frame 2 inside a 110-frame clip.
      const int first = 2;
      std::vector<WordSpan> spans{
          {"u", Token("W"), first / 25.0, (first + n) / 25.0}};
      auto m = Plan("u", spans, 25, pos, std::nullopt, FillMode::kSolidGray);
      std::vector<Image> frames;
      for (int f = 0; f < 110; ++f) {
        Image im{3, 2, 1, {}};
        for (int p = 0; p < 6; ++p) im.pixels.push_back(rng() % 100);
        frames.push_back(std::move(im));
      }
      auto out = ApplyOcclusion(frames, m);
      for (int f = 0; f < 110; ++f) {
        bool inside = w && f >= first + w->start_frame && f < first + w->end_frame;
        if (inside)
          c.Expect(out[f].pixels == std::vector<std::uint8_t>(6, 128), tag + " fill");
        else
          c.Expect(out[f] == frames[f], tag + " frame " + std::to_string(f) + " changed");
      }
    }
  }
  c.Note(std::to_string(windows) + " windows checked, untouched frames identical");
}

// 7. Analytic and permutation p-values agree.
void StatsCross(Check &c) {
  std::mt19937 rng(7);
  std::normal_distribution<double> g;
  double worst = 0;
  for (int fixture = 0; fixture < 20; ++fixture) {
    std::vector<double> x, y;
    const double rho = 0.05 * fixture;
    for (int i = 0; i < 30; ++i) x.push_back(g(rng)), y.push_back(g(rng) + rho * x.back());
    double analytic = PValueForR(Pearson(x, y), 30).p;
    double perm = PermutationP(x, y, 100000, fixture, 0);
    worst = std::max(worst, std::fabs(analytic - perm));
    c.Expect(std::fabs(analytic - perm) <= 0.02,
             "fixture " + std::to_string(fixture) + ": " + F(analytic, 4) + " vs " + F(perm, 4));
  }
  double p = PValueForR(0.5, 12).p;
  c.Expect(std::fabs(p - 0.0979) <= 0.0005, "r=0.5 n=12 gives " + F(p, 5));
  c.Expect(Stars(0.001) == "**" && Stars(std::nextafter(0.001, 0.0)) == "***" &&
               Stars(0.01) == "" && Stars(std::nextafter(0.01, 0.0)) == "**",
           "star boundaries");
  c.Note("max |p - p_perm| " + F(worst, 4) + ", r=0.5 n=12 p=" + F(p, 4));
}

// 8. MaFI properties.
void MafiProperties(Check &c) {
  auto lex = Lexicon::Read(fs::path(AVSR_DATA_DIR) / "lexicon.txt");
  int words = 0;
  for (const auto &[word, phones] : lex.entries()) {
    auto w = G2p(Token(word), lex);
    std::vector<std::vector<PhonSegment>> g{w};
    c.Expect(MafiScore(w, g) == 0.0, word + " self score");
    ++words;
  }
  auto bat = G2p(Token("BAT"), lex);
  std::vector<std::vector<PhonSegment>> pat{G2p(Token("PAT"), lex)};
  double s = MafiScore(bat, pat);
  c.Expect(std::fabs(s + (1.0 / 14.0) / 3.0) <= 1e-9, "BAT/PAT " + FormatExact(s));
  // each extra flip inside one segment lowers the score
  int sequences = 0;
  for (const auto &[word, phones] : lex.entries()) {
    auto target = G2p(Token(word), lex);
    for (std::size_t seg = 0; seg < target.size(); ++seg) {
      auto guess = target;
      double prev = 0.0;
      for (int f = 0; f < kNumFeatures; ++f) {
        guess[seg].features[f] = guess[seg].features[f] == 1 ? -1 : 1;
        std::vector<std::vector<PhonSegment>> gs{guess};
        double now = MafiScore(target, gs);
        c.Expect(now < prev, word + " segment " + std::to_string(seg) + " flip " +
                                 std::to_string(f) + " did not lower the score");
        prev = now;
      }
      ++sequences;
    }
  }
  CorrelationResult vo_auto{-0.097, 0, 0.005, Stars(0.005), false};
  CorrelationResult vo_avec{-0.173, 0, 0.0005, Stars(0.0005), false};
  c.Expect(vo_auto.Formatted() == "-0.097**", vo_auto.Formatted());
  c.Expect(vo_avec.Formatted() == "-0.173***", vo_avec.Formatted());
  c.Note(std::to_string(words) + " lexicon words, " + std::to_string(sequences) +
         " flip sequences, BAT/PAT " + F(s, 7) + ", cells " +
         vo_auto.Formatted() + " " + vo_avec.Formatted());
}

// 9. Two CLI runs of the same config produce identical bundles.
void Determinism(Check &c) {
  auto dir = oracle::TempDir("accept_det");
  fixture::WriteSimBundle(dir, 3.7, 6000, SnrGrid(-10, 10, 2.5), 17,
                          "min_count = 3\nmafi.pool_snrs = true\n"
                          "mafi.permutations = 2000\nref_snrs = 0,5\n"
                          "occlusion_wer.SIM.Synth.none = 3.5\n"
                          "occlusion_wer.SIM.Synth.initial = 6.1\n"
                          "occlusion_wer.SIM.Synth.middle = 5.9\n");
  const std::string bin = AVSR_GAUGE_BIN;
  auto run = [&](const std::string &out, int jobs) {
    std::string cmd = "\"" + bin + "\" run --config \"" + (dir / "eval.conf").string() +
                      "\" --out \"" + (dir / out).string() + "\" --seed 5 --jobs " +
                      std::to_string(jobs) + " > /dev/null";
    return std::system(cmd.c_str());
  };
  c.Expect(run("first", 1) == 0, "first run failed");
  c.Expect(run("second", 4) == 0, "second run failed");
  int files = 0;
  for (const auto &e : fs::recursive_directory_iterator(dir / "first")) {
    if (!e.is_regular_file()) continue;
    auto rel = fs::relative(e.path(), dir / "first");
    ++files;
    c.Expect(fs::exists(dir / "second" / rel) &&
                 oracle::Slurp(e.path()) == oracle::Slurp(dir / "second" / rel),
             rel.string() + " differs");
  }
  int second = 0;
  for (const auto &e : fs::recursive_directory_iterator(dir / "second"))
    second += e.is_regular_file();
  c.Expect(files > 0 && files == second, "file sets differ");
  c.Note(std::to_string(files) + " files byte-identical (jobs 1 vs 4)");
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "relative-increase replay", 1, RelativeIncreaseReplay},
      {2, "gain-estimator oracle", 120, GainOracle},
      {3, "WER oracle equivalence", 30, WerOracle},
      {4, "IWER conservation", 0, IwerConservation},
      {5, "pink-noise spectrum and mixing", 10, PinkNoise},
      {6, "occlusion window suite", 0, OcclusionSuite},
      {7, "statistics cross-validation", 60, StatsCross},
      {8, "MaFI properties", 0, MafiProperties},
      {9, "determinism", 0, Determinism},
  };
  int failed = 0;
  for (const auto &cr : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception &e) {
      c.Expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_s > 0)
      c.Expect(secs < cr.budget_s, "took " + F(secs, 1) + " s, budget " + F(cr.budget_s, 0) + " s");
    failed += !c.ok();
    std::cout << (c.ok() ? "PASS" : "FAIL") << "  criterion " << cr.id << ": "
              << cr.name << " (" << F(secs, 2) << " s) " << c.Summary() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
