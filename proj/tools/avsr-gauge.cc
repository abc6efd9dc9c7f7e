// tools/avsr-gauge.cc

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

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "json.hpp"

#include "avsr/error.h"
#include "avsr/gaincurve.h"
#include "avsr/mafi.h"
#include "avsr/noisemix.h"
#include "avsr/occlusion.h"
#include "avsr/pipeline.h"
#include "avsr/report.h"
#include "avsr/scoring.h"
#include "avsr/simkit.h"
#include "avsr/stats.h"
#include "avsr/util.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace avsr;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  int jobs = 1;
};

std::string Num(double v) { return FormatExact(v == 0.0 ? 0.0 : v); }

// ---- noise -------------------------------------------------------------------

struct NoiseGenArgs {
  long long samples = 0;
  int rate = 16000;
  std::string out;
};

void NoiseGen(const NoiseGenArgs &a, const Globals &g) {
  if (a.samples <= 0)
    throw Error(ErrorCode::kInvalidArgument, "--samples must be positive");
  if (a.rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "--rate must be positive");
  auto noise = GeneratePinkNoise(a.samples, a.rate, g.seed);
  WriteWav(a.out, noise);
  std::cout << a.out << ": " << a.samples << " samples at " << a.rate
            << " Hz, seed " << g.seed << "\n";
}

struct NoiseMixArgs {
  std::string speech, noise, out, peak = "rescale";
  std::vector<double> snrs;
};

void NoiseMix(const NoiseMixArgs &a, const Globals &g) {
  std::vector<fs::path> inputs;
  if (fs::is_directory(a.speech)) {
    for (const auto &e : fs::directory_iterator(a.speech))
      if (e.is_regular_file() && e.path().extension() == ".wav")
        inputs.push_back(e.path());
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty())
      throw Error(ErrorCode::kIo, "no .wav files in " + a.speech);
  } else {
    inputs.push_back(a.speech);
  }
  const PeakPolicy policy = ParsePeakPolicy(a.peak);
  const AudioBuffer noise = ReadWav(a.noise);

  struct Job {
    fs::path in;
    double snr;
    fs::path out;
  };
  std::vector<Job> jobs;
  for (const auto &in : inputs)
    for (double snr : a.snrs)
      jobs.push_back({in, snr,
                      fs::path(a.out) / (in.stem().string() + "_snr" + Num(snr) +
                                         ".wav")});
  std::vector<MixResult> results(jobs.size());
  ParallelFor(jobs.size(), g.jobs, [&](std::size_t k) {
    AudioBuffer speech;
    try {
      speech = ReadWav(jobs[k].in);
      results[k] = MixAtSnr(speech, noise,
                            {jobs[k].snr, MixSeed(g.seed, k), policy});
    } catch (const Error &e) {
      throw Error(e.code(), e.what(), jobs[k].in.string(), 0);
    }
    WriteWav(jobs[k].out, results[k].mixture);
    results[k].mixture.samples.clear();
  });

  std::string manifest =
      CsvRow({"input_path", "snr_db", "noise_scale", "mixture_gain"}) + "\n";
  for (std::size_t k = 0; k < jobs.size(); ++k)
    manifest += CsvRow({jobs[k].in.string(), Num(jobs[k].snr),
                        FormatExact(results[k].noise_scale),
                        FormatExact(results[k].mixture_gain)}) + "\n";
  WriteFileAtomic(fs::path(a.out) / "manifest.csv", manifest);
  std::cout << jobs.size() << " mixtures written to " << a.out << "\n";
}

// ---- score -------------------------------------------------------------------

struct ScoreArgs {
  std::string ref, hyp, out;
  int min_count = 7;
};

void Score(const ScoreArgs &a, const Globals &g) {
  auto refs = ReadTranscripts(a.ref);
  auto hyps = ReadTranscripts(a.hyp);
  auto scored = ScoreCorpus(refs, hyps, g.jobs);
  std::vector<AlignmentResult> al;
  long long s = 0, d = 0, i = 0, n = 0;
  for (const auto &u : scored) {
    s += u.alignment.subs;
    d += u.alignment.dels;
    i += u.alignment.ins;
    n += u.alignment.n();
    al.push_back(u.alignment);
  }
  const double wer = CorpusWer(al);
  const fs::path out(a.out);
  WriteFileAtomic(out / "alignment.csv", AlignmentCsv(scored));
  WriteFileAtomic(out / "iwer.csv", IwerCsv(IwerTable(al, a.min_count)));
  json summary{{"ref", a.ref}, {"hyp", a.hyp}, {"utterances", scored.size()},
               {"S", s}, {"D", d}, {"I", i}, {"N", n}, {"wer", wer}};
  WriteFileAtomic(out / "summary.json", summary.dump(2) + "\n");
  std::cout << "WER " << FormatFixed(wer, 2) << "% [S=" << s << " D=" << d
            << " I=" << i << " N=" << n << "]\n";
}

// ---- gain --------------------------------------------------------------------

struct GainArgs {
  std::string ao, av, json_out, plot_out;
  std::vector<double> ref_snrs;
};

std::vector<GainCell> Gains(const GainArgs &a, WerCurve &ao, WerCurve &av) {
  std::vector<double> refs = a.ref_snrs;
  if (refs.empty()) refs.push_back(0.0);
  SystemCurves sys{av.label(), "", ao, av};
  return GainReport(std::span<const SystemCurves>(&sys, 1), refs);
}

void Gain(const GainArgs &a) {
  WerCurve ao = ReadCurveCsv(a.ao), av = ReadCurveCsv(a.av);
  auto cells = Gains(a, ao, av);
  Table t{{"ref_snr_db", "ref_wer", "crossing_snr_db", "gain_db"}, {}};
  json j = json::array();
  for (const auto &c : cells) {
    json row{{"ref_snr_db", c.ref_snr_db}};
    if (c.result) {
      const auto &r = *c.result;
      t.rows.push_back({Num(c.ref_snr_db), FormatFixed(r.ref_wer, 1),
                        FormatFixed(r.crossing_snr_db, 1),
                        (r.bounded ? ">= " : "") + FormatFixed(r.gain_db, 1)});
      row["ref_wer"] = r.ref_wer;
      row["crossing_snr_db"] = r.crossing_snr_db;
      row["gain_db"] = r.gain_db;
      row["bounded"] = r.bounded;
    } else {
      t.rows.push_back({Num(c.ref_snr_db), "", "", c.error});
      row["error"] = c.error;
    }
    j.push_back(std::move(row));
  }
  std::cout << RenderTable(t, TableStyle::kMarkdown);
  if (!a.json_out.empty()) WriteFileAtomic(a.json_out, j.dump(2) + "\n");
}

void GainPlot(const GainArgs &a) {
  WerCurve ao = ReadCurveCsv(a.ao), av = ReadCurveCsv(a.av);
  std::vector<GainResult> gains;
  for (const auto &c : Gains(a, ao, av))
    if (c.result) gains.push_back(*c.result);
  std::vector<WerCurve> curves{ao, av};
  WriteFileAtomic(a.plot_out, RenderCurvesSvg(curves, gains));
  std::cout << a.plot_out << "\n";
}

// ---- occlude -----------------------------------------------------------------

struct PlanArgs {
  std::string align, position, out, region = "full-frame", fill = "solid-gray",
                                    tier = "words";
  double fps = 25.0;
};

void OccludePlan(const PlanArgs &a) {
  if (!(a.fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "--fps must be > 0");
  const auto position = ParsePosition(a.position);
  const auto region = ParseRegion(a.region);
  const auto fill = ParseFill(a.fill);
  std::vector<OcclusionManifest> manifests;
  for (const auto &[utt, spans] : ReadAlignment(a.align, a.tier))
    manifests.push_back(Plan(utt, spans, a.fps, position, region, fill));
  WriteFileAtomic(a.out, ManifestJson(manifests));
  std::size_t windows = 0, skipped = 0;
  for (const auto &m : manifests) {
    windows += m.windows.size();
    skipped += m.skipped.size();
  }
  std::cout << manifests.size() << " utterances, " << windows << " windows, "
            << skipped << " words without occlusion\n";
}

struct ApplyArgs {
  std::string frames, manifest, out;
};

void OccludeApply(const ApplyArgs &a, const Globals &g) {
  auto manifests = ParseManifestJson(ReadFile(a.manifest), a.manifest);
  // One utterance: frames sit in DIR. Several: DIR/<utt_id>/.
  const bool nested = manifests.size() > 1;
  for (const auto &m : manifests) {
    const fs::path in_dir = nested ? fs::path(a.frames) / m.utt_id : fs::path(a.frames);
    const fs::path out_dir = nested ? fs::path(a.out) / m.utt_id : fs::path(a.out);
    auto paths = ListFrames(in_dir);
    std::vector<Image> frames(paths.size());
    ParallelFor(paths.size(), g.jobs, [&](std::size_t k) { frames[k] = ReadPng(paths[k]); });
    frames = ApplyOcclusion(std::move(frames), m, g.jobs);
    ParallelFor(paths.size(), g.jobs, [&](std::size_t k) {
      WritePng(out_dir / paths[k].filename(), frames[k]);
    });
    std::cout << m.utt_id << ": " << paths.size() << " frames, "
              << m.windows.size() << " windows\n";
  }
}

// ---- sim ---------------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::vector<std::string> out;
};

void SimSweep(const SweepArgs &a, const Globals &g) {
  if (a.out.size() != 2)
    throw Error(ErrorCode::kInvalidArgument, "--out takes two files: AO.csv AV.csv");
  SimConfig c = ParseSimConfig(ReadFile(a.config), a.config);
  if (g.seed_given) c.seed = g.seed;
  auto refs = MakeCorpus(c.words, c.vocab_size, c.utt_len, c.seed);
  auto grid = SnrGrid(c.snr_min, c.snr_max, c.snr_step);
  auto [ao, av] = Sweep(c.ao, c.av, refs, grid, c.seed, g.jobs);
  WriteFileAtomic(a.out[0], CurveCsv(ao));
  WriteFileAtomic(a.out[1], CurveCsv(av));
  try {
    auto r = EffectiveSnrGain(ao, av, 0.0);
    std::cout << "gain at 0 dB: " << (r.bounded ? ">= " : "")
              << FormatFixed(r.gain_db, 2) << " dB (configured shift "
              << FormatFixed(c.av.av_shift_db - c.ao.av_shift_db, 2) << " dB)\n";
  } catch (const Error &e) {
    std::cout << "gain at 0 dB: " << e.what() << "\n";
  }
}

// ---- mafi --------------------------------------------------------------------

struct MafiScoreArgs {
  std::string lexicon, phones, target;
  std::vector<std::string> guesses;
};

void MafiScoreCmd(const MafiScoreArgs &a) {
  PhoneTable phones =
      a.phones.empty() ? PhoneTable::Default() : PhoneTable::Read(a.phones);
  Lexicon lex = Lexicon::Read(a.lexicon, phones);
  auto word = [&](const std::string &w) {
    auto toks = Normalize(w);
    if (toks.size() != 1)
      throw Error(ErrorCode::kInvalidToken, "not a single word: '" + w + "'");
    return G2p(toks[0], lex);
  };
  auto target = word(a.target);
  std::vector<std::vector<PhonSegment>> guesses;
  for (const auto &gw : a.guesses) guesses.push_back(word(gw));
  std::cout << FormatFixed(MafiScore(target, guesses), 6) << "\n";
}

struct CorrelateArgs {
  std::string norms, iwer, out;
  int min_count = 7;
};

void MafiCorrelate(const CorrelateArgs &a, const Globals &g, int permutations) {
  auto norms = LoadNorms(a.norms);
  auto iwers = ParseIwerCsv(ReadFile(a.iwer), a.iwer);
  auto r = Correlate(norms, iwers, a.min_count);
  json j{{"norms", a.norms}, {"iwer", a.iwer}, {"min_count", a.min_count},
         {"r", r.r},         {"n", r.n},       {"p", r.p},
         {"stars", r.stars}, {"degenerate", r.degenerate},
         {"cell", r.Formatted()}};
  if (permutations > 0) {
    auto pairs = PairScores(norms, iwers, a.min_count);
    j["permutations"] = permutations;
    j["permutation_p"] =
        PermutationP(pairs.mafi, pairs.iwer, permutations, g.seed, g.jobs);
  }
  if (!a.out.empty()) WriteFileAtomic(a.out, j.dump(2) + "\n");
  std::cout << r.Formatted() << " (r=" << FormatFixed(r.r, 4) << ", n=" << r.n
            << ", p=" << FormatFixed(r.p, 4) << ")\n";
}

// ---- report ------------------------------------------------------------------

void ReportTable(const std::string &in, const std::string &style) {
  std::cout << RenderTable(ParseCsvTable(ReadFile(in)), ParseTableStyle(style));
}

void ReportRelinc(double baseline, const std::vector<double> &degraded) {
  for (double d : degraded)
    std::cout << FormatFixed(RelativeIncrease(baseline, d), 1) << "%\n";
}

// ---- run ---------------------------------------------------------------------

int RunCmd(const std::string &config_path, const std::string &out_flag,
           const Globals &g) {
  fs::path out_dir = out_flag;
  try {
    EvalConfig config = LoadEvalConfig(config_path);
    if (g.seed_given) config.seed = g.seed;
    if (out_dir.empty()) {
      fs::path o(config.out);
      out_dir = o.is_absolute() ? o : config.base_dir / o;
    }
    auto result = Run(config, out_dir, std::max(g.jobs, config.jobs));
    std::cout << "wrote " << result.files.size() << " files to "
              << out_dir.string() << "\n";
    return 0;
  } catch (const Error &e) {
    const std::string report = ErrorJson(std::string(ErrorCodeName(e.code())),
                                         e.what(), e.file(), e.line());
    std::cerr << report;
    if (!out_dir.empty()) {
      try {
        WriteFileAtomic(out_dir / "error.json", report);
      } catch (const Error &) {
      }
    }
    return IsConfigError(e.code()) ? kExitConfig : kExitData;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Audio-visual speech recognition evaluation toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option_function<std::uint64_t>(
         "--seed", [&](std::uint64_t s) { g.seed = s, g.seed_given = true; },
         "random seed")
      ->configurable();
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);

  int code = 0;

  auto *run = app.add_subcommand("run", "evaluate a config and write a report bundle");
  std::string run_config, run_out;
  run->add_option("--config", run_config)->required();
  run->add_option("--out", run_out, "bundle directory (overrides the config)");
  run->callback([&] { code = RunCmd(run_config, run_out, g); });

  auto *noise = app.add_subcommand("noise", "pink noise generation and mixing");
  noise->require_subcommand(1);
  NoiseGenArgs gen;
  auto *gen_cmd = noise->add_subcommand("gen", "generate pink noise");
  gen_cmd->add_option("--samples", gen.samples)->required();
  gen_cmd->add_option("--rate", gen.rate);
  gen_cmd->add_option("--out", gen.out)->required();
  gen_cmd->callback([&] { NoiseGen(gen, g); });
  NoiseMixArgs mix;
  auto *mix_cmd = noise->add_subcommand("mix", "mix speech with noise at target SNRs");
  mix_cmd->add_option("--speech", mix.speech, "WAV file or directory")->required();
  mix_cmd->add_option("--noise", mix.noise)->required();
  mix_cmd->add_option("--snr", mix.snrs)->required()->delimiter(',');
  mix_cmd->add_option("--peak", mix.peak)
      ->check(CLI::IsMember({"rescale", "clip", "error"}));
  mix_cmd->add_option("--out", mix.out)->required();
  mix_cmd->callback([&] { NoiseMix(mix, g); });

  ScoreArgs score;
  auto *score_cmd = app.add_subcommand("score", "score hypotheses against references");
  score_cmd->add_option("--ref", score.ref)->required();
  score_cmd->add_option("--hyp", score.hyp)->required();
  score_cmd->add_option("--out", score.out)->required();
  score_cmd->add_option("--min-count", score.min_count)->check(CLI::PositiveNumber);
  score_cmd->callback([&] { Score(score, g); });

  GainArgs gain;
  auto *gain_cmd = app.add_subcommand("gain", "effective SNR gain of AV over AO");
  gain_cmd->fallthrough();
  gain_cmd->add_option("--ao", gain.ao);
  gain_cmd->add_option("--av", gain.av);
  gain_cmd->add_option("--ref-snr", gain.ref_snrs);
  gain_cmd->add_option("--json", gain.json_out, "also write the table as JSON");
  auto *plot_cmd = gain_cmd->add_subcommand("plot", "render both curves as SVG");
  plot_cmd->add_option("--out", gain.plot_out)->required();
  gain_cmd->callback([&] {
    if (gain.ao.empty() || gain.av.empty())
      throw CLI::RequiredError("--ao and --av");
    if (plot_cmd->parsed()) GainPlot(gain);
    else Gain(gain);
  });

  auto *occ = app.add_subcommand("occlude", "plan and apply word-level occlusion");
  occ->require_subcommand(1);
  PlanArgs plan;
  auto *plan_cmd = occ->add_subcommand("plan", "write an occlusion manifest");
  plan_cmd->add_option("--align", plan.align, "CTM or TextGrid")->required();
  plan_cmd->add_option("--fps", plan.fps);
  plan_cmd->add_option("--position", plan.position)
      ->required()
      ->check(CLI::IsMember({"initial", "middle"}));
  plan_cmd->add_option("--region", plan.region, "full-frame or X,Y,W,H");
  plan_cmd->add_option("--fill", plan.fill)
      ->check(CLI::IsMember({"solid-gray", "frame-mean", "blur"}));
  plan_cmd->add_option("--tier", plan.tier, "TextGrid tier name");
  plan_cmd->add_option("--out", plan.out)->required();
  plan_cmd->callback([&] { OccludePlan(plan); });
  ApplyArgs apply;
  auto *apply_cmd = occ->add_subcommand("apply", "occlude PNG frames");
  apply_cmd->add_option("--frames", apply.frames)->required();
  apply_cmd->add_option("--manifest", apply.manifest)->required();
  apply_cmd->add_option("--out", apply.out)->required();
  apply_cmd->callback([&] { OccludeApply(apply, g); });

  auto *sim = app.add_subcommand("sim", "synthetic recognizer simulation");
  sim->require_subcommand(1);
  SweepArgs sweep;
  auto *sweep_cmd = sim->add_subcommand("sweep", "simulate AO and AV WER curves");
  sweep_cmd->add_option("--config", sweep.config)->required();
  sweep_cmd->add_option("--out", sweep.out, "AO.csv AV.csv")->required()->expected(2);
  sweep_cmd->callback([&] { SimSweep(sweep, g); });

  auto *mafi = app.add_subcommand("mafi", "visual informativeness scores");
  mafi->require_subcommand(1);
  MafiScoreArgs ms;
  auto *ms_cmd = mafi->add_subcommand("score", "score guesses against a target word");
  ms_cmd->add_option("--lexicon", ms.lexicon)->required();
  ms_cmd->add_option("--phones", ms.phones, "phone feature table CSV");
  ms_cmd->add_option("--target", ms.target)->required();
  ms_cmd->add_option("--guess", ms.guesses)->required();
  ms_cmd->callback([&] { MafiScoreCmd(ms); });
  CorrelateArgs mc;
  int permutations = 0;
  auto *mc_cmd = mafi->add_subcommand("correlate", "correlate MaFI scores with IWER");
  mc_cmd->add_option("--norms", mc.norms)->required();
  mc_cmd->add_option("--iwer", mc.iwer)->required();
  mc_cmd->add_option("--min-count", mc.min_count)->check(CLI::PositiveNumber);
  mc_cmd->add_option("--permutations", permutations, "0 or >= 1000");
  mc_cmd->add_option("--out", mc.out);
  mc_cmd->callback([&] { MafiCorrelate(mc, g, permutations); });

  auto *rep = app.add_subcommand("report", "table rendering helpers");
  rep->require_subcommand(1);
  std::string table_in, table_style = "markdown";
  auto *table_cmd = rep->add_subcommand("table", "render a CSV table");
  table_cmd->add_option("--in", table_in)->required();
  table_cmd->add_option("--style", table_style)
      ->check(CLI::IsMember({"markdown", "csv"}));
  table_cmd->callback([&] { ReportTable(table_in, table_style); });
  double baseline = 0.0;
  std::vector<double> degraded;
  auto *relinc_cmd = rep->add_subcommand("relinc", "relative WER increase in percent");
  relinc_cmd->add_option("--baseline", baseline)->required();
  relinc_cmd->add_option("--degraded", degraded)->required();
  relinc_cmd->callback([&] { ReportRelinc(baseline, degraded); });

  // Global flags may follow any subcommand.
  std::function<void(CLI::App *)> fall = [&](CLI::App *a) {
    for (auto *sub : a->get_subcommands({})) {
      sub->fallthrough();
      fall(sub);
    }
  };
  fall(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  } catch (const Error &e) {
    std::cerr << "avsr-gauge: " << ErrorCodeName(e.code()) << ": " << e.what();
    if (!e.file().empty()) {
      std::cerr << " (" << e.file();
      if (e.line() > 0) std::cerr << ":" << e.line();
      std::cerr << ")";
    }
    std::cerr << "\n";
    return IsConfigError(e.code()) ? kExitConfig : kExitData;
  } catch (const std::exception &e) {
    std::cerr << "avsr-gauge: " << e.what() << "\n";
    return kExitData;
  }
  return code;
}
