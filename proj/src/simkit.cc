// src/simkit.cc

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

#include "avsr/simkit.h"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "avsr/error.h"
#include "avsr/util.h"

namespace avsr {

void SyntheticRecognizer::Validate() const {
  auto fail = [](const std::string &why) {
    return Error(ErrorCode::kInvalidArgument, "synthetic recognizer: " + why);
  };
  if (!(floor_acc > 0.0 && floor_acc <= 1.0)) throw fail("floor_acc must be in (0, 1]");
  if (!(slope > 0.0)) throw fail("slope must be > 0");
  if (!std::isfinite(midpoint_db) || !std::isfinite(av_shift_db))
    throw fail("midpoint_db and av_shift_db must be finite");
  if (p_sub < 0 || p_del < 0 || p_ins < 0)
    throw fail("error mix probabilities must be >= 0");
  if (std::fabs(p_sub + p_del + p_ins - 1.0) > 1e-9)
    throw fail("error mix must sum to 1");
}

double WordAccuracy(const SyntheticRecognizer &rec, double snr) {
  return rec.floor_acc /
         (1.0 + std::exp(-rec.slope * (snr + rec.av_shift_db - rec.midpoint_db)));
}

std::vector<Utterance> Simulate(std::span<const Utterance> refs,
                                const SyntheticRecognizer &rec, double snr,
                                std::uint64_t seed, int jobs) {
  rec.Validate();
  std::vector<TokenSeq> ref_tokens(refs.size());
  std::set<std::string> vocab_set;
  for (std::size_t k = 0; k < refs.size(); ++k) {
    ref_tokens[k] = Normalize(refs[k].text);
    for (const auto &t : ref_tokens[k]) vocab_set.insert(t.text());
  }
  const std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
  const double acc = WordAccuracy(rec, snr);

  std::vector<Utterance> out(refs.size());
  ParallelFor(refs.size(), jobs, [&](std::size_t k) {
    std::mt19937_64 rng(MixSeed(seed, k));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::string hyp;
    auto emit = [&](const std::string &w) {
      if (!hyp.empty()) hyp += ' ';
      hyp += w;
    };
    auto random_word = [&](const std::string &avoid) {
      if (vocab.size() < 2) return std::string("<SUB>");
      std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 2);
      std::size_t i = pick(rng);
      // Skip over `avoid` so the draw is uniform over the other words.
      if (vocab[i] >= avoid) ++i;
      return vocab[i];
    };
    for (const auto &tok : ref_tokens[k]) {
      double u_err = unit(rng);
      double u_kind = unit(rng);
      if (u_err >= 1.0 - acc) {
        emit(tok.text());
      } else if (u_kind < rec.p_sub) {
        emit(random_word(tok.text()));
      } else if (u_kind < rec.p_sub + rec.p_del) {
        // deletion: emit nothing
      } else {
        emit(tok.text());
        std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
        emit(vocab[pick(rng)]);
      }
    }
    out[k] = {refs[k].id, hyp};
  });
  return out;
}

std::vector<Utterance> MakeCorpus(int n_words, int vocab_size, int utt_len,
                                  std::uint64_t seed) {
  if (n_words < 0 || vocab_size < 1 || utt_len < 1)
    throw Error(ErrorCode::kInvalidArgument, "bad corpus dimensions");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, vocab_size - 1);
  std::vector<Utterance> out;
  char buf[32];
  for (int w = 0; w < n_words; w += utt_len) {
    Utterance u;
    std::snprintf(buf, sizeof(buf), "utt%06d", int(out.size()));
    u.id = buf;
    for (int k = 0; k < utt_len && w + k < n_words; ++k) {
      std::snprintf(buf, sizeof(buf), "W%04d", pick(rng));
      if (k) u.text += ' ';
      u.text += buf;
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::pair<WerCurve, WerCurve> Sweep(const SyntheticRecognizer &ao,
                                    const SyntheticRecognizer &av,
                                    std::span<const Utterance> refs,
                                    std::span<const double> snr_grid,
                                    std::uint64_t seed, int jobs) {
  for (std::size_t k = 1; k < snr_grid.size(); ++k)
    if (!(snr_grid[k] > snr_grid[k - 1]))
      throw Error(ErrorCode::kInvalidArgument, "SNR grid must be ascending");
  auto curve = [&](const SyntheticRecognizer &rec, const std::string &label) {
    std::vector<CurvePoint> pts;
    for (std::size_t k = 0; k < snr_grid.size(); ++k) {
      auto hyps = Simulate(refs, rec, snr_grid[k], MixSeed(seed, k), jobs);
      auto scored = ScoreCorpus(refs, hyps, jobs);
      std::vector<AlignmentResult> al;
      al.reserve(scored.size());
      for (auto &s : scored) al.push_back(std::move(s.alignment));
      pts.push_back({snr_grid[k], CorpusWer(al)});
    }
    return WerCurve(std::move(pts), label);
  };
  return {curve(ao, "audio-only"), curve(av, "audio-visual")};
}

std::vector<double> SnrGrid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo))
    throw Error(ErrorCode::kInvalidArgument, "bad SNR grid bounds");
  std::vector<double> g;
  for (long k = 0;; ++k) {
    double v = lo + k * step;
    if (v > hi + step * 1e-9) break;
    g.push_back(v);
  }
  return g;
}

SimConfig ParseSimConfig(std::string_view text, const std::string &origin) {
  SimConfig c;
  int line_no = 0;
  for (const auto &raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    auto fail = [&](const std::string &why) {
      return Error(ErrorCode::kConfig, why, origin, line_no);
    };
    if (eq == std::string_view::npos) throw fail("expected key = value");
    std::string key(Trim(line.substr(0, eq)));
    auto num = ParseDouble(line.substr(eq + 1));
    if (!num) throw fail("value of '" + key + "' is not a number");
    double v = *num;
    auto both = [&](double SyntheticRecognizer::*field) {
      c.ao.*field = v;
      c.av.*field = v;
    };
    auto integer = [&]() {
      if (v != std::floor(v) || v < 0 || v > 1e9)
        throw fail("'" + key + "' must be a non-negative integer");
      return static_cast<long long>(v);
    };
    if (key == "floor_acc") both(&SyntheticRecognizer::floor_acc);
    else if (key == "midpoint_db") both(&SyntheticRecognizer::midpoint_db);
    else if (key == "slope") both(&SyntheticRecognizer::slope);
    else if (key == "p_sub") both(&SyntheticRecognizer::p_sub);
    else if (key == "p_del") both(&SyntheticRecognizer::p_del);
    else if (key == "p_ins") both(&SyntheticRecognizer::p_ins);
    else if (key == "av_shift_db") c.av.av_shift_db = v;
    else if (key == "words") c.words = int(integer());
    else if (key == "vocab_size") c.vocab_size = int(integer());
    else if (key == "utt_len") c.utt_len = int(integer());
    else if (key == "snr_min") c.snr_min = v;
    else if (key == "snr_max") c.snr_max = v;
    else if (key == "snr_step") c.snr_step = v;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(integer());
    else throw fail("unknown key '" + key + "'");
  }
  try {
    c.ao.Validate();
    c.av.Validate();
  } catch (const Error &e) {
    throw Error(ErrorCode::kConfig, e.what(), origin, 0);
  }
  return c;
}

}  // namespace avsr
