// avsr/simkit.h

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

// Synthetic recognizers with a known logistic accuracy-vs-SNR curve. An
// audio-visual recognizer is the audio-only one shifted left by
// av_shift_db, which makes the true effective SNR gain known exactly.

#ifndef AVSR_SIMKIT_H_
#define AVSR_SIMKIT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "avsr/gaincurve.h"
#include "avsr/scoring.h"

namespace avsr {

struct SyntheticRecognizer {
  double floor_acc = 0.98;
  double midpoint_db = -6.0;
  double slope = 0.5;  // per dB
  double av_shift_db = 0.0;
  // Error type mix given that an error occurs.
  double p_sub = 0.7;
  double p_del = 0.2;
  double p_ins = 0.1;

  /// Throws kInvalidArgument when a field is out of range.
  void Validate() const;
};

/// floor_acc / (1 + exp(-slope * (snr + av_shift_db - midpoint_db))).
double WordAccuracy(const SyntheticRecognizer &rec, double snr);

/// Per reference word, with probability 1 - a(snr) an error replaces the
/// correct output: a substitution by another vocabulary word, a deletion, or
/// the correct word followed by an inserted random word. Utterance k draws
/// from its own stream MixSeed(seed, k), so output does not depend on `jobs`.
/// The vocabulary is the sorted set of reference tokens.
std::vector<Utterance> Simulate(std::span<const Utterance> refs,
                                const SyntheticRecognizer &rec, double snr,
                                std::uint64_t seed, int jobs = 1);

/// Reference corpus of `n_words` words drawn uniformly from a synthetic
/// vocabulary W0000..W{vocab_size-1}, split into utterances of `utt_len`.
std::vector<Utterance> MakeCorpus(int n_words, int vocab_size, int utt_len,
                                  std::uint64_t seed);

/// Scores Simulate() output at every grid SNR. Grid point k uses seed
/// MixSeed(seed, k) for both recognizers, so identical recognizers give
/// identical curves.
std::pair<WerCurve, WerCurve> Sweep(const SyntheticRecognizer &ao,
                                    const SyntheticRecognizer &av,
                                    std::span<const Utterance> refs,
                                    std::span<const double> snr_grid,
                                    std::uint64_t seed, int jobs = 1);

/// Inclusive grid lo, lo + step, ... up to hi (within step * 1e-9).
std::vector<double> SnrGrid(double lo, double hi, double step);

struct SimConfig {
  SyntheticRecognizer ao;
  SyntheticRecognizer av;
  int words = 50000;
  int vocab_size = 2000;
  int utt_len = 10;
  double snr_min = -15.0;
  double snr_max = 10.0;
  double snr_step = 1.0;
  std::uint64_t seed = 1;
};

/// Flat `key = value` file. Recognizer keys (floor_acc, midpoint_db, slope,
/// p_sub, p_del, p_ins) apply to both systems; av_shift_db only to the
/// audio-visual one. Corpus and grid keys: words, vocab_size, utt_len,
/// snr_min, snr_max, snr_step, seed. `#` starts a comment.
SimConfig ParseSimConfig(std::string_view text, const std::string &origin);

}  // namespace avsr

#endif  // AVSR_SIMKIT_H_
