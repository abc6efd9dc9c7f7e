// tests/fixtures.h

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


// On-disk evaluation inputs built from the synthetic recognizer.

#ifndef AVSR_TESTS_FIXTURES_H_
#define AVSR_TESTS_FIXTURES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "oracles.h"

#include "avsr/scoring.h"
#include "avsr/simkit.h"
#include "avsr/util.h"

namespace fixture {

inline std::string Tsv(const std::vector<avsr::Utterance> &utts) {
  std::string s;
  for (const auto &u : utts) s += u.id + "\t" + u.text + "\n";
  return s;
}

// Writes refs.tsv, sim/{ao,av}_<snr>.tsv, norms.csv and eval.conf into dir.
// The AV recognizer is the AO one shifted by `shift_db`.
inline void WriteSimBundle(const std::filesystem::path &dir, double shift_db,
                           int words, const std::vector<double> &snrs,
                           std::uint64_t seed, const std::string &extra = {}) {
  auto refs = avsr::MakeCorpus(words, 300, 10, seed);
  oracle::Spit(dir / "refs.tsv", Tsv(refs));
  avsr::SyntheticRecognizer ao, av;
  av.av_shift_db = shift_db;
  std::string snr_list;
  for (std::size_t k = 0; k < snrs.size(); ++k) {
    const std::string tag = avsr::FormatExact(snrs[k]);
    const auto stream = avsr::MixSeed(seed, k);
    oracle::Spit(dir / "sim" / ("ao_" + tag + ".tsv"),
                 Tsv(avsr::Simulate(refs, ao, snrs[k], stream, 4)));
    oracle::Spit(dir / "sim" / ("av_" + tag + ".tsv"),
                 Tsv(avsr::Simulate(refs, av, snrs[k], stream, 4)));
    snr_list += (k ? "," : "") + tag;
  }
  // Made-up norms: a smooth function of the word index.
  std::string norms = "word,score\n";
  for (int w = 0; w < 300; ++w) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "W%04d", w);
    norms += std::string(buf) + "," +
             avsr::FormatExact(-2.5 + 2.5 * ((w * 37) % 300) / 300.0) + "\n";
  }
  oracle::Spit(dir / "norms.csv", norms);
  oracle::Spit(dir / "eval.conf",
               "# synthetic evaluation\n"
               "out = report\n"
               "seed = 5\n"
               "snrs = " + snr_list + "\n"
               "refs.SIM = refs.tsv\n"
               "hyp.SIM.Synth.ao = sim/ao_{snr}.tsv\n"
               "hyp.SIM.Synth.av = sim/av_{snr}.tsv\n"
               "mafi.norms = norms.csv\n" + extra);
}

}  // namespace fixture

#endif  // AVSR_TESTS_FIXTURES_H_
