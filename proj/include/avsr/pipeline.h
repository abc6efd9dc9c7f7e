// avsr/pipeline.h

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

// End-to-end evaluation: score every configured condition, build WER-vs-SNR
// curves, compute effective SNR gains, occlusion relative increases and
// MaFI/IWER correlations, and write a deterministic report bundle.
//
// Config file (`key = value`, `#` comments, paths relative to the file):
//
//   out = report                      # bundle directory
//   seed = 7                          # permutation-test seed
//   snrs = -5,0,5                     # SNR grid of the hyp patterns
//   ref_snrs = 0,10                   # gain reference SNRs (default 0)
//   min_count = 7                     # IWER occurrence threshold
//   refs.LRS2 = lrs2_refs.tsv         # references per dataset
//   hyp.LRS2.AVEC.ao = avec/ao_{snr}.tsv   # {snr} expands over `snrs`
//   hyp.LRS2.AVEC.av = avec/av_{snr}.tsv
//   curve.LRS2.Digitized.ao = fig_ao.csv   # ready-made WER curves
//   occlusion.LRS2.AVEC.none = occ/none.tsv   # none | initial | middle
//   occlusion_wer.LRS2.AVEC.initial = 24.6    # published WER instead
//   occlusion_note.LRS2.AVEC = free text shown in the table
//   mafi.norms = mafi_norms.csv
//   mafi.pool_snrs = true             # extra pooled-over-SNR correlations
//   mafi.permutations = 10000         # adds permutation p-values

#ifndef AVSR_PIPELINE_H_
#define AVSR_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avsr/gaincurve.h"
#include "avsr/mafi.h"
#include "avsr/report.h"

namespace avsr {

struct HypSpec {
  std::string dataset;
  std::string system;
  std::string modality;  // ao | av | vo
  std::string pattern;   // path, may contain {snr}
  int line = 0;
};

struct CurveSpec {
  std::string dataset;
  std::string system;
  std::string modality;
  std::string path;
  int line = 0;
};

struct OcclusionSpec {
  // Per position ("none", "initial", "middle"): a hypothesis file or a WER.
  std::map<std::string, std::string> hyp_paths;
  std::map<std::string, double> wers;
  std::string note;
};

struct EvalConfig {
  std::filesystem::path base_dir;
  std::string source;
  std::string out = "report";
  std::uint64_t seed = 0;
  int jobs = 1;
  std::vector<double> snrs;
  std::vector<double> ref_snrs = {0.0};
  int min_count = 7;
  std::map<std::string, std::string> refs;  // dataset -> path
  std::vector<HypSpec> hyps;
  std::vector<CurveSpec> curves;
  std::map<std::pair<std::string, std::string>, OcclusionSpec> occlusion;
  std::optional<std::string> norms;
  bool pool_snrs = false;
  int permutations = 0;
};

/// Parses and validates (referenced files must exist). Errors are kConfig
/// with the offending line.
EvalConfig ParseEvalConfig(std::string_view text, const std::string &origin,
                           const std::filesystem::path &base_dir);
EvalConfig LoadEvalConfig(const std::filesystem::path &path);

/// `{snr}` replaced by the shortest exact rendering of `snr`.
std::string ExpandSnr(const std::string &pattern, double snr);

struct ConditionResult {
  std::string dataset, system, modality;
  std::optional<double> snr;  // empty for pooled rows
  std::string hyp_path;
  double wer = 0.0;
  long long subs = 0, dels = 0, ins = 0, n = 0;
};

struct OcclusionRow {
  std::string dataset, system;
  std::map<std::string, double> wer;  // position -> WER
  std::optional<double> initial_increase, middle_increase;
  std::string note;
};

struct CorrelationRow {
  std::string dataset, system, modality;
  std::string snr;  // number or "pooled"
  std::optional<CorrelationResult> result;
  std::optional<double> permutation_p;
  std::string error;
};

struct RunResult {
  std::vector<ConditionResult> conditions;
  std::vector<GainCell> gains;
  std::vector<OcclusionRow> occlusion;
  std::vector<CorrelationRow> correlations;
  /// Output files relative to the bundle directory, sorted.
  std::vector<std::string> files;
};

/// Runs the evaluation and writes the bundle under `out_dir`. Output bytes
/// depend only on the config and the input files.
RunResult Run(const EvalConfig &config, const std::filesystem::path &out_dir,
              int jobs = 1);

/// Machine-readable error report written by the CLI on failure.
std::string ErrorJson(const std::string &code, const std::string &message,
                      const std::string &file, int line);

}  // namespace avsr

#endif  // AVSR_PIPELINE_H_
