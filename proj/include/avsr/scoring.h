// avsr/scoring.h

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

#ifndef AVSR_SCORING_H_
#define AVSR_SCORING_H_

#include <compare>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace avsr {

/// A normalized word: non-empty, no whitespace.
class Token {
 public:
  /// Throws kInvalidToken if `text` is empty or contains whitespace.
  explicit Token(std::string text);

  const std::string &text() const { return text_; }

  friend auto operator<=>(const Token &, const Token &) = default;
  friend bool operator==(const Token &, const Token &) = default;

 private:
  std::string text_;
};

using TokenSeq = std::vector<Token>;

/// Uppercases ASCII letters, deletes every ASCII character that is neither
/// alphanumeric, an apostrophe nor whitespace, then splits on whitespace.
/// Bytes >= 0x80 (UTF-8 letters) are kept unchanged.
TokenSeq Normalize(std::string_view text);

/// Convenience for tests and fixtures: whitespace split without
/// normalization.
TokenSeq Tokens(std::string_view words);

enum class EditKind { kMatch, kSubstitute, kDelete, kInsert };

struct EditOp {
  EditKind kind;
  /// Index into the reference, -1 for insertions.
  int ref_index = -1;
  /// Index into the hypothesis, -1 for deletions.
  int hyp_index = -1;

  friend bool operator==(const EditOp &, const EditOp &) = default;
};

struct AlignmentResult {
  TokenSeq ref;
  TokenSeq hyp;
  std::vector<EditOp> ops;
  int subs = 0;
  int dels = 0;
  int ins = 0;

  int n() const { return static_cast<int>(ref.size()); }
  int matches() const { return n() - subs - dels; }
  int errors() const { return subs + dels + ins; }
};

/// Minimum edit-distance alignment with unit substitution, deletion and
/// insertion costs. Among optimal alignments the backtrace (from the end)
/// prefers Match, then Substitute, then Delete, then Insert.
AlignmentResult Align(const TokenSeq &ref, const TokenSeq &hyp);

/// 100 * (S + D + I) / N pooled over the corpus. Throws kEmptyReference when
/// the pooled N is zero.
double CorpusWer(std::span<const AlignmentResult> alignments);

struct WordStats {
  Token word;
  int count = 0;
  int subs = 0;
  int dels = 0;
  double iwer = 0.0;
};

/// Per-word (S + D) / occurrences for reference words occurring at least
/// `min_count` times, sorted by word. Insertions are never attributed.
std::vector<WordStats> IwerTable(std::span<const AlignmentResult> alignments,
                                 int min_count = 7);

/// 100 * (degraded - baseline) / baseline. Throws kZeroBaseline.
double RelativeIncrease(double baseline_wer, double degraded_wer);

// ---- files -------------------------------------------------------------------

struct Utterance {
  std::string id;
  std::string text;
};

/// Reads `utt_id<TAB>transcript` lines. Blank lines are skipped; a line
/// without a tab is an utterance with an empty transcript. Duplicate ids are
/// an error.
std::vector<Utterance> ReadTranscripts(const std::filesystem::path &path);
std::vector<Utterance> ParseTranscripts(std::string_view text,
                                        const std::string &origin);

struct ScoredUtterance {
  std::string id;
  AlignmentResult alignment;
};

/// Aligns each reference utterance to the hypothesis with the same id, in
/// reference order. A missing hypothesis scores as empty; a hypothesis id
/// with no reference throws kMissingReference.
std::vector<ScoredUtterance> ScoreCorpus(std::span<const Utterance> refs,
                                         std::span<const Utterance> hyps,
                                         int jobs = 1);

/// CSV with header `utt_id,S,D,I,N`.
std::string AlignmentCsv(std::span<const ScoredUtterance> scored);
/// CSV with header `word,count,subs,dels,iwer`.
std::string IwerCsv(std::span<const WordStats> table);
/// Parses the output of IwerCsv.
std::vector<WordStats> ParseIwerCsv(std::string_view text,
                                    const std::string &origin);

}  // namespace avsr

#endif  // AVSR_SCORING_H_
