// avsr/mafi.h

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

// Mouth and facial informativeness (MaFI) of words: how close speechreaders'
// guesses come to the spoken word in phonological-feature space. Published
// norms are loaded from CSV; new words are scored from a pronouncing
// dictionary and a ternary feature table. Scores are <= 0, with 0 meaning
// every guess was phonologically identical to the target.

#ifndef AVSR_MAFI_H_
#define AVSR_MAFI_H_

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avsr/scoring.h"

namespace avsr {

constexpr int kNumFeatures = 14;

/// Column order of the feature table.
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "consonantal", "sonorant", "voice",  "nasal", "continuant",
    "labial",      "round",    "coronal", "anterior", "dorsal",
    "high",        "low",      "back",   "tense"};

using FeatureVector = std::array<int, kNumFeatures>;  // each -1, 0 or +1

struct PhonSegment {
  std::string phone;  // dictionary symbol, e.g. "AE"
  std::string ipa;    // e.g. "æ"
  FeatureVector features{};

  friend bool operator==(const PhonSegment &, const PhonSegment &) = default;
};

/// Phone -> (IPA, features). CSV `phone,ipa,<14 features>` with a header.
class PhoneTable {
 public:
  static PhoneTable Parse(std::string_view csv, const std::string &origin);
  static PhoneTable Read(const std::filesystem::path &path);
  /// The table shipped with the toolkit (ARPAbet, 39 phones).
  static const PhoneTable &Default();
  static std::string_view DefaultCsv();

  bool Contains(const std::string &phone) const;
  /// Throws kOutOfVocabulary for unknown phones.
  const PhonSegment &Lookup(const std::string &phone) const;
  const std::map<std::string, PhonSegment> &entries() const { return entries_; }

 private:
  std::map<std::string, PhonSegment> entries_;
};

/// Pronouncing dictionary in CMUdict layout: `WORD PH1 PH2 ...`. Stress
/// digits are stripped, `;;;` lines are comments, alternates such as
/// `WORD(2)` and later duplicates are ignored (first pronunciation wins).
/// Every phone must exist in the phone table.
class Lexicon {
 public:
  static Lexicon Parse(std::string_view text, const std::string &origin,
                       const PhoneTable &phones = PhoneTable::Default());
  static Lexicon Read(const std::filesystem::path &path,
                      const PhoneTable &phones = PhoneTable::Default());

  const std::map<std::string, std::vector<std::string>> &entries() const {
    return entries_;
  }
  const PhoneTable &phones() const { return phones_; }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  PhoneTable phones_;
};

/// Dictionary lookup of a normalized word. Throws kOutOfVocabulary.
std::vector<PhonSegment> G2p(const Token &word, const Lexicon &lexicon);

/// Fraction of features whose values differ.
double FeatureDistance(const FeatureVector &a, const FeatureVector &b);

/// Global alignment cost of `guess` against `target` (unit insertion and
/// deletion, feature-distance substitution) divided by the target length.
double GuessDissimilarity(std::span<const PhonSegment> target,
                          std::span<const PhonSegment> guess);

/// Negated mean guess dissimilarity. Throws kEmptyTarget for an empty target
/// and kInvalidArgument when there are no guesses.
double MafiScore(std::span<const PhonSegment> target,
                 std::span<const std::vector<PhonSegment>> guesses);

struct MafiEntry {
  Token word;
  double score;
};

/// CSV `word,score` (optional header). Words are normalized; duplicates
/// throw kDuplicateWord; scores outside [-4, 0.5] throw kScoreOutOfRange and
/// scores in (0, 0.5] are clamped to 0.
std::vector<MafiEntry> ParseNorms(std::string_view text,
                                  const std::string &origin);
std::vector<MafiEntry> LoadNorms(const std::filesystem::path &path);

struct CorrelationResult {
  double r = 0.0;
  int n = 0;
  double p = 1.0;
  std::string stars;
  bool degenerate = false;

  /// "-0.097**" style cell.
  std::string Formatted() const;
};

struct CorrelationPairs {
  std::vector<std::string> words;
  std::vector<double> mafi;  // x
  std::vector<double> iwer;  // y
};

/// Words present in both sets (IWER rows with count >= min_count), in IWER
/// table order.
CorrelationPairs PairScores(std::span<const MafiEntry> norms,
                            std::span<const WordStats> iwers, int min_count);

/// Pearson r between MaFI score (x) and IWER (y) over words present in both
/// sets, after dropping IWER rows with count < min_count. Throws
/// kEmptyIntersection.
CorrelationResult Correlate(std::span<const MafiEntry> norms,
                            std::span<const WordStats> iwers,
                            int min_count = 7);

}  // namespace avsr

#endif  // AVSR_MAFI_H_
