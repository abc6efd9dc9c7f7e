// src/mafi.cc

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

#include "avsr/mafi.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "avsr/error.h"
#include "avsr/stats.h"
#include "avsr/util.h"

namespace avsr {

namespace {

// Same content as data/phone_features.csv.
constexpr std::string_view kDefaultPhoneTable = R"csv(
phone,ipa,consonantal,sonorant,voice,nasal,continuant,labial,round,coronal,anterior,dorsal,high,low,back,tense
P,p,1,-1,-1,-1,-1,1,-1,-1,0,-1,0,0,0,0
B,b,1,-1,1,-1,-1,1,-1,-1,0,-1,0,0,0,0
T,t,1,-1,-1,-1,-1,-1,-1,1,1,-1,0,0,0,0
D,d,1,-1,1,-1,-1,-1,-1,1,1,-1,0,0,0,0
K,k,1,-1,-1,-1,-1,-1,-1,-1,0,1,1,-1,1,0
G,ɡ,1,-1,1,-1,-1,-1,-1,-1,0,1,1,-1,1,0
CH,tʃ,1,-1,-1,-1,-1,-1,-1,1,-1,-1,0,0,0,0
JH,dʒ,1,-1,1,-1,-1,-1,-1,1,-1,-1,0,0,0,0
F,f,1,-1,-1,-1,1,1,-1,-1,0,-1,0,0,0,0
V,v,1,-1,1,-1,1,1,-1,-1,0,-1,0,0,0,0
TH,θ,1,-1,-1,-1,1,-1,-1,1,1,-1,0,0,0,-1
DH,ð,1,-1,1,-1,1,-1,-1,1,1,-1,0,0,0,-1
S,s,1,-1,-1,-1,1,-1,-1,1,1,-1,0,0,0,1
Z,z,1,-1,1,-1,1,-1,-1,1,1,-1,0,0,0,1
SH,ʃ,1,-1,-1,-1,1,-1,-1,1,-1,-1,0,0,0,1
ZH,ʒ,1,-1,1,-1,1,-1,-1,1,-1,-1,0,0,0,1
HH,h,-1,-1,-1,-1,1,-1,-1,-1,0,-1,0,0,0,0
M,m,1,1,1,1,-1,1,-1,-1,0,-1,0,0,0,0
N,n,1,1,1,1,-1,-1,-1,1,1,-1,0,0,0,0
NG,ŋ,1,1,1,1,-1,-1,-1,-1,0,1,1,-1,1,0
L,l,1,1,1,-1,1,-1,-1,1,1,-1,0,0,0,0
R,ɹ,-1,1,1,-1,1,-1,1,1,-1,-1,0,0,0,0
W,w,-1,1,1,-1,1,1,1,-1,0,1,1,-1,1,0
Y,j,-1,1,1,-1,1,-1,-1,-1,0,1,1,-1,-1,0
IY,i,-1,1,1,-1,1,-1,-1,-1,0,1,1,-1,-1,1
IH,ɪ,-1,1,1,-1,1,-1,-1,-1,0,1,1,-1,-1,-1
EY,eɪ,-1,1,1,-1,1,-1,-1,-1,0,1,-1,-1,-1,1
EH,ɛ,-1,1,1,-1,1,-1,-1,-1,0,1,-1,-1,-1,-1
AE,æ,-1,1,1,-1,1,-1,-1,-1,0,1,-1,1,-1,-1
AA,ɑ,-1,1,1,-1,1,-1,-1,-1,0,1,-1,1,1,1
AO,ɔ,-1,1,1,-1,1,1,1,-1,0,1,-1,1,1,-1
AH,ʌ,-1,1,1,-1,1,-1,-1,-1,0,1,-1,-1,1,-1
OW,oʊ,-1,1,1,-1,1,1,1,-1,0,1,-1,-1,1,1
OY,ɔɪ,-1,1,1,-1,1,1,1,-1,0,1,-1,-1,1,-1
UH,ʊ,-1,1,1,-1,1,1,1,-1,0,1,1,-1,1,-1
UW,u,-1,1,1,-1,1,1,1,-1,0,1,1,-1,1,1
ER,ɝ,-1,1,1,-1,1,-1,-1,1,-1,1,-1,-1,-1,1
AY,aɪ,-1,1,1,-1,1,-1,-1,-1,0,1,-1,1,-1,1
AW,aʊ,-1,1,1,-1,1,1,1,-1,0,1,-1,1,1,1
)csv";

std::string StripStress(std::string phone) {
  while (!phone.empty() && std::isdigit(static_cast<unsigned char>(phone.back())))
    phone.pop_back();
  return phone;
}

}  // namespace

// ---- phone table -----------------------------------------------------------

std::string_view PhoneTable::DefaultCsv() {
  return kDefaultPhoneTable.substr(1);  // drop the newline after R"csv(
}

PhoneTable PhoneTable::Parse(std::string_view csv, const std::string &origin) {
  PhoneTable table;
  int line_no = 0;
  for (const auto &line : SplitLines(csv)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto f = ParseCsvLine(line);
    if (line_no == 1 && !f.empty() && f[0] == "phone") continue;
    if (f.size() != 2 + kNumFeatures)
      throw Error(ErrorCode::kMalformedLine,
                  "expected phone,ipa and " + std::to_string(kNumFeatures) +
                      " feature values",
                  origin, line_no);
    PhonSegment seg;
    seg.phone = std::string(Trim(f[0]));
    seg.ipa = std::string(Trim(f[1]));
    if (seg.phone.empty() || seg.ipa.empty())
      throw Error(ErrorCode::kMalformedLine, "empty phone or IPA symbol",
                  origin, line_no);
    for (int k = 0; k < kNumFeatures; ++k) {
      auto v = ParseInt(f[2 + k]);
      if (!v || *v < -1 || *v > 1)
        throw Error(ErrorCode::kMalformedLine,
                    "feature values must be -1, 0 or 1", origin, line_no);
      seg.features[k] = static_cast<int>(*v);
    }
    if (!table.entries_.emplace(seg.phone, seg).second)
      throw Error(ErrorCode::kDuplicateWord, "duplicate phone " + seg.phone,
                  origin, line_no);
  }
  return table;
}

PhoneTable PhoneTable::Read(const std::filesystem::path &path) {
  return Parse(ReadFile(path), path.string());
}

const PhoneTable &PhoneTable::Default() {
  static const PhoneTable table = Parse(DefaultCsv(), "<builtin phone table>");
  return table;
}

bool PhoneTable::Contains(const std::string &phone) const {
  return entries_.count(phone) > 0;
}

const PhonSegment &PhoneTable::Lookup(const std::string &phone) const {
  auto it = entries_.find(phone);
  if (it == entries_.end())
    throw Error(ErrorCode::kOutOfVocabulary, "unknown phone '" + phone + "'");
  return it->second;
}

// ---- lexicon ----------------------------------------------------------------

Lexicon Lexicon::Parse(std::string_view text, const std::string &origin,
                       const PhoneTable &phones) {
  Lexicon lex;
  lex.phones_ = phones;
  int line_no = 0;
  for (const auto &line : SplitLines(text)) {
    ++line_no;
    std::string_view t = Trim(line);
    if (t.empty() || t.rfind(";;;", 0) == 0) continue;
    auto f = SplitWhitespace(t);
    if (f.size() < 2)
      throw Error(ErrorCode::kMalformedLine, "entry without phones", origin,
                  line_no);
    std::string head = f[0];
    if (head.size() > 3 && head.back() == ')') {
      std::size_t open = head.rfind('(');
      if (open != std::string::npos && open > 0) continue;  // alternate
    }
    auto words = Normalize(head);
    if (words.size() != 1)
      throw Error(ErrorCode::kMalformedLine, "bad headword '" + head + "'",
                  origin, line_no);
    std::vector<std::string> pron;
    for (std::size_t k = 1; k < f.size(); ++k) {
      std::string ph = StripStress(f[k]);
      for (auto &c : ph) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (!phones.Contains(ph))
        throw Error(ErrorCode::kMalformedLine,
                    "phone '" + f[k] + "' missing from the feature table",
                    origin, line_no);
      pron.push_back(std::move(ph));
    }
    lex.entries_.emplace(words[0].text(), std::move(pron));
  }
  return lex;
}

Lexicon Lexicon::Read(const std::filesystem::path &path,
                      const PhoneTable &phones) {
  return Parse(ReadFile(path), path.string(), phones);
}

std::vector<PhonSegment> G2p(const Token &word, const Lexicon &lexicon) {
  auto it = lexicon.entries().find(word.text());
  if (it == lexicon.entries().end())
    throw Error(ErrorCode::kOutOfVocabulary,
                "'" + word.text() + "' is not in the lexicon");
  std::vector<PhonSegment> segs;
  for (const auto &ph : it->second) segs.push_back(lexicon.phones().Lookup(ph));
  return segs;
}

// ---- scoring ---------------------------------------------------------------

double FeatureDistance(const FeatureVector &a, const FeatureVector &b) {
  int differ = 0;
  for (int k = 0; k < kNumFeatures; ++k) differ += a[k] != b[k];
  return static_cast<double>(differ) / kNumFeatures;
}

double GuessDissimilarity(std::span<const PhonSegment> target,
                          std::span<const PhonSegment> guess) {
  if (target.empty()) throw Error(ErrorCode::kEmptyTarget, "empty target word");
  const std::size_t n = target.size(), m = guess.size();
  std::vector<double> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<double>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<double>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      double sub = prev[j - 1] +
                   FeatureDistance(target[i - 1].features, guess[j - 1].features);
      cur[j] = std::min({sub, prev[j] + 1.0, cur[j - 1] + 1.0});
    }
    std::swap(prev, cur);
  }
  return prev[m] / static_cast<double>(n);
}

double MafiScore(std::span<const PhonSegment> target,
                 std::span<const std::vector<PhonSegment>> guesses) {
  if (target.empty()) throw Error(ErrorCode::kEmptyTarget, "empty target word");
  if (guesses.empty())
    throw Error(ErrorCode::kInvalidArgument, "MaFI needs at least one guess");
  double total = 0.0;
  for (const auto &g : guesses) total += GuessDissimilarity(target, g);
  double score = -total / static_cast<double>(guesses.size());
  return score == 0.0 ? 0.0 : score;  // no -0
}

// ---- norms and correlation -------------------------------------------------

std::vector<MafiEntry> ParseNorms(std::string_view text,
                                  const std::string &origin) {
  std::vector<MafiEntry> out;
  std::set<std::string> seen;
  int line_no = 0;
  bool first = true;
  for (const auto &line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty() || Trim(line).front() == '#') continue;
    auto f = ParseCsvLine(line);
    if (f.size() != 2)
      throw Error(ErrorCode::kMalformedLine, "expected word,score", origin,
                  line_no);
    auto score = ParseDouble(f[1]);
    if (!score) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw Error(ErrorCode::kMalformedLine, "non-numeric score", origin,
                  line_no);
    }
    first = false;
    auto words = Normalize(f[0]);
    if (words.size() != 1)
      throw Error(ErrorCode::kMalformedLine, "bad word '" + f[0] + "'", origin,
                  line_no);
    if (*score < -4.0 || *score > 0.5)
      throw Error(ErrorCode::kScoreOutOfRange,
                  "score " + f[1] + " outside [-4, 0.5]", origin, line_no);
    if (!seen.insert(words[0].text()).second)
      throw Error(ErrorCode::kDuplicateWord,
                  "duplicate word '" + words[0].text() + "'", origin, line_no);
    out.push_back({words[0], std::min(*score, 0.0)});
  }
  return out;
}

std::vector<MafiEntry> LoadNorms(const std::filesystem::path &path) {
  return ParseNorms(ReadFile(path), path.string());
}

std::string CorrelationResult::Formatted() const {
  return FormatCorrelation(r, p);
}

CorrelationPairs PairScores(std::span<const MafiEntry> norms,
                            std::span<const WordStats> iwers, int min_count) {
  std::map<std::string, double> score;
  for (const auto &e : norms) score[e.word.text()] = e.score;
  CorrelationPairs out;
  for (const auto &w : iwers) {
    if (w.count < min_count) continue;
    auto it = score.find(w.word.text());
    if (it == score.end()) continue;
    out.words.push_back(w.word.text());
    out.mafi.push_back(it->second);
    out.iwer.push_back(w.iwer);
  }
  return out;
}

CorrelationResult Correlate(std::span<const MafiEntry> norms,
                            std::span<const WordStats> iwers, int min_count) {
  CorrelationPairs pairs = PairScores(norms, iwers, min_count);
  if (pairs.words.empty())
    throw Error(ErrorCode::kEmptyIntersection,
                "no word has both a MaFI score and an IWER with count >= " +
                    std::to_string(min_count));
  CorrelationResult res;
  res.n = static_cast<int>(pairs.words.size());
  res.r = Pearson(pairs.mafi, pairs.iwer);
  PValue pv = PValueForR(res.r, res.n);
  res.p = pv.p;
  res.degenerate = pv.degenerate;
  res.stars = Stars(res.p);
  return res;
}

}  // namespace avsr
