// src/scoring.cc

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

#include "avsr/scoring.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <unordered_map>

#include "avsr/error.h"
#include "avsr/util.h"

namespace avsr {

Token::Token(std::string text) : text_(std::move(text)) {
  if (text_.empty()) throw Error(ErrorCode::kInvalidToken, "empty token");
  if (text_.find_first_of(" \t\r\n") != std::string::npos)
    throw Error(ErrorCode::kInvalidToken,
                "token contains whitespace: '" + text_ + "'");
}

TokenSeq Normalize(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (c >= 0x80) {
      cleaned += ch;
    } else if (std::isalnum(c)) {
      cleaned += static_cast<char>(std::toupper(c));
    } else if (c == '\'' || c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      cleaned += ch;
    }
  }
  TokenSeq out;
  for (auto &w : SplitWhitespace(cleaned)) out.emplace_back(std::move(w));
  return out;
}

TokenSeq Tokens(std::string_view words) {
  TokenSeq out;
  for (auto &w : SplitWhitespace(words)) out.emplace_back(std::move(w));
  return out;
}

AlignmentResult Align(const TokenSeq &ref, const TokenSeq &hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  const std::size_t stride = m + 1;
  std::vector<int> cost((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> int & {
    return cost[i * stride + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      int diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  AlignmentResult r;
  r.ref = ref;
  r.hyp = hyp;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const int here = at(i, j);
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        here == at(i - 1, j - 1)) {
      r.ops.push_back({EditKind::kMatch, int(i - 1), int(j - 1)});
      --i, --j;
    } else if (i > 0 && j > 0 && ref[i - 1] != hyp[j - 1] &&
               here == at(i - 1, j - 1) + 1) {
      r.ops.push_back({EditKind::kSubstitute, int(i - 1), int(j - 1)});
      ++r.subs;
      --i, --j;
    } else if (i > 0 && here == at(i - 1, j) + 1) {
      r.ops.push_back({EditKind::kDelete, int(i - 1), -1});
      ++r.dels;
      --i;
    } else {
      r.ops.push_back({EditKind::kInsert, -1, int(j - 1)});
      ++r.ins;
      --j;
    }
  }
  std::reverse(r.ops.begin(), r.ops.end());
  return r;
}

double CorpusWer(std::span<const AlignmentResult> alignments) {
  long long errors = 0, n = 0;
  for (const auto &a : alignments) {
    errors += a.errors();
    n += a.n();
  }
  if (n == 0)
    throw Error(ErrorCode::kEmptyReference,
                "corpus has no reference words; WER undefined");
  return 100.0 * static_cast<double>(errors) / static_cast<double>(n);
}

std::vector<WordStats> IwerTable(std::span<const AlignmentResult> alignments,
                                 int min_count) {
  if (min_count < 1)
    throw Error(ErrorCode::kInvalidArgument, "min_count must be >= 1");
  struct Acc {
    int count = 0, subs = 0, dels = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto &a : alignments) {
    for (const auto &tok : a.ref) ++acc[tok.text()].count;
    for (const auto &op : a.ops) {
      if (op.kind == EditKind::kSubstitute)
        ++acc[a.ref[op.ref_index].text()].subs;
      else if (op.kind == EditKind::kDelete)
        ++acc[a.ref[op.ref_index].text()].dels;
    }
  }
  std::vector<WordStats> out;
  for (const auto &[word, x] : acc) {
    if (x.count < min_count) continue;
    out.push_back({Token(word), x.count, x.subs, x.dels,
                   static_cast<double>(x.subs + x.dels) / x.count});
  }
  return out;
}

double RelativeIncrease(double baseline_wer, double degraded_wer) {
  if (!(baseline_wer > 0.0))
    throw Error(ErrorCode::kZeroBaseline,
                "relative increase needs a positive baseline WER");
  return 100.0 * (degraded_wer - baseline_wer) / baseline_wer;
}

std::vector<Utterance> ParseTranscripts(std::string_view text,
                                        const std::string &origin) {
  std::vector<Utterance> out;
  std::set<std::string> seen;
  int line_no = 0;
  for (const auto &line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    Utterance u;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      u.id = std::string(Trim(line));
    } else {
      u.id = std::string(Trim(std::string_view(line).substr(0, tab)));
      u.text = line.substr(tab + 1);
    }
    if (u.id.empty())
      throw Error(ErrorCode::kMalformedLine, "empty utterance id", origin,
                  line_no);
    if (!seen.insert(u.id).second)
      throw Error(ErrorCode::kMalformedLine,
                  "duplicate utterance id '" + u.id + "'", origin, line_no);
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<Utterance> ReadTranscripts(const std::filesystem::path &path) {
  return ParseTranscripts(ReadFile(path), path.string());
}

std::vector<ScoredUtterance> ScoreCorpus(std::span<const Utterance> refs,
                                         std::span<const Utterance> hyps,
                                         int jobs) {
  std::unordered_map<std::string, const Utterance *> by_id;
  for (const auto &h : hyps) by_id[h.id] = &h;
  std::set<std::string> ref_ids;
  for (const auto &r : refs) ref_ids.insert(r.id);
  for (const auto &h : hyps) {
    if (!ref_ids.count(h.id))
      throw Error(ErrorCode::kMissingReference,
                  "hypothesis '" + h.id + "' has no reference");
  }
  std::vector<ScoredUtterance> out(refs.size());
  ParallelFor(refs.size(), jobs, [&](std::size_t k) {
    const auto &r = refs[k];
    auto it = by_id.find(r.id);
    TokenSeq hyp = it == by_id.end() ? TokenSeq{} : Normalize(it->second->text);
    out[k] = {r.id, Align(Normalize(r.text), hyp)};
  });
  return out;
}

std::string AlignmentCsv(std::span<const ScoredUtterance> scored) {
  std::string s = "utt_id,S,D,I,N\n";
  for (const auto &u : scored) {
    s += CsvRow({u.id, std::to_string(u.alignment.subs),
                 std::to_string(u.alignment.dels),
                 std::to_string(u.alignment.ins),
                 std::to_string(u.alignment.n())});
    s += '\n';
  }
  return s;
}

std::string IwerCsv(std::span<const WordStats> table) {
  std::string s = "word,count,subs,dels,iwer\n";
  for (const auto &w : table) {
    s += CsvRow({w.word.text(), std::to_string(w.count),
                 std::to_string(w.subs), std::to_string(w.dels),
                 FormatExact(w.iwer)});
    s += '\n';
  }
  return s;
}

std::vector<WordStats> ParseIwerCsv(std::string_view text,
                                    const std::string &origin) {
  std::vector<WordStats> out;
  int line_no = 0;
  for (const auto &line : SplitLines(text)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto f = ParseCsvLine(line);
    if (line_no == 1 && !f.empty() && f[0] == "word") continue;
    if (f.size() != 5)
      throw Error(ErrorCode::kMalformedLine, "expected 5 IWER columns", origin,
                  line_no);
    auto count = ParseInt(f[1]), subs = ParseInt(f[2]), dels = ParseInt(f[3]);
    auto iwer = ParseDouble(f[4]);
    auto words = Normalize(f[0]);
    if (!count || !subs || !dels || !iwer || words.size() != 1 || *count < 1 ||
        *iwer < 0.0 || *iwer > 1.0)
      throw Error(ErrorCode::kMalformedLine, "bad IWER row", origin, line_no);
    out.push_back({words[0], int(*count), int(*subs), int(*dels), *iwer});
  }
  return out;
}

}  // namespace avsr
