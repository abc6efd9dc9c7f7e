// src/pipeline.cc

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

#include "avsr/pipeline.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include "json.hpp"

#include "avsr/error.h"
#include "avsr/scoring.h"
#include "avsr/stats.h"
#include "avsr/util.h"

namespace avsr {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kModalities = {"ao", "av", "vo"};
const std::vector<std::string> kPositions = {"none", "initial", "middle"};

std::vector<double> ParseDoubleList(std::string_view v, const std::string &key,
                                    const std::string &origin, int line) {
  std::vector<double> out;
  for (const auto &part : Split(v, ',')) {
    auto d = ParseDouble(part);
    if (!d)
      throw Error(ErrorCode::kConfig,
                  "'" + key + "' must be a comma-separated list of numbers",
                  origin, line);
    out.push_back(*d);
  }
  return out;
}

fs::path Resolve(const fs::path &base, const std::string &p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

// File-name friendly version of a condition label.
std::string Slug(const std::string &s) {
  std::string out;
  for (char c : s) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
              c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

}  // namespace

std::string ExpandSnr(const std::string &pattern, double snr) {
  std::string out = pattern;
  const std::string key = "{snr}";
  for (std::size_t pos = out.find(key); pos != std::string::npos;
       pos = out.find(key, pos))
    out.replace(pos, key.size(), FormatExact(snr == 0.0 ? 0.0 : snr));
  return out;
}

EvalConfig ParseEvalConfig(std::string_view text, const std::string &origin,
                           const fs::path &base_dir) {
  EvalConfig c;
  c.base_dir = base_dir;
  c.source = origin;
  struct PathRef {
    std::string path;
    int line;
  };
  std::vector<PathRef> must_exist;
  std::map<std::string, int> seen_keys;
  int line_no = 0;

  for (const auto &raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string &why) {
      return Error(ErrorCode::kConfig, why, origin, line_no);
    };
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw fail("expected key = value");
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) throw fail("empty key");
    if (!seen_keys.emplace(key, line_no).second)
      throw fail("duplicate key '" + key + "'");
    auto parts = Split(key, '.');
    auto need = [&](std::size_t n) {
      if (parts.size() != n) throw fail("malformed key '" + key + "'");
      for (const auto &p : parts)
        if (p.empty()) throw fail("malformed key '" + key + "'");
    };
    auto integer = [&](long long lo) {
      auto v = ParseInt(value);
      if (!v || *v < lo) throw fail("'" + key + "' must be an integer >= " +
                                    std::to_string(lo));
      return *v;
    };

    if (key == "out") {
      c.out = value;
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(integer(0));
    } else if (key == "jobs") {
      c.jobs = static_cast<int>(integer(1));
    } else if (key == "snrs") {
      c.snrs = ParseDoubleList(value, key, origin, line_no);
    } else if (key == "ref_snrs") {
      c.ref_snrs = ParseDoubleList(value, key, origin, line_no);
    } else if (key == "min_count") {
      c.min_count = static_cast<int>(integer(1));
    } else if (parts[0] == "refs") {
      need(2);
      c.refs[parts[1]] = value;
      must_exist.push_back({value, line_no});
    } else if (parts[0] == "hyp") {
      need(4);
      if (!kModalities.count(parts[3]))
        throw fail("modality must be ao, av or vo, got '" + parts[3] + "'");
      c.hyps.push_back({parts[1], parts[2], parts[3], value, line_no});
    } else if (parts[0] == "curve") {
      need(4);
      if (!kModalities.count(parts[3]))
        throw fail("modality must be ao, av or vo, got '" + parts[3] + "'");
      c.curves.push_back({parts[1], parts[2], parts[3], value, line_no});
      must_exist.push_back({value, line_no});
    } else if (parts[0] == "occlusion" || parts[0] == "occlusion_wer") {
      need(4);
      if (std::find(kPositions.begin(), kPositions.end(), parts[3]) ==
          kPositions.end())
        throw fail("occlusion position must be none, initial or middle");
      auto &spec = c.occlusion[{parts[1], parts[2]}];
      if (spec.hyp_paths.count(parts[3]) || spec.wers.count(parts[3]))
        throw fail("occlusion position '" + parts[3] + "' given twice");
      if (parts[0] == "occlusion") {
        spec.hyp_paths[parts[3]] = value;
        must_exist.push_back({value, line_no});
      } else {
        auto v = ParseDouble(value);
        if (!v || *v < 0.0) throw fail("occlusion WER must be a number >= 0");
        spec.wers[parts[3]] = *v;
      }
    } else if (parts[0] == "occlusion_note") {
      need(3);
      c.occlusion[{parts[1], parts[2]}].note = value;
    } else if (key == "mafi.norms") {
      c.norms = value;
      must_exist.push_back({value, line_no});
    } else if (key == "mafi.pool_snrs") {
      if (value != "true" && value != "false")
        throw fail("mafi.pool_snrs must be true or false");
      c.pool_snrs = value == "true";
    } else if (key == "mafi.permutations") {
      c.permutations = static_cast<int>(integer(0));
      if (c.permutations != 0 && c.permutations < 1000)
        throw fail("mafi.permutations must be 0 or >= 1000");
    } else {
      throw fail("unknown key '" + key + "'");
    }
  }

  if (!c.hyps.empty() && c.snrs.empty())
    throw Error(ErrorCode::kConfig, "'snrs' is required with hyp.* entries",
                origin, 0);
  if (c.ref_snrs.empty())
    throw Error(ErrorCode::kConfig, "'ref_snrs' must not be empty", origin, 0);
  for (std::size_t k = 1; k < c.snrs.size(); ++k)
    if (!(c.snrs[k] > c.snrs[k - 1]))
      throw Error(ErrorCode::kConfig, "'snrs' must be strictly increasing",
                  origin, seen_keys["snrs"]);
  for (const auto &h : c.hyps) {
    if (!c.refs.count(h.dataset))
      throw Error(ErrorCode::kConfig,
                  "no refs." + h.dataset + " for hypothesis entry", origin,
                  h.line);
    if (c.snrs.size() > 1 && h.pattern.find("{snr}") == std::string::npos)
      throw Error(ErrorCode::kConfig,
                  "hypothesis path needs a {snr} placeholder when several "
                  "SNRs are configured",
                  origin, h.line);
    for (double snr : c.snrs)
      must_exist.push_back({ExpandSnr(h.pattern, snr), h.line});
  }
  for (const auto &[key, spec] : c.occlusion) {
    if (!spec.hyp_paths.empty() && !c.refs.count(key.first))
      throw Error(ErrorCode::kConfig,
                  "no refs." + key.first + " for occlusion hypotheses", origin,
                  0);
  }
  for (const auto &ref : must_exist)
    if (!fs::exists(Resolve(base_dir, ref.path)))
      throw Error(ErrorCode::kConfig,
                  "referenced file does not exist: " + ref.path, origin,
                  ref.line);
  return c;
}

EvalConfig LoadEvalConfig(const fs::path &path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error &e) {
    throw Error(ErrorCode::kConfig, e.what(), path.string(), 0);
  }
  return ParseEvalConfig(text, path.string(), path.parent_path());
}

std::string ErrorJson(const std::string &code, const std::string &message,
                      const std::string &file, int line) {
  json j;
  j["status"] = "error";
  j["code"] = code;
  j["message"] = message;
  j["file"] = file;
  j["line"] = line;
  return j.dump(2) + "\n";
}

// ---- run -----------------------------------------------------------------------

namespace {

class Bundle {
 public:
  explicit Bundle(fs::path dir) : dir_(std::move(dir)) {}

  void Emit(const std::string &rel, std::string_view content) {
    WriteFileAtomic(dir_ / rel, content);
    files_.push_back(rel);
  }

  void Trace(const std::string &output, const std::string &row,
             const std::string &operation, std::vector<std::string> inputs) {
    json e;
    e["output"] = output;
    e["row"] = row;
    e["operation"] = operation;
    e["inputs"] = std::move(inputs);
    provenance_.push_back(std::move(e));
  }

  std::vector<std::string> Finish() {
    json root;
    root["entries"] = provenance_;
    Emit("provenance.json", root.dump(2) + "\n");
    std::sort(files_.begin(), files_.end());
    return files_;
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
  json provenance_ = json::array();
};

std::string SnrText(std::optional<double> snr) {
  return snr ? FormatExact(*snr == 0.0 ? 0.0 : *snr) : "pooled";
}

std::string ConditionName(const std::string &ds, const std::string &sys,
                          const std::string &mod, std::optional<double> snr) {
  return Slug(ds) + "__" + Slug(sys) + "__" + mod + "__" + SnrText(snr);
}

json OptionalNumber(std::optional<double> v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

RunResult Run(const EvalConfig &config, const fs::path &out_dir, int jobs) {
  fs::create_directories(out_dir);
  Bundle bundle(out_dir);
  RunResult result;

  std::map<std::string, std::vector<Utterance>> refs;
  for (const auto &[ds, path] : config.refs)
    refs[ds] = ReadTranscripts(Resolve(config.base_dir, path));

  // 1. Score every (dataset, system, modality, snr) hypothesis file.
  struct Task {
    const HypSpec *spec;
    double snr;
    std::string path;
  };
  std::vector<Task> tasks;
  for (const auto &h : config.hyps)
    for (double snr : config.snrs) tasks.push_back({&h, snr, ExpandSnr(h.pattern, snr)});
  std::sort(tasks.begin(), tasks.end(), [](const Task &a, const Task &b) {
    return std::tie(a.spec->dataset, a.spec->system, a.spec->modality, a.snr) <
           std::tie(b.spec->dataset, b.spec->system, b.spec->modality, b.snr);
  });
  std::vector<std::vector<AlignmentResult>> alignments(tasks.size());
  std::vector<std::string> alignment_csv(tasks.size());
  result.conditions.resize(tasks.size());
  ParallelFor(tasks.size(), jobs, [&](std::size_t k) {
    const Task &t = tasks[k];
    const auto &ds_refs = refs.at(t.spec->dataset);
    std::vector<Utterance> hyps;
    try {
      hyps = ReadTranscripts(Resolve(config.base_dir, t.path));
    } catch (const Error &e) {
      throw Error(e.code(), e.what(), t.path, e.line());
    }
    std::vector<ScoredUtterance> scored;
    try {
      scored = ScoreCorpus(ds_refs, hyps, 1);
    } catch (const Error &e) {
      throw Error(e.code(), e.what(), t.path, 0);
    }
    alignment_csv[k] = AlignmentCsv(scored);
    ConditionResult &c = result.conditions[k];
    c = {t.spec->dataset, t.spec->system, t.spec->modality, t.snr, t.path};
    for (auto &s : scored) {
      c.subs += s.alignment.subs;
      c.dels += s.alignment.dels;
      c.ins += s.alignment.ins;
      c.n += s.alignment.n();
      alignments[k].push_back(std::move(s.alignment));
    }
    try {
      c.wer = CorpusWer(alignments[k]);
    } catch (const Error &e) {
      throw Error(e.code(), e.what(), config.refs.at(t.spec->dataset), 0);
    }
  });

  Table wer_table{{"dataset", "system", "modality", "snr_db", "wer", "S", "D",
                   "I", "N"},
                  {}};
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    const auto &c = result.conditions[k];
    const std::string name = ConditionName(c.dataset, c.system, c.modality, c.snr);
    bundle.Emit("alignments/" + name + ".csv", alignment_csv[k]);
    bundle.Emit("iwer/" + name + ".csv", IwerCsv(IwerTable(alignments[k], 1)));
    wer_table.rows.push_back({c.dataset, c.system, c.modality, SnrText(c.snr),
                              FormatFixed(c.wer, 1), std::to_string(c.subs),
                              std::to_string(c.dels), std::to_string(c.ins),
                              std::to_string(c.n)});
    const std::string ref_path = config.refs.at(c.dataset);
    bundle.Trace("wer_table.csv", std::to_string(k + 1), "CorpusWer(Align)",
                 {ref_path, c.hyp_path});
    bundle.Trace("alignments/" + name + ".csv", "*", "Align",
                 {ref_path, c.hyp_path});
    bundle.Trace("iwer/" + name + ".csv", "*", "IwerTable(min_count=1)",
                 {ref_path, c.hyp_path});
  }
  bundle.Emit("wer_table.csv", RenderTable(wer_table, TableStyle::kCsv));
  bundle.Emit("wer_table.md", RenderTable(wer_table, TableStyle::kMarkdown));

  // 2. Curves per (dataset, system, modality).
  using CurveKey = std::tuple<std::string, std::string, std::string>;
  std::map<CurveKey, WerCurve> curves;
  std::map<CurveKey, std::vector<std::string>> curve_inputs;
  std::map<CurveKey, std::string> curve_errors;
  {
    std::map<CurveKey, std::vector<CurvePoint>> pts;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      const auto &c = result.conditions[k];
      CurveKey key{c.dataset, c.system, c.modality};
      pts[key].push_back({*c.snr, c.wer});
      curve_inputs[key].push_back(c.hyp_path);
    }
    for (auto &[key, p] : pts) {
      if (p.size() < 2) continue;
      try {
        curves.emplace(key, WerCurve(p, std::get<1>(key) + " " +
                                            std::get<2>(key)));
      } catch (const Error &e) {
        curve_errors[key] = std::string(ErrorCodeName(e.code())) + ": " + e.what();
      }
    }
    for (const auto &cs : config.curves) {
      CurveKey key{cs.dataset, cs.system, cs.modality};
      if (curves.count(key) || pts.count(key))
        throw Error(ErrorCode::kConfig,
                    "curve for " + cs.dataset + "/" + cs.system + "/" +
                        cs.modality + " given twice",
                    config.source, cs.line);
      WerCurve file_curve = ReadCurveCsv(Resolve(config.base_dir, cs.path));
      curves.emplace(key, WerCurve(file_curve.points(),
                                   cs.system + " " + cs.modality));
      curve_inputs[key] = {cs.path};
    }
  }
  json curves_json = json::array();
  for (const auto &[key, curve] : curves) {
    const auto &[ds, sys, mod] = key;
    const std::string rel =
        "curves/" + Slug(ds) + "__" + Slug(sys) + "__" + mod + ".csv";
    bundle.Emit(rel, CurveCsv(curve));
    bundle.Trace(rel, "*", "WerCurve", curve_inputs[key]);
    json pts = json::array();
    for (const auto &p : curve.points()) pts.push_back({p.snr_db, p.wer});
    curves_json.push_back(
        {{"dataset", ds}, {"system", sys}, {"modality", mod}, {"points", pts}});
  }

  // 3. Effective SNR gains.
  std::vector<SystemCurves> systems;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto &[key, curve] : curves)
    pairs.insert({std::get<0>(key), std::get<1>(key)});
  for (const auto &[key, err] : curve_errors)
    pairs.insert({std::get<0>(key), std::get<1>(key)});
  for (const auto &[ds, sys] : pairs) {
    auto ao = curves.find({ds, sys, "ao"});
    auto av = curves.find({ds, sys, "av"});
    if (ao != curves.end() && av != curves.end()) {
      systems.push_back({sys, ds, ao->second, av->second});
    } else if (curve_errors.count({ds, sys, "ao"}) ||
               curve_errors.count({ds, sys, "av"})) {
      for (double ref : config.ref_snrs) {
        GainCell cell{sys, ds, ref, std::nullopt, {}};
        auto it = curve_errors.find({ds, sys, "ao"});
        if (it == curve_errors.end()) it = curve_errors.find({ds, sys, "av"});
        cell.error = it->second;
        result.gains.push_back(std::move(cell));
      }
    }
  }
  for (auto &cell : GainReport(systems, config.ref_snrs)) {
    if (cell.result && cell.result->ref_wer == 0.0) {
      cell.result.reset();
      cell.error = "undefined: audio-only WER at the reference SNR is 0";
    }
    result.gains.push_back(std::move(cell));
  }
  std::stable_sort(result.gains.begin(), result.gains.end(),
                   [](const GainCell &a, const GainCell &b) {
                     return std::tie(a.dataset, a.system) <
                            std::tie(b.dataset, b.system);
                   });
  Table gain_table{{"dataset", "system", "ref_snr_db", "ref_wer",
                    "crossing_snr_db", "gain_db", "bounded", "status"},
                   {}};
  json gains_json = json::array();
  for (std::size_t k = 0; k < result.gains.size(); ++k) {
    const auto &g = result.gains[k];
    const std::string ref = FormatExact(g.ref_snr_db == 0.0 ? 0.0 : g.ref_snr_db);
    json j{{"dataset", g.dataset}, {"system", g.system}, {"ref_snr_db", g.ref_snr_db}};
    if (g.result) {
      gain_table.rows.push_back(
          {g.dataset, g.system, ref, FormatFixed(g.result->ref_wer, 1),
           FormatFixed(g.result->crossing_snr_db, 1),
           FormatFixed(g.result->gain_db, 1), g.result->bounded ? "yes" : "no",
           "ok"});
      j["ref_wer"] = g.result->ref_wer;
      j["crossing_snr_db"] = g.result->crossing_snr_db;
      j["gain_db"] = g.result->gain_db;
      j["bounded"] = g.result->bounded;
    } else {
      gain_table.rows.push_back({g.dataset, g.system, ref, "", "", "", "", g.error});
      j["error"] = g.error;
    }
    gains_json.push_back(std::move(j));
    std::vector<std::string> inputs;
    for (const char *mod : {"ao", "av"}) {
      auto it = curve_inputs.find({g.dataset, g.system, mod});
      if (it != curve_inputs.end())
        inputs.insert(inputs.end(), it->second.begin(), it->second.end());
    }
    bundle.Trace("gains.csv", std::to_string(k + 1), "EffectiveSnrGain",
                 std::move(inputs));
  }
  bundle.Emit("gains.csv", RenderTable(gain_table, TableStyle::kCsv));
  bundle.Emit("gains.md", RenderTable(gain_table, TableStyle::kMarkdown));

  // 4. Occlusion comparison.
  json occlusion_json = json::array();
  if (!config.occlusion.empty()) {
    Table occ{{"dataset", "system", "none", "initial", "middle",
               "initial_increase", "middle_increase", "note"},
              {}};
    for (const auto &[key, spec] : config.occlusion) {
      OcclusionRow row{key.first, key.second, {}, std::nullopt, std::nullopt,
                       spec.note};
      std::vector<std::string> inputs;
      for (const auto &[pos, wer] : spec.wers) {
        row.wer[pos] = wer;
        inputs.push_back(config.source + ":occlusion_wer." + key.first + "." +
                         key.second + "." + pos);
      }
      for (const auto &[pos, path] : spec.hyp_paths) {
        auto hyps = ReadTranscripts(Resolve(config.base_dir, path));
        auto scored = ScoreCorpus(refs.at(key.first), hyps, jobs);
        std::vector<AlignmentResult> al;
        for (auto &s : scored) al.push_back(std::move(s.alignment));
        row.wer[pos] = CorpusWer(al);
        inputs.push_back(config.refs.at(key.first));
        inputs.push_back(path);
      }
      auto none = row.wer.find("none");
      if (none != row.wer.end() && none->second > 0.0) {
        if (row.wer.count("initial"))
          row.initial_increase = RelativeIncrease(none->second, row.wer["initial"]);
        if (row.wer.count("middle"))
          row.middle_increase = RelativeIncrease(none->second, row.wer["middle"]);
      }
      auto cell = [&](const std::string &pos) {
        auto it = row.wer.find(pos);
        return it == row.wer.end() ? std::string() : FormatFixed(it->second, 1);
      };
      auto pct = [](std::optional<double> v) {
        return v ? FormatFixed(*v, 1) + "%" : std::string();
      };
      occ.rows.push_back({row.dataset, row.system, cell("none"), cell("initial"),
                          cell("middle"), pct(row.initial_increase),
                          pct(row.middle_increase), row.note});
      bundle.Trace("occlusion.csv", std::to_string(occ.rows.size()),
                   "CorpusWer + RelativeIncrease", inputs);
      json j{{"dataset", row.dataset}, {"system", row.system}};
      for (const auto &pos : kPositions) {
        auto it = row.wer.find(pos);
        j["wer_" + pos] = it == row.wer.end() ? json(nullptr) : json(it->second);
      }
      j["initial_increase"] = OptionalNumber(row.initial_increase);
      j["middle_increase"] = OptionalNumber(row.middle_increase);
      j["note"] = row.note;
      occlusion_json.push_back(std::move(j));
      result.occlusion.push_back(std::move(row));
    }
    bundle.Emit("occlusion.csv", RenderTable(occ, TableStyle::kCsv));
    bundle.Emit("occlusion.md", RenderTable(occ, TableStyle::kMarkdown));
  }

  // 5. MaFI / IWER correlations.
  json corr_json = json::array();
  if (config.norms) {
    const auto norms = LoadNorms(Resolve(config.base_dir, *config.norms));
    struct Group {
      std::string ds, sys, mod;
      std::optional<double> snr;
      std::vector<AlignmentResult> al;
      std::vector<std::string> inputs;
    };
    std::vector<Group> groups;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
      const auto &c = result.conditions[k];
      groups.push_back({c.dataset, c.system, c.modality, c.snr, alignments[k],
                        {config.refs.at(c.dataset), c.hyp_path}});
    }
    if (config.pool_snrs) {
      std::map<CurveKey, Group> pooled;
      for (std::size_t k = 0; k < tasks.size(); ++k) {
        const auto &c = result.conditions[k];
        auto &g = pooled[{c.dataset, c.system, c.modality}];
        g.ds = c.dataset, g.sys = c.system, g.mod = c.modality;
        g.al.insert(g.al.end(), alignments[k].begin(), alignments[k].end());
        if (g.inputs.empty()) g.inputs.push_back(config.refs.at(c.dataset));
        g.inputs.push_back(c.hyp_path);
      }
      for (auto &[key, g] : pooled) groups.push_back(std::move(g));
    }
    result.correlations.resize(groups.size());
    ParallelFor(groups.size(), jobs, [&](std::size_t k) {
      const Group &g = groups[k];
      CorrelationRow &row = result.correlations[k];
      row = {g.ds, g.sys, g.mod, SnrText(g.snr), std::nullopt, std::nullopt, {}};
      try {
        auto table = IwerTable(g.al, 1);
        row.result = Correlate(norms, table, config.min_count);
        if (config.permutations > 0) {
          auto pairs = PairScores(norms, table, config.min_count);
          row.permutation_p = PermutationP(pairs.mafi, pairs.iwer,
                                           config.permutations,
                                           MixSeed(config.seed, k), 1);
        }
      } catch (const Error &e) {
        row.result.reset();
        row.error = std::string(ErrorCodeName(e.code())) + ": " + e.what();
      }
    });
    Table corr{{"dataset", "system", "modality", "snr_db", "r", "n", "p",
                "cell"},
               {}};
    if (config.permutations > 0) corr.header.push_back("permutation_p");
    corr.header.push_back("status");
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const auto &row = result.correlations[k];
      std::vector<std::string> cells{row.dataset, row.system, row.modality, row.snr};
      json j{{"dataset", row.dataset}, {"system", row.system},
             {"modality", row.modality}, {"snr_db", row.snr}};
      if (row.result) {
        cells.push_back(FormatFixed(row.result->r, 3));
        cells.push_back(std::to_string(row.result->n));
        cells.push_back(FormatFixed(row.result->p, 4));
        cells.push_back(row.result->Formatted());
        j["r"] = row.result->r;
        j["n"] = row.result->n;
        j["p"] = row.result->p;
        j["stars"] = row.result->stars;
        j["degenerate"] = row.result->degenerate;
      } else {
        cells.insert(cells.end(), {"", "", "", ""});
        j["error"] = row.error;
      }
      if (config.permutations > 0) {
        cells.push_back(row.permutation_p ? FormatFixed(*row.permutation_p, 4)
                                          : std::string());
        j["permutation_p"] = OptionalNumber(row.permutation_p);
      }
      cells.push_back(row.result ? "ok" : row.error);
      corr.rows.push_back(std::move(cells));
      corr_json.push_back(std::move(j));
      auto inputs = groups[k].inputs;
      inputs.push_back(*config.norms);
      bundle.Trace("correlations.csv", std::to_string(k + 1),
                   "IwerTable + Correlate(Pearson, PValueForR)", inputs);
    }
    bundle.Emit("correlations.csv", RenderTable(corr, TableStyle::kCsv));
    bundle.Emit("correlations.md", RenderTable(corr, TableStyle::kMarkdown));
    bundle.Emit("correlations.json", json(corr_json).dump(2) + "\n");
    bundle.Trace("correlations.json", "*", "same rows as correlations.csv",
                 {*config.norms});
  }

  // 6. Plots, one per dataset, annotated with gains at the first ref SNR.
  std::map<std::string, std::vector<WerCurve>> by_dataset;
  for (const auto &[key, curve] : curves)
    by_dataset[std::get<0>(key)].push_back(curve);
  for (const auto &[ds, ds_curves] : by_dataset) {
    std::vector<GainResult> ds_gains;
    for (const auto &g : result.gains)
      if (g.dataset == ds && g.result && g.ref_snr_db == config.ref_snrs.front())
        ds_gains.push_back(*g.result);
    PlotOptions opts;
    opts.title = ds;
    const std::string rel = "plots/" + Slug(ds) + ".svg";
    bundle.Emit(rel, RenderCurvesSvg(ds_curves, ds_gains, opts));
    std::vector<std::string> inputs;
    for (const auto &[key, in] : curve_inputs)
      if (std::get<0>(key) == ds) inputs.insert(inputs.end(), in.begin(), in.end());
    bundle.Trace(rel, "*", "RenderCurvesSvg", inputs);
  }

  // 7. Full-precision results.
  json root;
  root["status"] = "ok";
  root["config"] = config.source;
  json conds = json::array();
  for (const auto &c : result.conditions)
    conds.push_back({{"dataset", c.dataset}, {"system", c.system},
                     {"modality", c.modality}, {"snr_db", OptionalNumber(c.snr)},
                     {"hyp", c.hyp_path}, {"wer", c.wer}, {"S", c.subs},
                     {"D", c.dels}, {"I", c.ins}, {"N", c.n}});
  root["conditions"] = std::move(conds);
  root["curves"] = std::move(curves_json);
  root["gains"] = std::move(gains_json);
  root["occlusion"] = std::move(occlusion_json);
  root["correlations"] = std::move(corr_json);
  bundle.Emit("results.json", root.dump(2) + "\n");

  result.files = bundle.Finish();
  return result;
}

}  // namespace avsr
