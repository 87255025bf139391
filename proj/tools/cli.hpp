// Copyright 2026 The vsummkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. dispatch() is kept in a header so the test suite
// can drive it in-process.
//
// Exit codes: 0 success, 1 validation violations or bad input data,
// 2 usage errors (unknown flags, missing files).

#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vsummkit/config_search.hpp"
#include "vsummkit/io.hpp"
#include "vsummkit/learner.hpp"
#include "vsummkit/normalize.hpp"
#include "vsummkit/planted.hpp"
#include "vsummkit/summarizer.hpp"
#include "vsummkit/synth.hpp"

#ifndef VSUMMKIT_VERSION
#define VSUMMKIT_VERSION "0.0.0"
#endif

namespace vsummkit::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kViolations = 1, kUsage = 2 };

// Reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void log(const std::string& msg) { std::cerr << "vsummkit: " << msg << "\n"; }

inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

inline std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

// ---------------------------------------------------------------------------
// Files

inline void require_file(const std::string& flag, const fs::path& p) {
  if (!fs::is_regular_file(p))
    throw UsageError(flag + ": no such file '" + p.string() + "' (check the path or generate it first)");
}

inline void require_dir(const std::string& flag, const fs::path& p) {
  if (!fs::is_directory(p))
    throw UsageError(flag + ": no such directory '" + p.string() + "' (check the path or generate it first)");
}

// *.json files under dir, sorted by path, manifests excluded.
inline std::vector<fs::path> json_files(const fs::path& dir, bool recursive = false) {
  std::vector<fs::path> out;
  auto take = [&](const fs::directory_entry& e) {
    if (e.is_regular_file() && e.path().extension() == ".json" && e.path().filename() != "manifest.json")
      out.push_back(e.path());
  };
  if (recursive)
    for (const auto& e : fs::recursive_directory_iterator(dir)) take(e);
  else
    for (const auto& e : fs::directory_iterator(dir)) take(e);
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  return out;
}

// Re-throws parse failures with the file name attached.
template <class Fn>
auto load_from(const fs::path& p, Fn&& fn) {
  try {
    return fn(p);
  } catch (const ParseError& e) {
    throw ParseError(p.generic_string() + ":" + e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
}

inline void emit(const std::optional<std::string>& out, const std::string& text) {
  if (out) write_file(*out, text);
  else std::cout << text;
}

// ---------------------------------------------------------------------------
// Run manifest

class Manifest {
 public:
  Manifest(std::string command, std::optional<std::uint64_t> seed = std::nullopt)
      : command_(std::move(command)), seed_(seed), start_(std::chrono::steady_clock::now()) {}

  Json config = Json::object();
  Json extra = Json::object();

  // Records the content digest of an input, keyed by its path as given.
  std::string input(const fs::path& p) {
    std::string text = read_file(p);
    inputs_[p.generic_string()] = sha256_hex(text);
    return text;
  }

  void write(const fs::path& dir) const {
    Json j = extra;
    j["command"] = command_;
    j["version"] = VSUMMKIT_VERSION;
    j["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    j["config"] = config;
    Json ins = Json::array();
    for (const auto& [path, digest] : inputs_) ins.push_back({{"path", path}, {"sha256", digest}});
    j["inputs"] = ins;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    j["timings"] = {{"total_sec", secs}};
    write_file(dir / "manifest.json", dump_canonical(j));
  }

 private:
  std::string command_;
  std::optional<std::uint64_t> seed_;
  std::chrono::steady_clock::time_point start_;
  std::map<std::string, std::string> inputs_;
};

// ---------------------------------------------------------------------------
// Shared loaders

struct LoadedVideos {
  RatingMap ratings;
  std::vector<Annotation> annotations;  // ordered by video_id
  std::vector<std::string> paths;
};

inline RatingMap load_ratings(const fs::path& p, Manifest* m) {
  return load_from(p, [&](const fs::path& q) { return parse_rating_map(m ? m->input(q) : read_file(q)); });
}

inline Annotation load_annotation_file(const fs::path& p, Manifest* m) {
  return load_from(p, [&](const fs::path& q) { return parse_annotation(m ? m->input(q) : read_file(q)); });
}

inline Summary load_summary_file(const fs::path& p, Manifest* m) {
  return load_from(p, [&](const fs::path& q) { return parse_summary(m ? m->input(q) : read_file(q)); });
}

inline std::vector<std::pair<Annotation, std::string>> load_annotations_dir(const fs::path& dir, Manifest* m) {
  std::vector<std::pair<Annotation, std::string>> out;
  std::set<std::string> ids;
  for (const auto& p : json_files(dir)) {
    Annotation a = load_annotation_file(p, m);
    if (!ids.insert(a.video_id).second)
      throw std::invalid_argument("duplicate video_id '" + a.video_id + "' in " + dir.generic_string());
    out.emplace_back(std::move(a), p.generic_string());
  }
  if (out.empty()) throw UsageError("no annotation files in '" + dir.generic_string() + "'");
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first.video_id < b.first.video_id; });
  return out;
}

// Summaries under dir grouped by video_id, each group in path order.
inline std::map<std::string, std::vector<std::pair<Summary, std::string>>> load_summaries_dir(const fs::path& dir,
                                                                                              Manifest* m) {
  std::map<std::string, std::vector<std::pair<Summary, std::string>>> out;
  for (const auto& p : json_files(dir, true)) {
    Summary s = load_summary_file(p, m);
    out[s.video_id].emplace_back(std::move(s), p.generic_string());
  }
  return out;
}

inline RecallDenominator parse_recall(const std::string& s) {
  if (s == "reference") return RecallDenominator::kReference;
  if (s == "video") return RecallDenominator::kVideo;
  throw UsageError("--recall-denominator: expected 'reference' or 'video', got '" + s + "'");
}

inline Json measures_json(const MeasureArray& a) {
  Json j = Json::object();
  for (auto m : kAllMeasures) j[std::string(measure_name(m))] = at(a, m);
  return j;
}

struct BudgetFlags {
  std::optional<double> frac;
  std::optional<std::size_t> count;

  void add_to(CLI::App* sub) {
    auto* g = sub->add_option_group("budget", "summary length");
    g->add_option("--budget-frac", frac, "fraction of the video's snippets, in (0, 1]");
    g->add_option("--budget-count", count, "absolute snippet count");
    g->require_option(1);
  }
  Budget resolve() const { return frac ? Budget::fraction(*frac) : Budget::count(*count); }
  Json to_json() const { return frac ? Json{{"fraction", *frac}} : Json{{"count", *count}}; }
};

// Component paths in a model are relative to the model file.
inline void rebase_paths(std::vector<ComponentSpec>& comps, const fs::path& from_dir) {
  for (auto& c : comps)
    if (!c.path.empty() && fs::path(c.path).is_relative()) c.path = (from_dir / c.path).lexically_normal().generic_string();
}

inline void relativize_paths(std::vector<ComponentSpec>& comps, const fs::path& to_dir) {
  const fs::path base = fs::absolute(to_dir).lexically_normal();
  for (auto& c : comps)
    if (!c.path.empty()) c.path = fs::absolute(c.path).lexically_normal().lexically_relative(base).generic_string();
}

inline fs::path parent_dir(const fs::path& file) {
  const fs::path p = file.parent_path();
  return p.empty() ? fs::path(".") : p;
}

inline ComponentInputs file_inputs(Manifest* m) {
  ComponentInputs in;
  in.similarity = [m](const ComponentSpec& c, const VideoIndex& v) {
    const fs::path p = substitute_video_id(c.path, v.video_id());
    require_file("similarity", p);
    return load_from(p, [&](const fs::path& q) { return SimilarityMatrix::parse(m ? m->input(q) : read_file(q)); });
  };
  in.scores = [m](const ComponentSpec& c, const VideoIndex& v) {
    const fs::path p = substitute_video_id(c.path, v.video_id());
    require_file("scores_file", p);
    SnippetScores s = load_from(p, [&](const fs::path& q) { return parse_scores(m ? m->input(q) : read_file(q)); });
    if (s.video_id != v.video_id())
      throw std::invalid_argument(p.generic_string() + ": scores for '" + s.video_id + "', expected '" + v.video_id() + "'");
    return s.scores;
  };
  return in;
}

// ---------------------------------------------------------------------------
// Subcommands

struct ValidateArgs {
  std::vector<std::string> annotations;
  std::optional<std::string> annotations_dir;
  std::string ratings;
  std::vector<std::string> domains;
  std::optional<std::string> out;
};

inline int run_validate(const ValidateArgs& args) {
  require_file("--ratings", args.ratings);
  std::vector<fs::path> files(args.annotations.begin(), args.annotations.end());
  for (const auto& f : files) require_file("--annotation", f);
  if (args.annotations_dir) {
    require_dir("--annotations", *args.annotations_dir);
    for (auto& p : json_files(*args.annotations_dir)) files.push_back(p);
  }
  if (files.empty()) throw UsageError("validate: give --annotation FILE or --annotations DIR");

  Json report_files = Json::array();
  std::size_t total = 0;
  auto record = [&](const std::string& path, const std::string& video_id, Json violations) {
    total += violations.size();
    report_files.push_back({{"path", path}, {"video_id", video_id}, {"violations", std::move(violations)}});
  };

  std::optional<RatingMap> ratings;
  try {
    ratings = load_ratings(args.ratings, nullptr);
  } catch (const ParseError& e) {
    record(fs::path(args.ratings).generic_string(), "", Json::array({{{"code", "PARSE_ERROR"}, {"location", e.path()}, {"detail", e.what()}}}));
  }
  ValidateOptions opts{args.domains};
  for (const auto& f : files) {
    try {
      const Annotation a = load_annotation_file(f, nullptr);
      Json vs = Json::array();
      if (ratings)
        for (const auto& v : validate(a, *ratings, opts))
          vs.push_back({{"code", std::string(to_string(v.code))}, {"location", v.location}, {"detail", v.detail}});
      record(f.generic_string(), a.video_id, std::move(vs));
    } catch (const ParseError& e) {
      record(f.generic_string(), "", Json::array({{{"code", "PARSE_ERROR"}, {"location", e.path()}, {"detail", e.what()}}}));
    }
  }
  emit(args.out, dump_canonical({{"files", report_files}, {"violation_count", total}}));
  if (total > 0) log(std::to_string(total) + " violation(s)");
  return total > 0 ? kViolations : kOk;
}

struct ScoreArgs {
  std::optional<std::string> annotation, annotations_dir, summary, summaries_dir, references, out, technique;
  std::string ratings;
  double tau = 1.0;
  std::string recall = "reference";
};

inline Json score_report(const Summary& x, const std::string& summary_ref, const VideoIndex& v,
                         const std::vector<std::pair<Summary, std::string>>* refs, RecallDenominator recall,
                         const std::optional<std::string>& technique) {
  check_summary(x, v.annotation());
  const MeasureVector mv = measure_vector(x, v);
  Json j = {{"video_id", x.video_id},
            {"domain", v.annotation().domain},
            {"summary_ref", summary_ref},
            {"budget", x.size()},
            {"raw", measures_json(mv.raw)},
            {"normalized", measures_json(mv.normalized)}};
  if (technique) j["technique"] = *technique;
  if (refs && !refs->empty()) {
    std::vector<Summary> rs;
    Json names = Json::array();
    for (const auto& [s, path] : *refs) {
      rs.push_back(s);
      names.push_back(path);
    }
    const F1Stats st = f1_stats(x, rs, v.annotation(), recall);
    j["f1"] = {{"avg", st.avg}, {"max", st.max}, {"per_reference", st.per_reference}, {"references", names}};
  }
  return j;
}

inline int run_score(const ScoreArgs& args) {
  const bool single = args.annotation || args.summary;
  const bool batch = args.annotations_dir || args.summaries_dir;
  if (single == batch || (single && !(args.annotation && args.summary)) ||
      (batch && !(args.annotations_dir && args.summaries_dir)))
    throw UsageError("score: give --annotation and --summary, or --annotations DIR and --summaries DIR");
  if (batch && !args.out) throw UsageError("score: --out DIR is required with --summaries DIR");
  const RecallDenominator recall = parse_recall(args.recall);
  require_file("--ratings", args.ratings);
  if (args.references) require_dir("--references", *args.references);

  Manifest manifest("score");
  Manifest* m = batch ? &manifest : nullptr;
  const RatingMap ratings = load_ratings(args.ratings, m);
  std::map<std::string, std::vector<std::pair<Summary, std::string>>> refs;
  if (args.references) refs = load_summaries_dir(*args.references, m);
  auto refs_for = [&](const std::string& id) -> const std::vector<std::pair<Summary, std::string>>* {
    if (!args.references) return nullptr;
    auto it = refs.find(id);
    if (it == refs.end()) {
      log("no references for '" + id + "'; f1 omitted");
      return nullptr;
    }
    return &it->second;
  };

  if (single) {
    require_file("--annotation", *args.annotation);
    require_file("--summary", *args.summary);
    const VideoIndex v(load_annotation_file(*args.annotation, nullptr), ratings, args.tau);
    const Summary x = load_summary_file(*args.summary, nullptr);
    if (x.video_id != v.video_id())
      throw std::invalid_argument("summary is for '" + x.video_id + "' but the annotation is '" + v.video_id() + "'");
    emit(args.out, dump_canonical(score_report(x, fs::path(*args.summary).generic_string(), v, refs_for(x.video_id),
                                               recall, args.technique)));
    return kOk;
  }

  require_dir("--annotations", *args.annotations_dir);
  require_dir("--summaries", *args.summaries_dir);
  std::map<std::string, VideoIndex> videos;
  for (auto& [a, path] : load_annotations_dir(*args.annotations_dir, m)) {
    const std::string id = a.video_id;
    videos.emplace(id, VideoIndex(std::move(a), ratings, args.tau));
  }
  const fs::path out_dir = *args.out;
  std::size_t written = 0;
  for (const auto& p : json_files(*args.summaries_dir)) {
    const Summary x = load_summary_file(p, m);
    auto it = videos.find(x.video_id);
    if (it == videos.end()) throw std::invalid_argument(p.generic_string() + ": no annotation for '" + x.video_id + "'");
    write_file(out_dir / p.filename(), dump_canonical(score_report(x, p.generic_string(), it->second,
                                                                    refs_for(x.video_id), recall, args.technique)));
    ++written;
  }
  manifest.config = {{"tau", args.tau}, {"recall_denominator", args.recall}, {"reports", written}};
  if (args.technique) manifest.config["technique"] = *args.technique;
  manifest.write(out_dir);
  log("scored " + std::to_string(written) + " summaries");
  return kOk;
}

struct GtGenArgs {
  std::string annotation, ratings, lambda;
  BudgetFlags budget;
  double tau = 1.0;
  std::optional<std::string> out;
};

inline int run_gt_gen(const GtGenArgs& args) {
  require_file("--annotation", args.annotation);
  require_file("--ratings", args.ratings);
  LambdaConfig lambda;
  try {
    lambda = LambdaConfig::parse(args.lambda);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--lambda: ") + e.what());
  }
  const VideoIndex v(load_annotation_file(args.annotation, nullptr), load_ratings(args.ratings, nullptr), args.tau);
  emit(args.out, serialize(greedy_select(v, lambda, args.budget.resolve())));
  return kOk;
}

struct LambdaSearchArgs {
  std::string mode, annotations_dir, ratings, range = "0.01:0.05", out;
  std::size_t count = 100;
  std::uint64_t seed = 0;
  double tau = 1.0;
};

inline BudgetRange parse_range(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
    BudgetRange r{std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    r.check();
    return r;
  } catch (const std::exception& e) {
    throw UsageError("--budget-frac-range: expected LO:HI with 0 < LO <= HI <= 1, got '" + s + "' (" + e.what() + ")");
  }
}

inline int run_lambda_search(const LambdaSearchArgs& args) {
  BankMode mode;
  if (args.mode == "pareto") mode = BankMode::kPareto;
  else if (args.mode == "propfair") mode = BankMode::kPropFair;
  else throw UsageError("--mode: expected 'pareto' or 'propfair', got '" + args.mode + "'");
  if (args.count == 0) throw UsageError("--count must be >= 1");
  const BudgetRange range = parse_range(args.range);
  require_dir("--annotations", args.annotations_dir);
  require_file("--ratings", args.ratings);

  Manifest manifest("lambda-search", args.seed);
  const RatingMap ratings = load_ratings(args.ratings, &manifest);
  std::vector<VideoIndex> videos;
  for (auto& [a, path] : load_annotations_dir(args.annotations_dir, &manifest))
    videos.emplace_back(std::move(a), ratings, args.tau);

  const auto grid = lambda_grid();
  log("evaluating " + std::to_string(grid.size()) + " configurations on " + std::to_string(videos.size()) + " videos");
  const ReferenceBank bank = generate_reference_bank(videos, grid, range, mode, args.count, args.seed);

  const fs::path out_dir = args.out;
  Json entries = Json::array();
  for (std::size_t vi = 0; vi < videos.size(); ++vi) {
    for (std::size_t i = 0; i < bank.per_video[vi].size(); ++i) {
      const BankEntry& e = bank.per_video[vi][i];
      char name[32];
      std::snprintf(name, sizeof name, "__%03zu.json", i);
      const std::string file = videos[vi].video_id() + name;
      write_file(out_dir / file, serialize(e.summary));
      const auto w = e.config.weights();
      entries.push_back({{"file", file},
                         {"video_id", e.summary.video_id},
                         {"lambda", std::vector<double>(w.begin(), w.end())},
                         {"config_grid_index", e.config_grid_index},
                         {"budget_fraction", e.budget_fraction},
                         {"budget", e.budget},
                         {"raw", measures_json(e.measures.raw)},
                         {"normalized", measures_json(e.measures.normalized)}});
    }
  }
  if (bank.short_of_count) log("warning: some videos received fewer than " + std::to_string(args.count) + " distinct summaries");
  manifest.config = {{"mode", args.mode},
                     {"budget_frac_range", {range.lo, range.hi}},
                     {"count", args.count},
                     {"tau", args.tau},
                     {"grid_size", grid.size()}};
  manifest.extra = {{"entries", entries}, {"front_size", bank.front_size}, {"short_of_count", bank.short_of_count}};
  manifest.write(out_dir);
  log("wrote " + std::to_string(entries.size()) + " summaries to " + out_dir.generic_string());
  return kOk;
}

struct TrainArgs {
  std::string corpus, gt_bank, config, out;
  std::optional<std::string> ratings;
  bool combined_gt = false;
};

struct CorpusLayout {
  fs::path ratings, annotations;
};

inline CorpusLayout corpus_layout(const fs::path& dir, const std::optional<std::string>& ratings) {
  require_dir("--corpus", dir);
  CorpusLayout c;
  c.ratings = ratings ? fs::path(*ratings) : dir / "ratings.json";
  require_file("--ratings", c.ratings);
  c.annotations = fs::is_directory(dir / "annotations") ? dir / "annotations" : dir;
  return c;
}

inline TrainConfig train_config_from_json(const Json& j, std::vector<ComponentSpec>& components) {
  using namespace detail;
  TrainConfig cfg;
  const auto& comps = as_array(require(j, "components", ""), "/components");
  for (std::size_t i = 0; i < comps.size(); ++i)
    components.push_back(component_from_json(comps[i], "/components/" + std::to_string(i)));
  if (components.empty()) throw ParseError("/components", "at least one component is required");
  if (j.contains("lambda_reg")) cfg.lambda_reg = as_number(j.at("lambda_reg"), "/lambda_reg");
  if (j.contains("epochs")) cfg.epochs = static_cast<std::size_t>(as_index(j.at("epochs"), "/epochs"));
  if (j.contains("eta0")) cfg.eta0 = as_number(j.at("eta0"), "/eta0");
  if (j.contains("combined_gt")) {
    if (!j.at("combined_gt").is_boolean()) throw ParseError("/combined_gt", "expected boolean");
    cfg.combined_gt = j.at("combined_gt").get<bool>();
  }
  if (j.contains("inner")) {
    const std::string inner = as_string(j.at("inner"), "/inner");
    if (inner == "greedy") cfg.inner = InnerMax::kGreedy;
    else if (inner == "exhaustive") cfg.inner = InnerMax::kExhaustive;
    else throw ParseError("/inner", "expected 'greedy' or 'exhaustive'");
  }
  if (j.contains("beta")) {
    const auto& b = j.at("beta");
    if (!b.is_object()) throw ParseError("/beta", "expected object keyed by measure name");
    for (auto it = b.begin(); it != b.end(); ++it) {
      try {
        at(cfg.beta, measure_from_name(it.key())) = as_number(it.value(), "/beta/" + it.key());
      } catch (const std::invalid_argument& e) {
        throw ParseError("/beta/" + it.key(), e.what());
      }
    }
  }
  if (j.contains("initial_weights")) {
    const auto& w = as_array(j.at("initial_weights"), "/initial_weights");
    std::vector<double> init;
    for (std::size_t i = 0; i < w.size(); ++i) init.push_back(as_number(w[i], "/initial_weights/" + std::to_string(i)));
    cfg.initial_weights = init;
  }
  try {
    cfg.check();
  } catch (const std::invalid_argument& e) {
    throw ParseError("/", e.what());
  }
  return cfg;
}

inline int run_train(const TrainArgs& args) {
  const CorpusLayout layout = corpus_layout(args.corpus, args.ratings);
  require_dir("--gt-bank", args.gt_bank);
  require_file("--config", args.config);

  Manifest manifest("train");
  std::vector<ComponentSpec> components;
  TrainConfig cfg = load_from(args.config, [&](const fs::path& p) {
    return train_config_from_json(detail::parse_json_text(manifest.input(p)), components);
  });
  if (args.combined_gt) cfg.combined_gt = true;
  rebase_paths(components, parent_dir(args.config));

  const RatingMap ratings = load_ratings(layout.ratings, &manifest);
  std::vector<VideoIndex> videos;
  std::map<std::string, std::size_t> video_pos;
  for (auto& [a, path] : load_annotations_dir(layout.annotations, &manifest)) {
    video_pos[a.video_id] = videos.size();
    videos.emplace_back(std::move(a), ratings);
  }
  const ComponentInputs inputs = file_inputs(&manifest);
  std::vector<VideoFeatures> features;
  for (const auto& v : videos) features.emplace_back(v, components, inputs);

  std::vector<TrainingExample> examples;
  for (const auto& [id, refs] : load_summaries_dir(args.gt_bank, &manifest)) {
    auto it = video_pos.find(id);
    if (it == video_pos.end()) {
      log("skipping references for '" + id + "': not in the corpus");
      continue;
    }
    for (const auto& [s, path] : refs) examples.push_back({it->second, s});
  }
  log("training on " + std::to_string(examples.size()) + " references over " + std::to_string(videos.size()) + " videos");
  const TrainResult result = train(features, examples, cfg);
  if (result.clamped_losses > 0) log(std::to_string(result.clamped_losses) + " negative hinge value(s) clamped to 0");

  MixtureModel model{components, result.weights};
  relativize_paths(model.components, parent_dir(args.out));
  Json j = to_json(model);
  j["training"] = {{"objective_trace", result.objective_trace},
                   {"clamped_losses", result.clamped_losses},
                   {"examples", examples.size()},
                   {"combined_gt", cfg.combined_gt}};
  write_file(args.out, dump_canonical(j));
  return kOk;
}

struct SummarizeArgs {
  std::string model, ratings;
  std::optional<std::string> annotation, annotations_dir, out;
  BudgetFlags budget;
  double tau = 1.0;
};

inline MixtureModel load_model(const fs::path& p, Manifest* m) {
  MixtureModel model = load_from(p, [&](const fs::path& q) {
    return model_from_json(detail::parse_json_text(m ? m->input(q) : read_file(q)));
  });
  rebase_paths(model.components, parent_dir(p));
  return model;
}

inline int run_summarize(const SummarizeArgs& args) {
  if (static_cast<bool>(args.annotation) == static_cast<bool>(args.annotations_dir))
    throw UsageError("summarize: give exactly one of --annotation FILE or --annotations DIR");
  if (args.annotations_dir && !args.out) throw UsageError("summarize: --out DIR is required with --annotations DIR");
  require_file("--model", args.model);
  require_file("--ratings", args.ratings);
  const Budget budget = args.budget.resolve();

  Manifest manifest("summarize");
  Manifest* m = args.annotations_dir ? &manifest : nullptr;
  const MixtureModel model = load_model(args.model, m);
  const RatingMap ratings = load_ratings(args.ratings, m);
  const ComponentInputs inputs = file_inputs(m);
  auto summarize_one = [&](Annotation a) {
    const VideoIndex v(std::move(a), ratings, args.tau);
    const VideoFeatures f(v, model.components, inputs);
    return infer(f, model, budget);
  };

  if (args.annotation) {
    require_file("--annotation", *args.annotation);
    emit(args.out, serialize(summarize_one(load_annotation_file(*args.annotation, nullptr))));
    return kOk;
  }
  require_dir("--annotations", *args.annotations_dir);
  const fs::path out_dir = *args.out;
  std::size_t written = 0;
  for (auto& [a, path] : load_annotations_dir(*args.annotations_dir, m)) {
    const std::string id = a.video_id;
    write_file(out_dir / (id + ".json"), serialize(summarize_one(std::move(a))));
    ++written;
  }
  manifest.config = {{"budget", args.budget.to_json()}, {"tau", args.tau}};
  manifest.write(out_dir);
  log("wrote " + std::to_string(written) + " summaries to " + out_dir.generic_string());
  return kOk;
}

struct Scores2SummaryArgs {
  std::string scores;
  std::optional<std::string> annotation, out;
  BudgetFlags budget;
};

inline int run_scores2summary(const Scores2SummaryArgs& args) {
  require_file("--scores", args.scores);
  const SnippetScores s = load_from(args.scores, [](const fs::path& p) { return load_scores(p); });
  Annotation a;
  if (args.annotation) {
    require_file("--annotation", *args.annotation);
    a = load_annotation_file(*args.annotation, nullptr);
    if (a.video_id != s.video_id)
      throw std::invalid_argument("scores are for '" + s.video_id + "' but the annotation is '" + a.video_id + "'");
  } else {
    a.video_id = s.video_id;
    for (std::size_t i = 0; i < s.scores.size(); ++i) a.snippets.push_back({i, {}});
  }
  emit(args.out, serialize(scores_to_summary(s.scores, a, args.budget.resolve())));
  return kOk;
}

struct SynthArgs {
  std::string spec, out;
  std::optional<std::uint64_t> seed;
};

inline int run_synth(const SynthArgs& args) {
  require_file("--spec", args.spec);
  Manifest probe("synth");
  SynthSpec spec = load_from(args.spec, [&](const fs::path& p) {
    Json j = detail::parse_json_text(probe.input(p));
    if (j.is_object() && !j.contains("seed")) {
      if (!args.seed) throw UsageError("synth: no seed (set \"seed\" in the spec file or pass --seed)");
      j["seed"] = *args.seed;
    }
    return synth_spec_from_json(j);
  });
  if (args.seed) spec.seed = *args.seed;
  try {
    spec.check();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--spec: ") + e.what());
  }
  Manifest manifest("synth", spec.seed);
  manifest.input(args.spec);
  const fs::path out = args.out;

  Corpus corpus;
  if (spec.planted) {
    const PlantedCorpus pc = generate_planted(spec);
    corpus = pc.corpus;
    for (const auto& s : pc.scores) write_file(out / "scores" / (s.video_id + ".json"), serialize(s));
    for (const auto& refs : pc.references)
      for (std::size_t i = 0; i < refs.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "__%03zu.json", i);
        write_file(out / "references" / (refs[i].video_id + name), serialize(refs[i]));
      }
    write_file(out / "planted_model.json", dump_canonical(to_json(MixtureModel{pc.components, pc.weights})));
  } else {
    corpus = generate(spec);
  }
  write_file(out / "ratings.json", serialize(corpus.ratings));
  for (const auto& a : corpus.videos) write_file(out / "annotations" / (a.video_id + ".json"), serialize(a));
  manifest.config = to_json(spec);
  manifest.write(out);
  log("wrote " + std::to_string(corpus.videos.size()) + " videos to " + out.generic_string());
  return kOk;
}

struct ReportArgs {
  std::vector<std::string> reports;
  std::string out;
};

// Column order of the comparison table.
inline constexpr std::array<Measure, kNumMeasures> kReportMeasures = {
    Measure::kImportance, Measure::kMegaCont, Measure::kDivTime, Measure::kDivConcept, Measure::kDivSim};
inline constexpr std::array<const char*, kNumMeasures> kReportMeasureLabels = {"IMP", "MC", "DT", "DC", "DSi"};

inline int run_report(const ReportArgs& args) {
  Manifest manifest("report");
  struct Row {
    std::size_t n = 0, n_f1 = 0;
    double af1 = 0, mf1 = 0;
    MeasureArray sums{};
    std::set<std::string> videos;
    bool unlabeled_domain = false;
  };
  std::map<std::pair<std::string, std::string>, Row> rows;

  for (const auto& arg : args.reports) {
    std::optional<std::string> technique;
    std::string path = arg;
    if (auto eq = arg.find('='); eq != std::string::npos && !fs::exists(arg)) {
      technique = arg.substr(0, eq);
      path = arg.substr(eq + 1);
    }
    std::vector<fs::path> files;
    if (fs::is_directory(path)) files = json_files(path);
    else if (fs::is_regular_file(path)) files.push_back(path);
    else throw UsageError("--reports: no such file or directory '" + path + "'");
    for (const auto& f : files) {
      const Json j = load_from(f, [&](const fs::path& p) { return detail::parse_json_text(manifest.input(p)); });
      using namespace detail;
      const std::string file = f.generic_string();
      const std::string video = as_string(require(j, "video_id", file), file + "/video_id");
      const bool has_domain = j.contains("domain") && j.at("domain").is_string() && !j.at("domain").get<std::string>().empty();
      const std::string domain = has_domain ? j.at("domain").get<std::string>() : "-";
      const std::string tech = technique ? *technique
                               : j.contains("technique") ? as_string(j.at("technique"), file + "/technique")
                                                         : std::string("default");
      Row& row = rows[{domain, tech}];
      row.n += 1;
      row.videos.insert(video);
      row.unlabeled_domain = row.unlabeled_domain || !has_domain;
      const Json& norm = require(j, "normalized", file);
      for (auto m : kAllMeasures) {
        const std::string key(measure_name(m));
        at(row.sums, m) += as_number(require(norm, key, file + "/normalized"), file + "/normalized/" + key);
      }
      if (j.contains("f1")) {
        row.n_f1 += 1;
        row.af1 += 100.0 * as_number(require(j.at("f1"), "avg", file + "/f1"), file + "/f1/avg");
        row.mf1 += 100.0 * as_number(require(j.at("f1"), "max", file + "/f1"), file + "/f1/max");
      }
    }
  }
  if (rows.empty()) throw UsageError("report: no measure reports found");
  for (const auto& [key, row] : rows)
    if (row.unlabeled_domain && row.videos.size() > 1)
      throw UsageError("report: technique '" + key.second + "' mixes " + std::to_string(row.videos.size()) +
                       " videos without domain labels (re-run score, which records the domain)");

  std::vector<std::vector<std::string>> text_rows = {{"Domain", "Technique", "AF1", "MF1"}};
  for (auto* l : kReportMeasureLabels) text_rows[0].push_back(l);
  std::string csv = "Domain,Technique,Reports,AF1,MF1";
  for (auto* l : kReportMeasureLabels) csv += std::string(",") + l;
  csv += "\n";
  Json data = Json::array();
  for (const auto& [key, row] : rows) {
    const auto n = static_cast<double>(row.n);
    std::optional<double> af1, mf1;
    if (row.n_f1 > 0) {
      af1 = row.af1 / static_cast<double>(row.n_f1);
      mf1 = row.mf1 / static_cast<double>(row.n_f1);
    }
    std::vector<std::string> t = {key.first, key.second, af1 ? fmt("%.1f", *af1) : "-", mf1 ? fmt("%.1f", *mf1) : "-"};
    csv += key.first + "," + key.second + "," + std::to_string(row.n) + "," + (af1 ? fmt("%.17g", *af1) : "") + "," +
           (mf1 ? fmt("%.17g", *mf1) : "");
    Json cells = {{"domain", key.first}, {"technique", key.second}, {"reports", row.n}};
    cells["AF1"] = af1 ? Json(*af1) : Json(nullptr);
    cells["MF1"] = mf1 ? Json(*mf1) : Json(nullptr);
    for (std::size_t c = 0; c < kNumMeasures; ++c) {
      const double mean = at(row.sums, kReportMeasures[c]) / n;
      t.push_back(fmt("%.1f", mean));
      csv += "," + fmt("%.17g", mean);
      cells[kReportMeasureLabels[c]] = mean;
    }
    csv += "\n";
    text_rows.push_back(std::move(t));
    data.push_back(std::move(cells));
  }

  std::vector<std::size_t> width(text_rows[0].size(), 0);
  for (const auto& r : text_rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::string text;
  for (const auto& r : text_rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      const std::string pad(width[c] - r[c].size(), ' ');
      text += c < 2 ? r[c] + pad : pad + r[c];
      text += c + 1 < r.size() ? "  " : "\n";
    }
  }

  const fs::path out = args.out;
  write_file(out / "table.txt", text);
  write_file(out / "table.csv", csv);
  manifest.extra = {{"rows", data}};
  manifest.write(out);
  std::cerr << text;
  return kOk;
}

// ---------------------------------------------------------------------------
// Entry point

inline int dispatch(int argc, const char* const* argv) {
  CLI::App app{"vsummkit: evaluate, generate and learn concept-annotated video summaries", "vsummkit"};
  app.set_version_flag("--version", VSUMMKIT_VERSION);
  app.require_subcommand(1);

  ValidateArgs va;
  auto* validate_cmd = app.add_subcommand("validate", "check annotations against a rating map");
  validate_cmd->add_option("--annotation", va.annotations, "annotation file (repeatable)");
  validate_cmd->add_option("--annotations", va.annotations_dir, "directory of annotation files");
  validate_cmd->add_option("--ratings", va.ratings, "rating map file")->required();
  validate_cmd->add_option("--domains", va.domains, "accepted domains")->delimiter(',');
  validate_cmd->add_option("--out", va.out, "violation report file (default: stdout)");

  ScoreArgs sa;
  auto* score_cmd = app.add_subcommand("score", "measure reports for summaries");
  score_cmd->add_option("--annotation", sa.annotation, "annotation file");
  score_cmd->add_option("--summary", sa.summary, "summary file");
  score_cmd->add_option("--annotations", sa.annotations_dir, "directory of annotation files (batch mode)");
  score_cmd->add_option("--summaries", sa.summaries_dir, "directory of summary files (batch mode)");
  score_cmd->add_option("--ratings", sa.ratings, "rating map file")->required();
  score_cmd->add_option("--references", sa.references, "directory of reference summaries for F1");
  score_cmd->add_option("--tau", sa.tau, "time-cluster Jaccard threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  score_cmd->add_option("--recall-denominator", sa.recall, "reference | video")->capture_default_str();
  score_cmd->add_option("--technique", sa.technique, "technique label recorded in the report");
  score_cmd->add_option("--out", sa.out, "report file (single) or directory (batch)");

  GtGenArgs ga;
  auto* gtgen_cmd = app.add_subcommand("gt-gen", "greedy reference summary under a lambda configuration");
  gtgen_cmd->add_option("--annotation", ga.annotation, "annotation file")->required();
  gtgen_cmd->add_option("--ratings", ga.ratings, "rating map file")->required();
  gtgen_cmd->add_option("--lambda", ga.lambda, "weights for mega_cont,importance,div_sim,div_time,div_concept")->required();
  ga.budget.add_to(gtgen_cmd);
  gtgen_cmd->add_option("--tau", ga.tau, "time-cluster Jaccard threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  gtgen_cmd->add_option("--out", ga.out, "summary file (default: stdout)");

  LambdaSearchArgs la;
  auto* search_cmd = app.add_subcommand("lambda-search", "configuration search and reference bank generation");
  search_cmd->add_option("--mode", la.mode, "pareto | propfair")->required();
  search_cmd->add_option("--annotations", la.annotations_dir, "directory of annotation files")->required();
  search_cmd->add_option("--ratings", la.ratings, "rating map file")->required();
  search_cmd->add_option("--budget-frac-range", la.range, "LO:HI budget fractions")->capture_default_str();
  search_cmd->add_option("--count", la.count, "summaries per video")->capture_default_str();
  search_cmd->add_option("--seed", la.seed, "random seed")->required();
  search_cmd->add_option("--tau", la.tau, "time-cluster Jaccard threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  search_cmd->add_option("--out", la.out, "bank directory")->required();

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "learn mixture weights from reference summaries");
  train_cmd->add_option("--corpus", ta.corpus, "corpus directory (ratings.json, annotations/)")->required();
  train_cmd->add_option("--ratings", ta.ratings, "rating map file (default: CORPUS/ratings.json)");
  train_cmd->add_option("--gt-bank", ta.gt_bank, "directory of reference summaries")->required();
  train_cmd->add_option("--config", ta.config, "training configuration file")->required();
  train_cmd->add_flag("--combined-gt", ta.combined_gt, "train on one combined reference per video");
  train_cmd->add_option("--out", ta.out, "model file")->required();

  SummarizeArgs ma;
  auto* summarize_cmd = app.add_subcommand("summarize", "summaries from a trained model");
  summarize_cmd->add_option("--model", ma.model, "model file")->required();
  summarize_cmd->add_option("--annotation", ma.annotation, "annotation file");
  summarize_cmd->add_option("--annotations", ma.annotations_dir, "directory of annotation files (batch mode)");
  summarize_cmd->add_option("--ratings", ma.ratings, "rating map file")->required();
  ma.budget.add_to(summarize_cmd);
  summarize_cmd->add_option("--tau", ma.tau, "time-cluster Jaccard threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  summarize_cmd->add_option("--out", ma.out, "summary file (default: stdout) or directory (batch)");

  Scores2SummaryArgs ka;
  auto* s2s_cmd = app.add_subcommand("scores2summary", "knapsack conversion of per-snippet scores");
  s2s_cmd->add_option("--scores", ka.scores, "scores file")->required();
  s2s_cmd->add_option("--annotation", ka.annotation, "annotation file (checks length and video id)");
  ka.budget.add_to(s2s_cmd);
  s2s_cmd->add_option("--out", ka.out, "summary file (default: stdout)");

  SynthArgs ya;
  auto* synth_cmd = app.add_subcommand("synth", "synthetic corpus generation");
  synth_cmd->add_option("--spec", ya.spec, "synth spec file")->required();
  synth_cmd->add_option("--seed", ya.seed, "override the spec's seed");
  synth_cmd->add_option("--out", ya.out, "output directory")->required();

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "comparison table from measure reports");
  report_cmd->add_option("--reports", ra.reports, "[TECHNIQUE=]FILE_OR_DIR (repeatable)")->required();
  report_cmd->add_option("--out", ra.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, std::cerr, std::cerr);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(va);
    if (score_cmd->parsed()) return run_score(sa);
    if (gtgen_cmd->parsed()) return run_gt_gen(ga);
    if (search_cmd->parsed()) return run_lambda_search(la);
    if (train_cmd->parsed()) return run_train(ta);
    if (summarize_cmd->parsed()) return run_summarize(ma);
    if (s2s_cmd->parsed()) return run_scores2summary(ka);
    if (synth_cmd->parsed()) return run_synth(ya);
    if (report_cmd->parsed()) return run_report(ra);
  } catch (const UsageError& e) {
    log(std::string("usage: ") + e.what());
    return kUsage;
  } catch (const ParseError& e) {
    log(std::string("invalid input: ") + e.what());
    return kViolations;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return kViolations;
  }
  return kUsage;
}

}  // namespace vsummkit::cli
