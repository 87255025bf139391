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

// File formats. All JSON is written canonically: sorted object keys, two
// space indent, trailing newline. Snippets are ordered by index, keywords
// lexicographically and mega-events by first snippet.

#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vsummkit/annotation.hpp"

namespace vsummkit {

using Json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError("", std::string("malformed JSON: ") + e.what());
  }
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path.empty() ? "/" : path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "/" + key, "missing field");
  return *it;
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected string");
  return j.get<std::string>();
}

inline double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected number");
  return j.get<double>();
}

inline long long as_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected integer");
  return j.get<long long>();
}

inline SnippetIndex as_index(const Json& j, const std::string& path) {
  auto v = as_integer(j, path);
  if (v < 0) throw ParseError(path, "index out of range (negative)");
  return static_cast<SnippetIndex>(v);
}

inline const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected array");
  return j;
}

}  // namespace detail

inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + p.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, std::string_view contents) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
}

// ---------------------------------------------------------------------------
// Annotation

inline Annotation annotation_from_json(const Json& j) {
  using namespace detail;
  Annotation a;
  a.video_id = as_string(require(j, "video_id", ""), "/video_id");
  a.domain = as_string(require(j, "domain", ""), "/domain");
  a.snippet_duration_sec = as_number(require(j, "snippet_duration_sec", ""), "/snippet_duration_sec");

  const auto& snippets = as_array(require(j, "snippets", ""), "/snippets");
  for (std::size_t i = 0; i < snippets.size(); ++i) {
    const std::string path = "/snippets/" + std::to_string(i);
    Snippet s;
    s.index = as_index(require(snippets[i], "index", path), path + "/index");
    const auto& kws = as_array(require(snippets[i], "keywords", path), path + "/keywords");
    for (std::size_t k = 0; k < kws.size(); ++k)
      s.keywords.insert(as_string(kws[k], path + "/keywords/" + std::to_string(k)));
    a.snippets.push_back(std::move(s));
  }
  std::stable_sort(a.snippets.begin(), a.snippets.end(),
                   [](const Snippet& x, const Snippet& y) { return x.index < y.index; });

  const auto& megas = as_array(require(j, "mega_events", ""), "/mega_events");
  for (std::size_t e = 0; e < megas.size(); ++e) {
    const std::string path = "/mega_events/" + std::to_string(e);
    const auto& range = as_array(megas[e], path);
    if (range.size() != 2) throw ParseError(path, "expected [start, end] pair");
    auto first = as_index(range[0], path + "/0");
    auto last = as_index(range[1], path + "/1");
    if (last < first) throw ParseError(path, "end precedes start");
    if (last >= a.snippets.size())
      throw ParseError(path, "index out of range: " + std::to_string(last) + " >= " +
                                 std::to_string(a.snippets.size()) + " snippets");
    a.mega_events.push_back(MegaEvent::range(first, last));
  }
  std::stable_sort(a.mega_events.begin(), a.mega_events.end(),
                   [](const MegaEvent& x, const MegaEvent& y) { return x.snippets < y.snippets; });
  return a;
}

inline Json to_json(const Annotation& a) {
  Json snippets = Json::array();
  for (const auto& s : a.snippets)
    snippets.push_back({{"index", s.index}, {"keywords", Json(std::vector<std::string>(s.keywords.begin(), s.keywords.end()))}});
  Json megas = Json::array();
  for (const auto& m : a.mega_events) {
    if (m.snippets.empty() || !m.contiguous())
      throw std::invalid_argument("mega-event is not a contiguous range; cannot serialize");
    megas.push_back(Json::array({m.snippets.front(), m.snippets.back()}));
  }
  return {{"video_id", a.video_id},
          {"domain", a.domain},
          {"snippet_duration_sec", a.snippet_duration_sec},
          {"snippets", std::move(snippets)},
          {"mega_events", std::move(megas)}};
}

inline Annotation parse_annotation(std::string_view text) {
  return annotation_from_json(detail::parse_json_text(text));
}

inline std::string serialize(const Annotation& a) { return dump_canonical(to_json(a)); }

inline Annotation load_annotation(const std::filesystem::path& p) {
  try {
    return parse_annotation(read_file(p));
  } catch (const ParseError& e) {
    throw ParseError(p.string() + "#" + e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
}

// ---------------------------------------------------------------------------
// RatingMap

inline RatingMap rating_map_from_json(const Json& j) {
  using namespace detail;
  RatingMap r;
  r.domain = as_string(require(j, "domain", ""), "/domain");
  const auto& ratings = require(j, "ratings", "");
  if (!ratings.is_object()) throw ParseError("/ratings", "expected object");
  for (auto it = ratings.begin(); it != ratings.end(); ++it)
    r.ratings[it.key()] = static_cast<int>(as_integer(it.value(), "/ratings/" + it.key()));
  return r;
}

inline Json to_json(const RatingMap& r) { return {{"domain", r.domain}, {"ratings", r.ratings}}; }

inline RatingMap parse_rating_map(std::string_view text) {
  return rating_map_from_json(detail::parse_json_text(text));
}
inline std::string serialize(const RatingMap& r) { return dump_canonical(to_json(r)); }
inline RatingMap load_rating_map(const std::filesystem::path& p) { return parse_rating_map(read_file(p)); }

// ---------------------------------------------------------------------------
// Summary

inline Summary summary_from_json(const Json& j) {
  using namespace detail;
  std::string id = as_string(require(j, "video_id", ""), "/video_id");
  const auto& idx = as_array(require(j, "snippet_indices", ""), "/snippet_indices");
  std::vector<SnippetIndex> v;
  for (std::size_t i = 0; i < idx.size(); ++i)
    v.push_back(as_index(idx[i], "/snippet_indices/" + std::to_string(i)));
  return Summary(std::move(id), std::move(v));
}

inline Json to_json(const Summary& s) {
  return {{"video_id", s.video_id}, {"snippet_indices", s.snippet_indices}};
}

inline Summary parse_summary(std::string_view text) { return summary_from_json(detail::parse_json_text(text)); }
inline std::string serialize(const Summary& s) { return dump_canonical(to_json(s)); }
inline Summary load_summary(const std::filesystem::path& p) { return parse_summary(read_file(p)); }

// ---------------------------------------------------------------------------
// Per-snippet score file produced by external scorers.

struct SnippetScores {
  std::string video_id;
  std::vector<double> scores;
};

inline SnippetScores parse_scores(std::string_view text) {
  using namespace detail;
  Json j = parse_json_text(text);
  SnippetScores s;
  s.video_id = as_string(require(j, "video_id", ""), "/video_id");
  const auto& arr = as_array(require(j, "scores", ""), "/scores");
  for (std::size_t i = 0; i < arr.size(); ++i) s.scores.push_back(as_number(arr[i], "/scores/" + std::to_string(i)));
  return s;
}

inline std::string serialize(const SnippetScores& s) {
  return dump_canonical(Json{{"video_id", s.video_id}, {"scores", s.scores}});
}

inline SnippetScores load_scores(const std::filesystem::path& p) { return parse_scores(read_file(p)); }

// ---------------------------------------------------------------------------
// Similarity matrix text file: first token n, then n*n reals row-major.

inline std::vector<double> parse_similarity_matrix(std::string_view text, std::size_t& n_out) {
  std::istringstream in{std::string(text)};
  long long n = -1;
  if (!(in >> n) || n < 0) throw ParseError("similarity:header", "expected non-negative dimension");
  std::vector<double> m(static_cast<std::size_t>(n * n));
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!(in >> m[i]))
      throw ParseError("similarity:" + std::to_string(i / n) + "," + std::to_string(i % n), "expected real");
  std::string extra;
  if (in >> extra) throw ParseError("similarity:trailing", "unexpected token '" + extra + "'");
  n_out = static_cast<std::size_t>(n);
  return m;
}

inline std::string serialize_similarity_matrix(std::size_t n, const std::vector<double>& m) {
  std::ostringstream out;
  out.precision(17);
  out << n << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out << (j ? " " : "") << m[i * n + j];
    out << "\n";
  }
  return out.str();
}

}  // namespace vsummkit
