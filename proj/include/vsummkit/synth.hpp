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

// Synthetic annotated corpora and brute-force reference algorithms for
// checking the optimizers at desk scale.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsummkit/annotation.hpp"
#include "vsummkit/io.hpp"
#include "vsummkit/summarizer.hpp"

namespace vsummkit {

struct PlantedSpec {
  std::vector<double> weights;  // w*, one per planted component
  std::size_t references_per_video = 5;
  double budget_frac_lo = 0.05;
  double budget_frac_hi = 0.15;
  double jitter = 0.25;  // log-normal sigma applied to w* per reference
};

struct SynthSpec {
  std::uint64_t seed = 1;
  std::size_t num_videos = 1;
  std::size_t snippets_per_video = 100;
  std::string domain = "synthetic";
  double snippet_duration_sec = 2.0;
  std::size_t num_categories = 4;
  std::size_t concepts_per_category = 6;
  double zero_rating_prob = 0.1;
  int min_rating = 1;
  int max_rating = 10;
  double mega_event_density = 0.03;
  std::size_t mega_min_len = 2;
  std::size_t mega_max_len = 5;
  std::size_t min_keywords = 0;
  std::size_t max_keywords = 3;
  double keyword_persistence = 0.5;
  std::optional<PlantedSpec> planted;

  std::size_t vocabulary_size() const { return num_categories * concepts_per_category; }

  void check() const {
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (num_videos == 0 || snippets_per_video == 0 || num_categories == 0 || concepts_per_category == 0)
      throw std::invalid_argument("synth: counts must be positive");
    if (!unit(zero_rating_prob) || !unit(mega_event_density) || !unit(keyword_persistence))
      throw std::invalid_argument("synth: probabilities and densities must lie in [0, 1]");
    if (min_rating < 1 || max_rating > 10 || min_rating > max_rating)
      throw std::invalid_argument("synth: nonzero rating range must satisfy 1 <= min <= max <= 10");
    if (mega_min_len < 2 || mega_max_len < mega_min_len)
      throw std::invalid_argument("synth: mega-event length range must satisfy 2 <= min <= max");
    if (min_keywords > max_keywords) throw std::invalid_argument("synth: min_keywords > max_keywords");
    if (max_keywords > vocabulary_size())
      throw std::invalid_argument("synth: vocabulary of " + std::to_string(vocabulary_size()) +
                                  " keywords is too small for " + std::to_string(max_keywords) +
                                  " distinct keywords per snippet");
    if (!(snippet_duration_sec > 0.0)) throw std::invalid_argument("synth: snippet duration must be positive");
  }
};

inline Json to_json(const SynthSpec& s) {
  Json j = {{"seed", s.seed},
            {"num_videos", s.num_videos},
            {"snippets_per_video", s.snippets_per_video},
            {"domain", s.domain},
            {"snippet_duration_sec", s.snippet_duration_sec},
            {"num_categories", s.num_categories},
            {"concepts_per_category", s.concepts_per_category},
            {"zero_rating_prob", s.zero_rating_prob},
            {"min_rating", s.min_rating},
            {"max_rating", s.max_rating},
            {"mega_event_density", s.mega_event_density},
            {"mega_min_len", s.mega_min_len},
            {"mega_max_len", s.mega_max_len},
            {"min_keywords", s.min_keywords},
            {"max_keywords", s.max_keywords},
            {"keyword_persistence", s.keyword_persistence}};
  if (s.planted) {
    j["planted"] = {{"weights", s.planted->weights},
                    {"references_per_video", s.planted->references_per_video},
                    {"budget_frac_range", {s.planted->budget_frac_lo, s.planted->budget_frac_hi}},
                    {"jitter", s.planted->jitter}};
  }
  return j;
}

// Missing fields keep their defaults, except the seed which is mandatory.
inline SynthSpec synth_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("/", "expected object");
  if (!j.contains("seed")) throw ParseError("/seed", "missing field (all randomness is seeded explicitly)");
  SynthSpec s;
  auto get = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const Json::exception& e) {
      throw ParseError(std::string("/") + key, e.what());
    }
  };
  get("seed", s.seed);
  get("num_videos", s.num_videos);
  get("snippets_per_video", s.snippets_per_video);
  get("domain", s.domain);
  get("snippet_duration_sec", s.snippet_duration_sec);
  get("num_categories", s.num_categories);
  get("concepts_per_category", s.concepts_per_category);
  get("zero_rating_prob", s.zero_rating_prob);
  get("min_rating", s.min_rating);
  get("max_rating", s.max_rating);
  get("mega_event_density", s.mega_event_density);
  get("mega_min_len", s.mega_min_len);
  get("mega_max_len", s.mega_max_len);
  get("min_keywords", s.min_keywords);
  get("max_keywords", s.max_keywords);
  get("keyword_persistence", s.keyword_persistence);
  if (j.contains("planted")) {
    const auto& p = j.at("planted");
    PlantedSpec ps;
    try {
      p.at("weights").get_to(ps.weights);
      if (p.contains("references_per_video")) p.at("references_per_video").get_to(ps.references_per_video);
      if (p.contains("budget_frac_range")) {
        ps.budget_frac_lo = p.at("budget_frac_range").at(0).get<double>();
        ps.budget_frac_hi = p.at("budget_frac_range").at(1).get<double>();
      }
      if (p.contains("jitter")) p.at("jitter").get_to(ps.jitter);
    } catch (const Json::exception& e) {
      throw ParseError("/planted", e.what());
    }
    s.planted = ps;
  }
  return s;
}

struct Corpus {
  RatingMap ratings;
  std::vector<Annotation> videos;
};

inline std::string synth_keyword(std::size_t category, std::size_t concept_id) {
  return "cat" + std::to_string(category) + ":concept" + std::to_string(concept_id);
}

inline std::string synth_video_id(const SynthSpec& spec, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return spec.domain + "_" + std::to_string(spec.seed) + "_" + buf;
}

namespace detail {

// Uniform double in [0, 1) from the top 53 bits; platform independent.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [lo, hi]; modulo bias is negligible at these sizes.
inline std::size_t int_draw(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail

inline Annotation generate_video(const SynthSpec& spec, std::size_t video) {
  auto rng = detail::derived_rng(spec.seed, video + 1);
  Annotation a;
  a.video_id = synth_video_id(spec, video);
  a.domain = spec.domain;
  a.snippet_duration_sec = spec.snippet_duration_sec;
  const std::size_t vocab = spec.vocabulary_size();

  std::vector<std::size_t> pool(vocab);
  for (std::size_t i = 0; i < spec.snippets_per_video; ++i) {
    Snippet s;
    s.index = i;
    if (i > 0 && detail::unit_draw(rng) < spec.keyword_persistence) {
      s.keywords = a.snippets.back().keywords;
    } else {
      const std::size_t count = detail::int_draw(rng, spec.min_keywords, spec.max_keywords);
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      for (std::size_t c = 0; c < count; ++c) {
        std::swap(pool[c], pool[detail::int_draw(rng, c, vocab - 1)]);
        s.keywords.insert(synth_keyword(pool[c] / spec.concepts_per_category, pool[c] % spec.concepts_per_category));
      }
    }
    a.snippets.push_back(std::move(s));
  }

  const std::size_t n = spec.snippets_per_video;
  for (std::size_t i = 0; i + 1 < n;) {
    if (detail::unit_draw(rng) < spec.mega_event_density) {
      const std::size_t len = std::min(detail::int_draw(rng, spec.mega_min_len, spec.mega_max_len), n - i);
      if (len >= 2) {
        a.mega_events.push_back(MegaEvent::range(i, i + len - 1));
        i += len;
        continue;
      }
    }
    ++i;
  }
  return a;
}

inline RatingMap generate_ratings(const SynthSpec& spec) {
  auto rng = detail::derived_rng(spec.seed, 0);
  RatingMap r;
  r.domain = spec.domain;
  for (std::size_t c = 0; c < spec.num_categories; ++c)
    for (std::size_t k = 0; k < spec.concepts_per_category; ++k) {
      int rating = 0;
      if (detail::unit_draw(rng) >= spec.zero_rating_prob)
        rating = static_cast<int>(detail::int_draw(rng, static_cast<std::size_t>(spec.min_rating),
                                                   static_cast<std::size_t>(spec.max_rating)));
      r.ratings[synth_keyword(c, k)] = rating;
    }
  return r;
}

// Deterministic given the SynthSpec: per-video streams are derived from (seed, video).
inline Corpus generate(const SynthSpec& spec) {
  spec.check();
  Corpus c;
  c.ratings = generate_ratings(spec);
  for (std::size_t v = 0; v < spec.num_videos; ++v) c.videos.push_back(generate_video(spec, v));
  return c;
}

// ---------------------------------------------------------------------------
// Exhaustive optimum

class InstanceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kMaxEnumeratedSubsets = 1e7;

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

using SetFunction = std::function<double(std::span<const SnippetIndex>)>;

struct Optimum {
  std::vector<SnippetIndex> selection;
  double value = 0.0;
};

// Global maximum of f over all k-subsets of {0..n-1}, enumerated in
// lexicographic order; the first maximizer wins ties.
inline Optimum exhaustive_optimum(std::size_t n, const SetFunction& f, std::size_t k) {
  if (k > n) throw std::invalid_argument("exhaustive_optimum: k > n");
  if (binomial(n, k) > kMaxEnumeratedSubsets)
    throw InstanceTooLarge("exhaustive_optimum: C(" + std::to_string(n) + "," + std::to_string(k) +
                           ") exceeds 1e7 subsets");
  std::vector<SnippetIndex> comb(k);
  std::iota(comb.begin(), comb.end(), SnippetIndex{0});
  Optimum best{comb, f(comb)};
  while (true) {
    std::size_t i = k;
    while (i > 0 && comb[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
    const double v = f(comb);
    if (v > best.value) best = {comb, v};
  }
  return best;
}

inline Optimum exhaustive_optimum(const VideoIndex& v, const LambdaConfig& lambda, std::size_t k) {
  return exhaustive_optimum(v.size(), [&](std::span<const SnippetIndex> x) { return score(x, v, lambda); }, k);
}

// ---------------------------------------------------------------------------
// Baseline summaries

enum class BaselineMode { kRandom, kUniform };

// kUniform picks floor(i * n / k) for i < k; kRandom a uniform k-subset.
inline Summary random_summary(const Annotation& a, const Budget& b, std::uint64_t seed,
                              BaselineMode mode = BaselineMode::kRandom) {
  const std::size_t n = a.size();
  const std::size_t k = b.resolve(n);
  std::vector<SnippetIndex> picked;
  if (mode == BaselineMode::kUniform) {
    for (std::size_t i = 0; i < k; ++i) picked.push_back(i * n / k);
  } else {
    auto rng = detail::derived_rng(seed, 0x5eed);
    // Floyd's algorithm keeps the draw count at k.
    std::vector<char> chosen(n, 0);
    for (std::size_t j = n - k; j < n; ++j) {
      const std::size_t t = detail::int_draw(rng, 0, j);
      if (chosen[t]) chosen[j] = 1;
      else chosen[t] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (chosen[i]) picked.push_back(i);
  }
  return Summary(a.video_id, std::move(picked));
}

}  // namespace vsummkit
