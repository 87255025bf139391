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


#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "vsummkit/synth.hpp"

using namespace vsummkit;

TEST(Synth, Deterministic) {
  const SynthSpec spec = testutil::small_spec(3, 50, 4);
  const Corpus a = generate(spec), b = generate(spec);
  EXPECT_EQ(a.ratings, b.ratings);
  EXPECT_EQ(a.videos, b.videos);
  EXPECT_EQ(generate_video(spec, 2), a.videos[2]);
  SynthSpec other = spec;
  other.seed = 4;
  EXPECT_NE(generate(other).videos, a.videos);
}

TEST(Synth, GeneratedCorporaValidate) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SynthSpec spec = testutil::small_spec(seed, 20 + seed * 7, 2);
    spec.mega_event_density = 0.05 * static_cast<double>(seed % 5);
    const Corpus c = generate(spec);
    ASSERT_EQ(c.videos.size(), 2u);
    for (const auto& a : c.videos) {
      EXPECT_EQ(a.size(), spec.snippets_per_video);
      EXPECT_TRUE(validate(a, c.ratings).empty()) << "seed " << seed;
      for (const auto& s : a.snippets) EXPECT_LE(s.keywords.size(), spec.max_keywords);
      for (const auto& m : a.mega_events) {
        EXPECT_GE(m.snippets.size(), spec.mega_min_len);
        EXPECT_LE(m.snippets.size(), spec.mega_max_len);
      }
    }
    EXPECT_EQ(c.ratings.ratings.size(), spec.vocabulary_size());
    for (const auto& [k, r] : c.ratings.ratings) {
      EXPECT_GE(r, 0);
      EXPECT_LE(r, 10);
    }
  }
}

TEST(Synth, ZeroDensityHasNoMegaEvents) {
  SynthSpec spec = testutil::small_spec(8, 200, 3);
  spec.mega_event_density = 0.0;
  for (const auto& a : generate(spec).videos) EXPECT_TRUE(a.mega_events.empty());
}

TEST(Synth, SpecJsonRoundTripAndChecks) {
  SynthSpec spec = testutil::small_spec(77, 33, 2);
  spec.planted = PlantedSpec{{1, 2, 3, 4}, 3, 0.1, 0.2, 0.1};
  const SynthSpec back = synth_spec_from_json(to_json(spec));
  EXPECT_EQ(to_json(back), to_json(spec));
  EXPECT_EQ(generate(back).videos, generate(spec).videos);
  SynthSpec bad = spec;
  bad.max_keywords = 100;
  EXPECT_THROW(generate(bad), std::invalid_argument);
  bad = spec;
  bad.mega_min_len = 1;
  EXPECT_THROW(generate(bad), std::invalid_argument);
  bad = spec;
  bad.zero_rating_prob = 1.5;
  EXPECT_THROW(generate(bad), std::invalid_argument);
}

TEST(Synth, LargeVideoIsFast) {
  SynthSpec spec;
  spec.snippets_per_video = 1000;
  const auto t0 = std::chrono::steady_clock::now();
  const Corpus c = generate(spec);
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(c.videos[0].size(), 1000u);
  EXPECT_LT(sec, 1.0);
}

TEST(Exhaustive, Examples) {
  const auto sum = [](std::span<const SnippetIndex> x) {
    double t = 0;
    for (auto s : x) t += static_cast<double>((s * 7) % 5);
    return t;
  };
  // Values by index: 0 2 4 1 3 0 2 4.
  const Optimum o = exhaustive_optimum(8, sum, 2);
  EXPECT_EQ(o.selection, (std::vector<SnippetIndex>{2, 7}));
  EXPECT_EQ(o.value, 8.0);
  const Optimum all = exhaustive_optimum(5, sum, 5);
  EXPECT_EQ(all.selection, (std::vector<SnippetIndex>{0, 1, 2, 3, 4}));
  EXPECT_EQ(exhaustive_optimum(4, sum, 0).selection, std::vector<SnippetIndex>{});
  EXPECT_THROW(exhaustive_optimum(3, sum, 4), std::invalid_argument);
  EXPECT_THROW(exhaustive_optimum(60, sum, 30), InstanceTooLarge);
  EXPECT_NO_THROW(exhaustive_optimum(20, sum, 3));
}

TEST(Exhaustive, MatchesBitmaskOracle) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 4 + rng() % 9;
    const std::size_t k = 1 + rng() % 4;
    const Corpus c = testutil::small_corpus(300 + t, n);
    const VideoIndex v(c.videos[0], c.ratings);
    const auto w = testutil::random_lambda(rng);
    const Optimum got = exhaustive_optimum(v, LambdaConfig(w), k);
    const auto want = oracle::exhaustive(n, k, [&](const oracle::Set& x) {
      return oracle::score(c.videos[0], c.ratings, x, w);
    });
    EXPECT_TRUE(oracle::close(got.value, want.value)) << got.value << " vs " << want.value;
    EXPECT_EQ(got.selection.size(), k);
    EXPECT_TRUE(oracle::close(oracle::score(c.videos[0], c.ratings, testutil::as_set(got.selection), w), want.value));
  }
}

TEST(Baseline, UniformExamples) {
  Annotation a{"v", "d", 1.0, {}, {}};
  for (std::size_t i = 0; i < 10; ++i) a.snippets.push_back({i, {}});
  EXPECT_EQ(random_summary(a, Budget::count(5), 1, BaselineMode::kUniform).snippet_indices,
            (std::vector<SnippetIndex>{0, 2, 4, 6, 8}));
  EXPECT_EQ(random_summary(a, Budget::count(10), 1, BaselineMode::kUniform).size(), 10u);
  EXPECT_EQ(random_summary(a, Budget::count(10), 1).size(), 10u);
  EXPECT_EQ(random_summary(a, Budget::count(3), 1, BaselineMode::kUniform).snippet_indices,
            (std::vector<SnippetIndex>{0, 3, 6}));
  EXPECT_EQ(random_summary(a, Budget::fraction(0.5), 9).size(), 5u);
}

TEST(Baseline, RandomInclusionFrequency) {
  Annotation a{"v", "d", 1.0, {}, {}};
  const std::size_t n = 10, k = 3, draws = 10000;
  for (std::size_t i = 0; i < n; ++i) a.snippets.push_back({i, {}});
  std::vector<double> count(n, 0.0);
  for (std::uint64_t seed = 0; seed < draws; ++seed) {
    const Summary s = random_summary(a, Budget::count(k), seed);
    ASSERT_EQ(s.size(), k);
    for (auto i : s.snippet_indices) count[i] += 1.0;
  }
  const double p = static_cast<double>(k) / n;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(count[i], draws * p, 3 * sigma) << "snippet " << i;
  EXPECT_EQ(random_summary(a, Budget::count(k), 42), random_summary(a, Budget::count(k), 42));
}
