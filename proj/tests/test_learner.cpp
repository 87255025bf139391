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

#include <random>

#include "oracles.hpp"
#include "test_util.hpp"
#include "vsummkit/learner.hpp"
#include "vsummkit/planted.hpp"

using namespace vsummkit;

namespace {

SimilarityMatrix random_similarity(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i * n + j] = m[j * n + i] = u(rng);
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = 1.0;
  return {n, m};
}

std::vector<std::vector<double>> dense(const SimilarityMatrix& s) {
  std::vector<std::vector<double>> out(s.size(), std::vector<double>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) out[i][j] = s(i, j);
  return out;
}

ComponentInputs scores_input(const std::vector<double>& scores) {
  ComponentInputs in;
  in.scores = [scores](const ComponentSpec&, const VideoIndex&) { return scores; };
  return in;
}

std::vector<SnippetIndex> top_k(const std::vector<double>& s, std::size_t k) {
  std::vector<SnippetIndex> idx(s.size());
  std::iota(idx.begin(), idx.end(), SnippetIndex{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return s[a] > s[b]; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

TEST(FacilityLocation, Examples) {
  const SimilarityMatrix sim(2, {1.0, 0.4, 0.4, 1.0});
  const std::vector<SnippetIndex> x = {0};
  EXPECT_DOUBLE_EQ(facility_location(x, sim), 1.4);
  EXPECT_EQ(facility_location(std::vector<SnippetIndex>{}, sim), 0.0);
  std::mt19937_64 rng(1);
  const SimilarityMatrix r = random_similarity(rng, 9);
  std::vector<SnippetIndex> all(9);
  std::iota(all.begin(), all.end(), SnippetIndex{0});
  EXPECT_DOUBLE_EQ(facility_location(all, r), 9.0);
  Annotation a{"v", "d", 1.0, {{0, {}}, {1, {}}, {2, {}}}, {}};
  EXPECT_THROW(facility_location(Summary("v", {0}), sim, a), std::invalid_argument);
}

TEST(FacilityLocation, MatchesDoubleLoopOracle) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 30;
    const auto sim = random_similarity(rng, n);
    const auto x = testutil::random_subset(rng, n, rng() % (n + 1));
    EXPECT_NEAR(facility_location(x, sim), oracle::facility_location(dense(sim), testutil::as_set(x)), 1e-12);
  }
}

TEST(FacilityLocation, MonotoneSubmodular) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 20;
    const auto sim = random_similarity(rng, n);
    FacilityLocationState small(sim, 1.0), large(sim, 1.0);
    const auto order = testutil::random_subset(rng, n, n);
    const std::size_t split = rng() % n;
    for (std::size_t i = 0; i < split; ++i) large.add(order[i]);
    for (std::size_t i = 0; i < split / 2; ++i) small.add(order[i]);
    for (std::size_t i = split; i < n; ++i) {
      const double gs = small.gain(order[i]).submodular, gl = large.gain(order[i]).submodular;
      EXPECT_GE(gl, 0.0);
      EXPECT_GE(gs + 1e-12, gl);
    }
  }
}

TEST(SimilarityMatrix, Validation) {
  EXPECT_THROW(SimilarityMatrix(2, {1, 0.5, 0.4, 1}), std::invalid_argument);
  EXPECT_THROW(SimilarityMatrix(2, {1, -0.5, -0.5, 1}), std::invalid_argument);
  EXPECT_THROW(SimilarityMatrix(2, {0.5, 0.9, 0.9, 1}), std::invalid_argument);
  EXPECT_THROW(SimilarityMatrix(2, {1, 0, 0}), std::invalid_argument);
  EXPECT_EQ(SimilarityMatrix::parse("2\n1 0.5\n0.5 1\n")(0, 1), 0.5);
  const Corpus c = testutil::small_corpus(4, 30);
  const VideoIndex v(c.videos[0], c.ratings);
  const SimilarityMatrix j = SimilarityMatrix::jaccard(v);
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t k = 0; k < 30; ++k)
      EXPECT_DOUBLE_EQ(j(i, k), oracle::jaccard(c.videos[0].snippets[i].keywords, c.videos[0].snippets[k].keywords));
}

TEST(Margin, Examples) {
  const Corpus c = testutil::small_corpus(5, 40);
  const VideoIndex v(c.videos[0], c.ratings);
  const Summary gt = greedy_select(v, LambdaConfig(1, 1, 1, 1, 1), 5);
  const MeasureArray beta{1, 1, 1, 1, 1};
  EXPECT_EQ(margin(gt.snippet_indices, gt, v, beta), 0.0);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t)
    EXPECT_EQ(margin(testutil::random_subset(rng, 40, 5), gt, v, MeasureArray{}), 0.0);
}

TEST(Margin, NonNegativeAndMatchesMeasureReports) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 8 + rng() % 40;
    const Corpus c = testutil::small_corpus(900 + t, n);
    const VideoIndex v(c.videos[0], c.ratings);
    const std::size_t k = 1 + rng() % 6;
    const Summary gt(v.video_id(), testutil::random_subset(rng, n, k));
    const auto y = testutil::random_subset(rng, n, k);
    MeasureArray beta;
    for (auto& b : beta) b = static_cast<double>(rng() % 4) * 0.5;
    const double got = margin(y, gt, v, beta);
    EXPECT_GE(got, 0.0);
    const MeasureVector ny = normalize(raw_measures(y, v), v, k);
    const MeasureVector ng = normalize(raw_measures(gt.snippet_indices, v), v, k);
    double want = 0;
    for (std::size_t m = 0; m < kNumMeasures; ++m) want += beta[m] * std::max(0.0, ng.normalized[m] - ny.normalized[m]) / 100.0;
    EXPECT_NEAR(got, want, 1e-12);
    EXPECT_EQ(margin(Summary(v.video_id(), y), gt, c.videos[0], c.ratings, beta), got);
  }
}

TEST(MarginState, IncrementalGainsAndBound) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 10 + rng() % 20;
    const Corpus c = testutil::small_corpus(1100 + t, n);
    const VideoIndex v(c.videos[0], c.ratings);
    const Summary gt(v.video_id(), testutil::random_subset(rng, n, 4));
    MarginState m(v, gt, {1, 1, 1, 1, 1});
    std::vector<SnippetIndex> x;
    for (auto s : testutil::random_subset(rng, n, 6)) {
      for (SnippetIndex u = 0; u < n; ++u) {
        if (std::find(x.begin(), x.end(), u) != x.end()) continue;
        const Gain g = m.gain(u);
        EXPECT_LE(g.other, m.other_bound(u));
        EXPECT_EQ(g.submodular, 0.0);
      }
      m.add(s);
      x.push_back(s);
      EXPECT_NEAR(m.value(), margin(x, gt, v, {1, 1, 1, 1, 1}), 1e-12);
    }
  }
}

TEST(Infer, Examples) {
  const Corpus c = testutil::small_corpus(8, 12);
  const VideoIndex v(c.videos[0], c.ratings);
  ComponentInputs identity;
  identity.similarity = [](const ComponentSpec&, const VideoIndex& vi) {
    std::vector<double> m(vi.size() * vi.size(), 0.0);
    for (std::size_t i = 0; i < vi.size(); ++i) m[i * vi.size() + i] = 1.0;
    return SimilarityMatrix(vi.size(), m);
  };
  const std::vector<ComponentSpec> fl = {ComponentSpec::facility_location_file("unused")};
  const VideoFeatures f(v, fl, identity);
  EXPECT_EQ(infer(f, std::vector<double>{1.0}, 4).snippet_indices, (std::vector<SnippetIndex>{0, 1, 2, 3}));

  std::mt19937_64 rng(8);
  std::vector<double> scores(12);
  for (auto& s : scores) s = std::uniform_real_distribution<double>(0, 1)(rng);
  const std::vector<ComponentSpec> mix = {ComponentSpec::facility_location_jaccard(), ComponentSpec::modular("s"),
                                          ComponentSpec::of_measure(Measure::kImportance)};
  const VideoFeatures g(v, mix, scores_input(scores));
  EXPECT_EQ(infer(g, std::vector<double>{0.0, 1.0, 0.0}, 5).snippet_indices, top_k(scores, 5));
  const MixtureModel model{mix, {0.0, 1.0, 0.0}};
  EXPECT_EQ(infer(g, model, Budget::count(5)).snippet_indices, top_k(scores, 5));
}

TEST(Infer, BelowExhaustiveAndScaleInvariant) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 6 + rng() % 8;
    const Corpus c = testutil::small_corpus(1300 + t, n);
    const VideoIndex v(c.videos[0], c.ratings);
    std::vector<double> scores(n);
    for (auto& s : scores) s = std::uniform_real_distribution<double>(0, 1)(rng);
    const std::vector<ComponentSpec> mix = {ComponentSpec::facility_location_jaccard(), ComponentSpec::modular("s"),
                                            ComponentSpec::of_measure(Measure::kMegaCont),
                                            ComponentSpec::of_measure(Measure::kDivSim)};
    const VideoFeatures f(v, mix, scores_input(scores));
    std::vector<double> w(mix.size());
    for (auto& x : w) x = std::uniform_real_distribution<double>(0, 1)(rng);
    const std::size_t k = 1 + rng() % 4;
    const Summary y = infer(f, w, k);
    EXPECT_EQ(y, infer(f, w, k, GreedyMode::kNaive));
    const auto best = exhaustive_optimum(n, [&](std::span<const SnippetIndex> x) { return dot(w, f.features(x)); }, k);
    EXPECT_LE(dot(w, f.features(y.snippet_indices)), best.value + 1e-12);

    auto w2 = w;
    for (auto& x : w2) x *= 8.0;
    EXPECT_EQ(infer(f, w2, k), y);
    auto scaled = scores;
    for (auto& s : scaled) s *= 3.0;
    const VideoFeatures f3(v, mix, scores_input(scaled));
    EXPECT_EQ(infer(f3, w, k), y);
  }
}

TEST(HingeLoss, Examples) {
  const Corpus c = testutil::small_corpus(10, 30);
  const VideoIndex v(c.videos[0], c.ratings);
  const std::vector<ComponentSpec> mix = {ComponentSpec::facility_location_jaccard(),
                                          ComponentSpec::of_measure(Measure::kImportance)};
  const VideoFeatures f(v, mix);
  const std::vector<double> w = {0.6, 0.4};
  const Summary gt = infer(f, w, 4);
  EXPECT_EQ(hinge_loss(f, gt, w, MeasureArray{}).loss, 0.0);

  const std::vector<double> zero = {0.0, 0.0};
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    const Summary ref(v.video_id(), testutil::random_subset(rng, 30, 3));
    const HingeResult h = hinge_loss(f, ref, zero, {1, 1, 1, 1, 1});
    EXPECT_GE(h.loss, 0.0);
    EXPECT_NEAR(h.loss, margin(h.y_star.snippet_indices, ref, v, {1, 1, 1, 1, 1}), 1e-12);
    EXPECT_EQ(h.y_star.size(), ref.size());
  }
}

TEST(HingeLoss, GreedyInnerMaxBelowExhaustive) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 6 + rng() % 8;
    const Corpus c = testutil::small_corpus(1500 + t, n);
    const VideoIndex v(c.videos[0], c.ratings);
    const std::vector<ComponentSpec> mix = {ComponentSpec::facility_location_jaccard(),
                                            ComponentSpec::of_measure(Measure::kImportance),
                                            ComponentSpec::of_measure(Measure::kDivConcept)};
    const VideoFeatures f(v, mix);
    std::vector<double> w(3);
    for (auto& x : w) x = std::uniform_real_distribution<double>(0, 2)(rng);
    const Summary ref(v.video_id(), testutil::random_subset(rng, n, 1 + rng() % 4));
    const MeasureArray beta{1, 1, 1, 1, 1};
    const HingeResult g = hinge_loss(f, ref, w, beta, InnerMax::kGreedy);
    const HingeResult e = hinge_loss(f, ref, w, beta, InnerMax::kExhaustive);
    EXPECT_GE(g.loss, 0.0);
    EXPECT_FALSE(e.clamped);
    EXPECT_LE(g.loss, e.loss + 1e-12);
    // Independent recomputation of the exhaustive inner max.
    const auto best = oracle::exhaustive(n, ref.size(), [&](const oracle::Set& x) {
      const std::vector<SnippetIndex> y(x.begin(), x.end());
      return dot(w, f.features(y)) + margin(y, ref, v, beta);
    });
    EXPECT_NEAR(e.loss, best.value - dot(w, f.features(ref.snippet_indices)), 1e-9);
    // loss 0 iff the reference is itself a margin-respecting argmax.
    EXPECT_EQ(e.loss == 0.0, best.value <= dot(w, f.features(ref.snippet_indices)) + 0.0);
  }
}

TEST(Train, RealizableModularTarget) {
  std::mt19937_64 rng(12);
  const Corpus c = testutil::small_corpus(12, 40, 3);
  std::vector<VideoIndex> vs;
  for (const auto& a : c.videos) vs.emplace_back(a, c.ratings);
  std::vector<std::vector<double>> scores(3, std::vector<double>(40));
  for (auto& s : scores)
    for (auto& x : s) x = std::uniform_real_distribution<double>(0, 1)(rng);
  ComponentInputs in;
  in.scores = [&](const ComponentSpec&, const VideoIndex& v) {
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (vs[i].video_id() == v.video_id()) return scores[i];
    return std::vector<double>{};
  };
  const std::vector<ComponentSpec> spec = {ComponentSpec::modular("s")};
  std::vector<VideoFeatures> fs;
  for (const auto& v : vs) fs.emplace_back(v, spec, in);
  std::vector<TrainingExample> ex;
  for (std::size_t i = 0; i < 3; ++i) ex.push_back({i, Summary(vs[i].video_id(), top_k(scores[i], 4))});
  TrainConfig cfg;
  cfg.epochs = 30;
  const TrainResult r = train(fs, ex, cfg);
  ASSERT_EQ(r.weights.size(), 1u);
  EXPECT_GT(r.weights[0], 0.0);
  EXPECT_EQ(r.objective_trace.size(), 31u);
  EXPECT_LT(r.objective_trace.back(), r.objective_trace.front());
  for (const auto& e : ex) {
    EXPECT_EQ(infer(fs[e.video], r.weights, 4), e.reference);
    EXPECT_EQ(hinge_loss(fs[e.video], e.reference, r.weights, MeasureArray{}).loss, 0.0);
  }
}

TEST(Train, ZeroStepKeepsInitialWeights) {
  const Corpus c = testutil::small_corpus(13, 30, 2);
  std::vector<VideoIndex> vs;
  for (const auto& a : c.videos) vs.emplace_back(a, c.ratings);
  const std::vector<ComponentSpec> spec = {ComponentSpec::facility_location_jaccard(),
                                           ComponentSpec::of_measure(Measure::kImportance)};
  std::vector<VideoFeatures> fs;
  for (const auto& v : vs) fs.emplace_back(v, spec);
  std::vector<TrainingExample> ex = {{0, greedy_select(vs[0], LambdaConfig(1, 1, 1, 1, 1), 3)},
                                     {1, greedy_select(vs[1], LambdaConfig(0, 1, 0, 0, 0), 3)}};
  TrainConfig cfg;
  cfg.eta0 = 0.0;
  cfg.epochs = 5;
  EXPECT_EQ(train(fs, ex, cfg).weights, (std::vector<double>{0.5, 0.5}));
  cfg.initial_weights = std::vector<double>{0.2, 3.0};
  EXPECT_EQ(train(fs, ex, cfg).weights, (std::vector<double>{0.2, 3.0}));
}

TEST(Train, ProjectionAndErrors) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    const Corpus c = testutil::small_corpus(1700 + t, 25, 2);
    std::vector<VideoIndex> vs;
    for (const auto& a : c.videos) vs.emplace_back(a, c.ratings);
    const std::vector<ComponentSpec> spec = {ComponentSpec::facility_location_jaccard(),
                                             ComponentSpec::of_measure(Measure::kMegaCont),
                                             ComponentSpec::of_measure(Measure::kDivSim)};
    std::vector<VideoFeatures> fs;
    for (const auto& v : vs) fs.emplace_back(v, spec);
    std::vector<TrainingExample> ex;
    for (std::size_t i = 0; i < 2; ++i)
      for (int r = 0; r < 3; ++r) ex.push_back({i, Summary(vs[i].video_id(), testutil::random_subset(rng, 25, 3))});
    for (std::size_t epochs = 1; epochs <= 4; ++epochs) {
      TrainConfig cfg;
      cfg.epochs = epochs;
      cfg.eta0 = 5.0;
      for (double w : train(fs, ex, cfg).weights) EXPECT_GE(w, 0.0);
    }
  }
  const Corpus c = testutil::small_corpus(1, 10);
  const VideoIndex v(c.videos[0], c.ratings);
  const std::vector<ComponentSpec> spec = {ComponentSpec::facility_location_jaccard()};
  const std::vector<VideoFeatures> fs = {VideoFeatures(v, spec)};
  const std::vector<TrainingExample> empty = {{0, Summary(v.video_id(), {})}};
  EXPECT_THROW(train(fs, empty, TrainConfig{}), std::invalid_argument);
  TrainConfig bad;
  bad.lambda_reg = 0;
  EXPECT_THROW(train(fs, std::vector<TrainingExample>{{0, Summary(v.video_id(), {1})}}, bad), std::invalid_argument);
}

TEST(Train, ExhaustiveObjectiveDecreases) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 5; ++t) {
    const Corpus c = testutil::small_corpus(1900 + t, 10, 2);
    std::vector<VideoIndex> vs;
    for (const auto& a : c.videos) vs.emplace_back(a, c.ratings);
    const std::vector<ComponentSpec> spec = {ComponentSpec::facility_location_jaccard(),
                                             ComponentSpec::of_measure(Measure::kImportance),
                                             ComponentSpec::of_measure(Measure::kDivConcept)};
    std::vector<VideoFeatures> fs;
    for (const auto& v : vs) fs.emplace_back(v, spec);
    std::vector<TrainingExample> ex;
    for (std::size_t i = 0; i < 2; ++i)
      for (int r = 0; r < 2; ++r)
        ex.push_back({i, greedy_select(vs[i], LambdaConfig(testutil::random_lambda(rng)), 3)});
    TrainConfig cfg;
    cfg.inner = InnerMax::kExhaustive;
    cfg.epochs = 8;
    cfg.eta0 = 0.5;
    const TrainResult r = train(fs, ex, cfg);
    EXPECT_LT(r.objective_trace.back(), r.objective_trace.front()) << "corpus " << t;
    EXPECT_EQ(r.clamped_losses, 0u);
  }
}

TEST(CombineReferences, TopKByFrequency) {
  Annotation a{"v", "d", 1.0, {}, {}};
  for (std::size_t i = 0; i < 6; ++i) a.snippets.push_back({i, {}});
  const VideoIndex v(a, RatingMap{"d", {}});
  const std::vector<ComponentSpec> spec = {ComponentSpec::facility_location_jaccard()};
  const std::vector<VideoFeatures> fs = {VideoFeatures(v, spec)};
  const std::vector<TrainingExample> ex = {{0, Summary("v", {1, 2})}, {0, Summary("v", {2, 4, 5})}, {0, Summary("v", {2, 4})}};
  const auto combined = combine_references(ex, fs);
  ASSERT_EQ(combined.size(), 1u);
  EXPECT_EQ(combined[0].reference.snippet_indices, (std::vector<SnippetIndex>{2, 4}));
}

TEST(ModelFile, RoundTripAndErrors) {
  MixtureModel m{{ComponentSpec::facility_location_jaccard(), ComponentSpec::facility_location_file("sim/{video_id}.txt"),
                  ComponentSpec::modular("scores/{video_id}.json"), ComponentSpec::of_measure(Measure::kDivTime)},
                 {0.5, 0.25, 1.0, 0.0}};
  const Json j = to_json(m);
  const MixtureModel back = model_from_json(j);
  EXPECT_EQ(back.components, m.components);
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(substitute_video_id("a/{video_id}/{video_id}.json", "x"), "a/x/x.json");
  EXPECT_THROW(model_from_json(Json::parse(R"({"components":[{"kind":"nope"}]})")), ParseError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"components":[{"kind":"measure","measure":"foo"}]})")), ParseError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"components":[{"kind":"modular","scores_file":"s"}],"weights":[-1]})")),
               ParseError);
  EXPECT_THROW(model_from_json(Json::parse(R"({"components":[]})")), ParseError);
  EXPECT_EQ(model_from_json(Json::parse(R"({"components":[{"kind":"facility_location"},{"kind":"facility_location"}]})")).weights,
            (std::vector<double>{0.5, 0.5}));
}

TEST(Planted, DeterministicAndRealizable) {
  SynthSpec spec = testutil::small_spec(21, 80, 3);
  spec.planted = PlantedSpec{{1.0, 2.0, 0.5, 0.5}, 4, 0.05, 0.15, 0.25};
  const PlantedCorpus a = generate_planted(spec), b = generate_planted(spec);
  ASSERT_EQ(a.references.size(), 3u);
  for (std::size_t v = 0; v < 3; ++v) {
    EXPECT_EQ(a.references[v], b.references[v]);
    EXPECT_EQ(a.references[v].size(), 4u);
    for (const auto& r : a.references[v]) {
      EXPECT_GE(r.size(), 4u);
      EXPECT_LE(r.size(), 12u);
    }
  }
  spec.planted->weights = {1.0};
  EXPECT_THROW(generate_planted(spec), std::invalid_argument);
}
