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

// Synthetic corpora with a planted mixture model w*. References are greedy
// summaries under per-reference jittered copies of w*, so the learning
// target is realizable.

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "vsummkit/learner.hpp"
#include "vsummkit/synth.hpp"

namespace vsummkit {

inline std::vector<ComponentSpec> planted_components() {
  return {ComponentSpec::facility_location_jaccard(), ComponentSpec::modular("scores/{video_id}.json"),
          ComponentSpec::of_measure(Measure::kImportance), ComponentSpec::of_measure(Measure::kDivConcept)};
}

struct PlantedCorpus {
  Corpus corpus;
  std::vector<SnippetScores> scores;  // per video, for the modular component
  std::vector<ComponentSpec> components;
  std::vector<double> weights;  // w*
  std::vector<std::vector<Summary>> references;
};

// Scores lookup for the modular component of planted_components().
inline ComponentInputs planted_inputs(const std::vector<SnippetScores>& scores) {
  ComponentInputs in;
  in.scores = [&scores](const ComponentSpec&, const VideoIndex& v) {
    for (const auto& s : scores)
      if (s.video_id == v.video_id()) return s.scores;
    throw std::invalid_argument("no planted scores for '" + v.video_id() + "'");
  };
  return in;
}

inline PlantedCorpus generate_planted(const SynthSpec& spec) {
  if (!spec.planted) throw std::invalid_argument("synth: spec has no planted section");
  const PlantedSpec& p = *spec.planted;
  PlantedCorpus out;
  out.components = planted_components();
  if (p.weights.size() != out.components.size())
    throw std::invalid_argument("synth: planted weights need " + std::to_string(out.components.size()) +
                                " entries (facility_location, modular, importance, div_concept)");
  for (double w : p.weights)
    if (!(w >= 0.0)) throw std::invalid_argument("synth: planted weights must be >= 0");
  BudgetRange{p.budget_frac_lo, p.budget_frac_hi}.check();
  out.weights = p.weights;
  out.corpus = generate(spec);

  for (std::size_t vi = 0; vi < out.corpus.videos.size(); ++vi) {
    auto rng = detail::derived_rng(spec.seed, 0x20000 + vi);
    SnippetScores s{out.corpus.videos[vi].video_id, {}};
    for (std::size_t i = 0; i < out.corpus.videos[vi].size(); ++i) s.scores.push_back(detail::unit_draw(rng));
    out.scores.push_back(std::move(s));
  }

  const auto inputs = planted_inputs(out.scores);
  for (std::size_t vi = 0; vi < out.corpus.videos.size(); ++vi) {
    const VideoIndex v(out.corpus.videos[vi], out.corpus.ratings);
    const VideoFeatures features(v, out.components, inputs);
    auto rng = detail::derived_rng(spec.seed, 0x30000 + vi);
    std::vector<Summary> refs;
    for (std::size_t r = 0; r < p.references_per_video; ++r) {
      std::vector<double> w = p.weights;
      for (auto& x : w) {
        // Box-Muller keeps the stream platform independent.
        const double u1 = 1.0 - detail::unit_draw(rng), u2 = detail::unit_draw(rng);
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        x *= std::exp(p.jitter * z);
      }
      const double frac = p.budget_frac_lo + (p.budget_frac_hi - p.budget_frac_lo) * detail::unit_draw(rng);
      refs.push_back(infer(features, w, Budget::fraction(frac).resolve(v.size())));
    }
    out.references.push_back(std::move(refs));
  }
  return out;
}

}  // namespace vsummkit
