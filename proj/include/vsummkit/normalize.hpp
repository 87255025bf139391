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

// Percentage normalization of raw measures. Each measure is scaled by the
// value single-measure greedy reaches at the same budget, then clipped to
// [0, 100].

#pragma once

#include <algorithm>
#include <span>

#include "vsummkit/measures.hpp"
#include "vsummkit/summarizer.hpp"

namespace vsummkit {

// Per-measure denominators at `budget` snippets. A zero budget selects
// nothing, so every denominator (div_sim included) is zero there.
inline MeasureArray normalization_denominators(const VideoIndex& v, std::size_t budget) {
  budget = std::min(budget, v.size());
  if (auto cached = v.cached_denominators(budget)) return *cached;
  MeasureArray d{};
  if (budget > 0) {
    for (auto m : kAllMeasures) {
      const Summary best = greedy_select(v, LambdaConfig::only(m), budget);
      at(d, m) = measure_value(m, best.snippet_indices, v);
    }
  }
  v.store_denominators(budget, d);
  return d;
}

inline MeasureArray normalize(const MeasureArray& raw, const MeasureArray& denominators) {
  MeasureArray out{};
  for (std::size_t i = 0; i < kNumMeasures; ++i)
    out[i] = denominators[i] > 0.0 ? std::clamp(100.0 * raw[i] / denominators[i], 0.0, 100.0) : 0.0;
  return out;
}

// `budget` is the size of the summary that produced `raw`.
inline MeasureVector normalize(const MeasureArray& raw, const VideoIndex& v, std::size_t budget) {
  return {raw, normalize(raw, normalization_denominators(v, budget))};
}

inline MeasureVector normalize(const MeasureArray& raw, const Annotation& a, const RatingMap& r, std::size_t budget,
                               double tau = 1.0) {
  return normalize(raw, VideoIndex(a, r, tau), budget);
}

inline MeasureVector measure_vector(std::span<const SnippetIndex> selected, const VideoIndex& v) {
  return normalize(raw_measures(selected, v), v, selected.size());
}

inline MeasureVector measure_vector(const Summary& x, const VideoIndex& v) {
  check_summary(x, v.annotation());
  return measure_vector(x.snippet_indices, v);
}

}  // namespace vsummkit
