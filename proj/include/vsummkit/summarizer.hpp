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

// Budgeted subset selection over an annotated video: the weighted five-measure
// score, greedy maximization of it, and conversion of per-snippet scores from
// external models into summaries.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "vsummkit/annotation.hpp"
#include "vsummkit/greedy.hpp"
#include "vsummkit/measures.hpp"

namespace vsummkit {

// Weights of (mega_cont, importance, div_sim, div_time, div_concept).
class LambdaConfig {
 public:
  LambdaConfig() = default;
  explicit LambdaConfig(const MeasureArray& w) : w_(w) {
    bool any = false;
    for (double x : w_) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("lambda weights must be finite and >= 0");
      any = any || x > 0.0;
    }
    if (!any) throw std::invalid_argument("lambda weights must not all be zero");
  }
  LambdaConfig(double mega_cont, double imp, double div_sim, double div_time, double div_concept)
      : LambdaConfig(MeasureArray{mega_cont, imp, div_sim, div_time, div_concept}) {}

  static LambdaConfig only(Measure m) {
    MeasureArray w{};
    at(w, m) = 1.0;
    return LambdaConfig(w);
  }

  // "1,1,0.5,1,1"
  static LambdaConfig parse(std::string_view text) {
    MeasureArray w{};
    std::istringstream in{std::string(text)};
    std::string item;
    std::size_t i = 0;
    while (std::getline(in, item, ',')) {
      if (i >= kNumMeasures) throw std::invalid_argument("lambda: expected 5 comma-separated weights");
      std::size_t used = 0;
      w[i++] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument("lambda: bad number '" + item + "'");
    }
    if (i != kNumMeasures) throw std::invalid_argument("lambda: expected 5 comma-separated weights");
    return LambdaConfig(w);
  }

  double operator[](Measure m) const { return at(w_, m); }
  const MeasureArray& weights() const { return w_; }

  LambdaConfig l1_normalized() const {
    const double s = std::accumulate(w_.begin(), w_.end(), 0.0);
    MeasureArray w = w_;
    for (auto& x : w) x /= s;
    return LambdaConfig(w);
  }

  friend bool operator==(const LambdaConfig&, const LambdaConfig&) = default;
  friend auto operator<=>(const LambdaConfig&, const LambdaConfig&) = default;

 private:
  MeasureArray w_{0.0, 1.0, 0.0, 0.0, 0.0};
};

// A summary budget: a fraction of the video length or a snippet count.
class Budget {
 public:
  static Budget fraction(double f) {
    if (!(f > 0.0 && f <= 1.0)) throw std::invalid_argument("budget fraction must be in (0, 1]");
    Budget b;
    b.value_ = f;
    return b;
  }
  static Budget count(std::size_t k) {
    Budget b;
    b.value_ = k;
    return b;
  }

  // floor(fraction * n), at least one snippet; counts are capped at n.
  std::size_t resolve(std::size_t n) const {
    if (const auto* k = std::get_if<std::size_t>(&value_)) return std::min(*k, n);
    const double f = std::get<double>(value_);
    auto k = static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
    return std::min(std::max<std::size_t>(k, n > 0 ? 1 : 0), n);
  }

  bool is_fraction() const { return std::holds_alternative<double>(value_); }
  double as_fraction() const { return std::get<double>(value_); }

 private:
  std::variant<double, std::size_t> value_ = std::size_t{0};
};

// Fractional budget range for reference generation.
struct BudgetRange {
  double lo = 0.01;
  double hi = 0.05;

  void check() const {
    if (!(lo > 0.0 && lo <= hi && hi <= 1.0)) throw std::invalid_argument("budget range must satisfy 0 < lo <= hi <= 1");
  }
  double midpoint() const { return 0.5 * (lo + hi); }
};

// Incremental raw values of the five measures for a growing selection.
class MeasureState {
 public:
  explicit MeasureState(const VideoIndex& v)
      : v_(&v), mega_count_(v.num_mega_events(), 0), best_time_(v.num_time_clusters(), 0),
        best_concept_(v.num_keywords(), 0) {
    at(values_, Measure::kDivSim) = 1.0;
  }

  const VideoIndex& video() const { return *v_; }
  const std::vector<SnippetIndex>& selected() const { return selected_; }
  const MeasureArray& values() const { return values_; }

  double gain(Measure m, SnippetIndex s) const {
    const int r = v_->rating(s);
    switch (m) {
      case Measure::kMegaCont: {
        const auto e = v_->mega_of(s);
        if (e == VideoIndex::npos) return 0.0;
        return static_cast<double>(v_->mega_rating(e)) * static_cast<double>(2 * mega_count_[e] + 1);
      }
      case Measure::kImportance:
        return v_->mega_of(s) == VideoIndex::npos ? static_cast<double>(r) : 0.0;
      case Measure::kDivSim:
        return div_sim_after(s) - at(values_, Measure::kDivSim);
      case Measure::kDivTime:
        return static_cast<double>(std::max(0, r - best_time_[v_->time_cluster_of(s)]));
      case Measure::kDivConcept: {
        int g = 0;
        for (int c : v_->concept_clusters_of(s)) g += std::max(0, r - best_concept_[c]);
        return static_cast<double>(g);
      }
    }
    return 0.0;
  }

  MeasureArray gains(SnippetIndex s) const {
    MeasureArray out{};
    for (auto m : kAllMeasures) at(out, m) = gain(m, s);
    return out;
  }

  // Values after adding s, without mutating.
  MeasureArray values_after(SnippetIndex s) const {
    MeasureArray out = values_;
    for (auto m : kAllMeasures) {
      if (m == Measure::kDivSim) at(out, m) = div_sim_after(s);
      else at(out, m) += gain(m, s);
    }
    return out;
  }

  void add(SnippetIndex s) {
    const MeasureArray next = values_after(s);
    const int r = v_->rating(s);
    if (auto e = v_->mega_of(s); e != VideoIndex::npos) ++mega_count_[e];
    auto& bt = best_time_[v_->time_cluster_of(s)];
    bt = std::max(bt, r);
    for (int c : v_->concept_clusters_of(s)) best_concept_[c] = std::max(best_concept_[c], r);
    selected_.push_back(s);
    values_ = next;
  }

 private:
  double div_sim_after(SnippetIndex s) const {
    double d = at(values_, Measure::kDivSim);
    for (auto x : selected_) d = std::min(d, v_->dissimilarity(s, x));
    return d;
  }

  const VideoIndex* v_;
  std::vector<std::size_t> mega_count_;
  std::vector<int> best_time_;
  std::vector<int> best_concept_;
  std::vector<SnippetIndex> selected_;
  MeasureArray values_{};
};

// score(X, lambda) = sum_m lambda_m * measure_m(X).
inline double score(std::span<const SnippetIndex> selected, const VideoIndex& v, const LambdaConfig& lambda) {
  const MeasureArray raw = raw_measures(selected, v);
  double total = 0.0;
  for (auto m : kAllMeasures) total += lambda[m] * at(raw, m);
  return total;
}

inline double score(const Summary& x, const Annotation& a, const RatingMap& r, const LambdaConfig& lambda) {
  check_summary(x, a);
  return score(x.snippet_indices, VideoIndex(a, r), lambda);
}

// The weighted score as a greedy objective. importance, div_time and
// div_concept are submodular; mega_cont (supermodular, O(1) exact gain) and
// div_sim (min-based, gains always <= 0) form the "other" part.
class ScoreObjective {
 public:
  ScoreObjective(const VideoIndex& v, const LambdaConfig& lambda) : state_(v), lambda_(lambda) {}

  std::size_t ground_size() const { return state_.video().size(); }

  Gain gain(SnippetIndex s) const {
    Gain g;
    g.submodular = lambda_[Measure::kImportance] * state_.gain(Measure::kImportance, s) +
                   lambda_[Measure::kDivTime] * state_.gain(Measure::kDivTime, s) +
                   lambda_[Measure::kDivConcept] * state_.gain(Measure::kDivConcept, s);
    g.other = lambda_[Measure::kMegaCont] * state_.gain(Measure::kMegaCont, s);
    if (lambda_[Measure::kDivSim] > 0.0) g.other += lambda_[Measure::kDivSim] * state_.gain(Measure::kDivSim, s);
    return g;
  }

  double other_bound(SnippetIndex s) const {
    return lambda_[Measure::kMegaCont] * state_.gain(Measure::kMegaCont, s);
  }

  void add(SnippetIndex s) { state_.add(s); }

  double value() const {
    double total = 0.0;
    for (auto m : kAllMeasures) total += lambda_[m] * at(state_.values(), m);
    return total;
  }

  const MeasureState& state() const { return state_; }

 private:
  MeasureState state_;
  LambdaConfig lambda_;
};

enum class GreedyMode { kLazy, kNaive };

inline Summary greedy_select(const VideoIndex& v, const LambdaConfig& lambda, std::size_t k,
                             GreedyMode mode = GreedyMode::kLazy, GreedyStats* stats = nullptr) {
  k = std::min(k, v.size());
  ScoreObjective f(v, lambda);
  auto picked = mode == GreedyMode::kLazy ? lazy_greedy(f, k, stats) : naive_greedy(f, k, stats);
  return Summary(v.video_id(), std::move(picked));
}

inline Summary greedy_select(const VideoIndex& v, const LambdaConfig& lambda, const Budget& b,
                             GreedyMode mode = GreedyMode::kLazy) {
  return greedy_select(v, lambda, b.resolve(v.size()), mode);
}

inline Summary greedy_select(const Annotation& a, const RatingMap& r, const LambdaConfig& lambda, const Budget& b,
                             double tau = 1.0) {
  return greedy_select(VideoIndex(a, r, tau), lambda, b);
}

// Greedy maximization of sum_c w_c f_c + margin. Components and margin must
// be freshly constructed (empty selection) over the same ground set.
inline Summary greedy_select_lossaug(const std::string& video_id, std::span<IncrementalSetFunction* const> components,
                                     std::span<const double> weights, IncrementalSetFunction* margin,
                                     std::size_t k, GreedyMode mode = GreedyMode::kLazy) {
  if (components.size() != weights.size()) throw std::invalid_argument("greedy_select_lossaug: weight count mismatch");
  if (components.empty()) throw std::invalid_argument("greedy_select_lossaug: no components");
  WeightedSum objective;
  for (std::size_t i = 0; i < components.size(); ++i) objective.push(weights[i], components[i]);
  if (margin) objective.push(1.0, margin);
  auto picked = mode == GreedyMode::kLazy ? lazy_greedy(objective, k) : naive_greedy(objective, k);
  return Summary(video_id, std::move(picked));
}

// ---------------------------------------------------------------------------
// Knapsack conversion of per-snippet scores.

// Exact 0/1 knapsack over integer weights. Among optimal selections the
// earliest items are preferred, including zero-valued ones.
inline std::vector<std::size_t> knapsack_select(std::span<const double> values, std::span<const std::size_t> weights,
                                                std::size_t capacity) {
  if (values.size() != weights.size()) throw std::invalid_argument("knapsack: values/weights length mismatch");
  const std::size_t n = values.size();
  // best[i][c]: optimum over items i..n-1 with capacity c.
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(capacity + 1, 0.0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t c = 0; c <= capacity; ++c) {
      double v = best[i + 1][c];
      if (weights[i] <= c) v = std::max(v, values[i] + best[i + 1][c - weights[i]]);
      best[i][c] = v;
    }
  }
  std::vector<std::size_t> picked;
  std::size_t c = capacity;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] <= c && values[i] + best[i + 1][c - weights[i]] >= best[i + 1][c]) {
      picked.push_back(i);
      c -= weights[i];
    }
  }
  return picked;
}

// Selects snippets maximizing the score sum subject to a total duration
// budget. Durations are quantized to whole snippets.
inline Summary scores_to_summary(std::span<const double> scores, const Annotation& a, double budget_sec) {
  if (scores.size() != a.size())
    throw std::invalid_argument("scores_to_summary: " + std::to_string(scores.size()) + " scores for " +
                                std::to_string(a.size()) + " snippets");
  const auto capacity = static_cast<std::size_t>(std::floor(budget_sec / a.snippet_duration_sec + 1e-9));
  std::vector<std::size_t> weights(scores.size(), 1);
  return Summary(a.video_id, knapsack_select(scores, weights, std::min(capacity, scores.size())));
}

inline Summary scores_to_summary(std::span<const double> scores, const Annotation& a, const Budget& b) {
  return scores_to_summary(scores, a, static_cast<double>(b.resolve(a.size())) * a.snippet_duration_sec);
}

}  // namespace vsummkit
