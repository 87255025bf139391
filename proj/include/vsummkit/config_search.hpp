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

// Search over lambda configurations of the reference-summary generator.
// A configuration is judged by the mean normalized measure vector of the
// summaries it produces; configurations are kept when Pareto optimal, or
// ranked by proportional fairness F = sum_p log(1 + V_p).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "vsummkit/detail/parallel.hpp"
#include "vsummkit/normalize.hpp"
#include "vsummkit/summarizer.hpp"
#include "vsummkit/synth.hpp"

namespace vsummkit {

struct ConfigEvaluation {
  LambdaConfig config;
  MeasureArray values{};  // mean normalized measures, in [0, 100]
  std::size_t grid_index = 0;
};

inline constexpr std::array<double, 6> kLambdaLevels = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};

// Every combination of kLambdaLevels except all-zero, L1-normalized, with
// duplicates removed (first occurrence kept). The levels are powers of two,
// so proportional configurations normalize to bit-identical weights.
inline std::vector<LambdaConfig> lambda_grid() {
  std::vector<LambdaConfig> out;
  std::set<MeasureArray> seen;
  std::array<std::size_t, kNumMeasures> digit{};
  const std::size_t total = static_cast<std::size_t>(std::pow(kLambdaLevels.size(), kNumMeasures));
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = kNumMeasures; i-- > 0;) {
      digit[i] = c % kLambdaLevels.size();
      c /= kLambdaLevels.size();
    }
    MeasureArray w{};
    bool any = false;
    for (std::size_t i = 0; i < kNumMeasures; ++i) {
      w[i] = kLambdaLevels[digit[i]];
      any = any || w[i] > 0.0;
    }
    if (!any) continue;
    LambdaConfig cfg = LambdaConfig(w).l1_normalized();
    if (seen.insert(cfg.weights()).second) out.push_back(cfg);
  }
  return out;
}

inline ConfigEvaluation evaluate_config(const LambdaConfig& lambda, std::span<const VideoIndex> videos, const Budget& b) {
  if (videos.empty()) throw std::invalid_argument("evaluate_config: empty video list");
  ConfigEvaluation out{lambda, {}, 0};
  for (const auto& v : videos) {
    const Summary x = greedy_select(v, lambda, b);
    const MeasureVector mv = measure_vector(x.snippet_indices, v);
    for (std::size_t i = 0; i < kNumMeasures; ++i) out.values[i] += mv.normalized[i];
  }
  for (auto& x : out.values) x /= static_cast<double>(videos.size());
  return out;
}

inline std::vector<ConfigEvaluation> evaluate_grid(std::span<const LambdaConfig> grid, std::span<const VideoIndex> videos,
                                                   const Budget& b) {
  std::vector<ConfigEvaluation> out(grid.size());
  // Warm the denominator memo once per video so workers only read it.
  for (const auto& v : videos) normalization_denominators(v, b.resolve(v.size()));
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    out[i] = evaluate_config(grid[i], videos, b);
    out[i].grid_index = i;
  });
  return out;
}

// u dominates v: at least as good everywhere and strictly better somewhere.
inline bool dominates(const MeasureArray& u, const MeasureArray& v) {
  bool strictly = false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < v[i]) return false;
    strictly = strictly || u[i] > v[i];
  }
  return strictly;
}

// Incremental front maintenance: starting from one element, each further
// candidate is discarded if some member dominates it, otherwise it evicts
// the members it dominates and joins. The start is the first element, or a
// seeded random one. Output is ordered by grid_index.
inline std::vector<ConfigEvaluation> pareto_filter(std::span<const ConfigEvaluation> evals,
                                                   std::optional<std::uint64_t> seed = std::nullopt) {
  if (evals.empty()) return {};
  std::size_t start = 0;
  if (seed) start = static_cast<std::size_t>(detail::derived_rng(*seed, 0xf207) () % evals.size());
  std::vector<ConfigEvaluation> front;
  for (std::size_t step = 0; step < evals.size(); ++step) {
    const auto& cand = evals[(start + step) % evals.size()];
    bool dominated = false;
    for (const auto& f : front)
      if (dominates(f.values, cand.values)) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    std::erase_if(front, [&](const ConfigEvaluation& f) { return dominates(cand.values, f.values); });
    front.push_back(cand);
  }
  std::sort(front.begin(), front.end(),
            [](const ConfigEvaluation& a, const ConfigEvaluation& b) { return a.grid_index < b.grid_index; });
  return front;
}

inline std::vector<ConfigEvaluation> pareto_front(std::span<const LambdaConfig> grid, std::span<const VideoIndex> videos,
                                                  const Budget& b, std::optional<std::uint64_t> seed = std::nullopt) {
  if (grid.empty()) throw std::invalid_argument("pareto_front: empty grid");
  const auto evals = evaluate_grid(grid, videos, b);
  return pareto_filter(evals, seed);
}

inline double proportional_fairness(const MeasureArray& values) {
  double f = 0.0;
  for (double v : values) f += std::log1p(v);
  return f;
}

struct PropFairSelection {
  std::vector<ConfigEvaluation> top;
  bool truncated = false;  // fewer than T configurations were available
};

// The T highest-F evaluations, descending, ties by grid order.
inline PropFairSelection propfair_select(std::span<const ConfigEvaluation> evals, std::size_t t) {
  if (t == 0) throw std::invalid_argument("propfair: T must be >= 1");
  PropFairSelection out;
  out.truncated = t > evals.size();
  t = std::min(t, evals.size());
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(evals.size());
  for (std::size_t i = 0; i < evals.size(); ++i) keyed.emplace_back(proportional_fairness(evals[i].values), i);
  auto better = [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return evals[a.second].grid_index < evals[b.second].grid_index;
  };
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(t), keyed.end(), better);
  for (std::size_t i = 0; i < t; ++i) out.top.push_back(evals[keyed[i].second]);
  return out;
}

inline PropFairSelection propfair_top(std::span<const LambdaConfig> grid, std::span<const VideoIndex> videos,
                                      const Budget& b, std::size_t t) {
  const auto evals = evaluate_grid(grid, videos, b);
  return propfair_select(evals, t);
}

// ---------------------------------------------------------------------------
// Reference bank

enum class BankMode { kPareto, kPropFair };

struct BankEntry {
  Summary summary;
  LambdaConfig config;
  std::size_t config_grid_index = 0;
  double budget_fraction = 0.0;
  std::size_t budget = 0;
  MeasureVector measures;
};

struct ReferenceBank {
  std::vector<std::vector<BankEntry>> per_video;  // parallel to the input videos
  std::vector<ConfigEvaluation> selected_configs;  // candidate order actually used
  std::size_t front_size = 0;
  bool short_of_count = false;  // some video got fewer than `count` distinct summaries
};

// Candidate configurations in the order the bank consumes them. Pareto mode
// takes the front in seeded random order, then backfills with the remaining
// grid ranked by proportional fairness; prop-fair mode takes the F ranking.
inline std::vector<ConfigEvaluation> bank_candidate_order(std::span<const ConfigEvaluation> evals, BankMode mode,
                                                          std::uint64_t seed, std::size_t* front_size = nullptr) {
  std::vector<ConfigEvaluation> order;
  std::vector<char> used(evals.size(), 0);
  if (mode == BankMode::kPareto) {
    auto front = pareto_filter(evals, seed);
    if (front_size) *front_size = front.size();
    auto rng = detail::derived_rng(seed, 0xba4c);
    for (std::size_t i = front.size(); i > 1; --i) std::swap(front[i - 1], front[detail::int_draw(rng, 0, i - 1)]);
    for (const auto& f : front) {
      order.push_back(f);
      for (std::size_t i = 0; i < evals.size(); ++i)
        if (evals[i].grid_index == f.grid_index) used[i] = 1;
    }
  } else if (front_size) {
    *front_size = 0;
  }
  std::vector<ConfigEvaluation> rest;
  for (std::size_t i = 0; i < evals.size(); ++i)
    if (!used[i]) rest.push_back(evals[i]);
  for (auto& e : propfair_select(rest, std::max<std::size_t>(rest.size(), 1)).top) order.push_back(std::move(e));
  return order;
}

// Emits up to `count` distinct greedy summaries per video. Each candidate
// configuration is run at a budget drawn uniformly from `range` with a
// per-video seeded stream; repeated summaries are skipped and the next
// candidate backfills.
inline ReferenceBank generate_reference_bank(std::span<const VideoIndex> videos, std::span<const LambdaConfig> grid,
                                             const BudgetRange& range, BankMode mode, std::size_t count,
                                             std::uint64_t seed) {
  range.check();
  if (videos.empty()) throw std::invalid_argument("generate_reference_bank: empty video list");
  if (grid.empty()) throw std::invalid_argument("generate_reference_bank: empty grid");
  const auto evals = evaluate_grid(grid, videos, Budget::fraction(range.midpoint()));
  ReferenceBank bank;
  bank.selected_configs = bank_candidate_order(evals, mode, seed, &bank.front_size);
  bank.per_video.resize(videos.size());

  detail::parallel_for(videos.size(), [&](std::size_t vi) {
    const auto& v = videos[vi];
    auto rng = detail::derived_rng(seed, 0x10000 + vi);
    std::set<std::vector<SnippetIndex>> seen;
    auto& entries = bank.per_video[vi];
    for (const auto& cand : bank.selected_configs) {
      if (entries.size() >= count) break;
      const double frac = range.lo + (range.hi - range.lo) * detail::unit_draw(rng);
      const std::size_t k = Budget::fraction(frac).resolve(v.size());
      Summary x = greedy_select(v, cand.config, k);
      if (!seen.insert(x.snippet_indices).second) continue;
      BankEntry e{x, cand.config, cand.grid_index, frac, k, measure_vector(x.snippet_indices, v)};
      entries.push_back(std::move(e));
    }
  });
  for (const auto& entries : bank.per_video) bank.short_of_count = bank.short_of_count || entries.size() < count;
  return bank;
}

}  // namespace vsummkit
