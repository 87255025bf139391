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

// Cardinality-constrained greedy maximization.
//
// Objectives are grown one element at a time and report marginal gains split
// in two parts:
//
//   submodular  never increases as the set grows, so a stale value is an
//               upper bound on the current one (accelerated greedy);
//   other       anything else. The objective supplies other_bound(s), an
//               upper bound on this part against the current set (+inf
//               when nothing is known).
//
// Each step lazy_greedy rebuilds its queue with stale_submodular + other_bound
// as keys and only re-evaluates the top, which makes its output identical to
// naive_greedy (full re-evaluation each step, ties to the lowest index)
// whether or not the objective is submodular.

#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "vsummkit/annotation.hpp"

namespace vsummkit {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct Gain {
  double submodular = 0.0;
  double other = 0.0;
  double total() const { return submodular + other; }
};

template <class F>
concept IncrementalObjective = requires(F f, const F cf, SnippetIndex s) {
  { cf.ground_size() } -> std::convertible_to<std::size_t>;
  { cf.gain(s) } -> std::convertible_to<Gain>;
  { cf.other_bound(s) } -> std::convertible_to<double>;
  f.add(s);
};

struct GreedyStats {
  std::size_t gain_evaluations = 0;
};

template <IncrementalObjective F>
std::vector<SnippetIndex> naive_greedy(F& f, std::size_t k, GreedyStats* stats = nullptr) {
  const std::size_t n = f.ground_size();
  k = std::min(k, n);
  std::vector<char> taken(n, 0);
  std::vector<SnippetIndex> selected;
  selected.reserve(k);
  for (std::size_t step = 0; step < k; ++step) {
    SnippetIndex best = n;
    double best_gain = -kUnbounded;
    for (SnippetIndex s = 0; s < n; ++s) {
      if (taken[s]) continue;
      const double g = f.gain(s).total();
      if (stats) ++stats->gain_evaluations;
      if (best == n || g > best_gain) {
        best = s;
        best_gain = g;
      }
    }
    taken[best] = 1;
    f.add(best);
    selected.push_back(best);
  }
  return selected;
}

template <IncrementalObjective F>
std::vector<SnippetIndex> lazy_greedy(F& f, std::size_t k, GreedyStats* stats = nullptr) {
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  const std::size_t n = f.ground_size();
  k = std::min(k, n);

  struct Entry {
    double key;
    SnippetIndex s;
  };
  // Max-heap on key, lowest index first among equal keys.
  auto lower = [](const Entry& a, const Entry& b) { return a.key < b.key || (a.key == b.key && a.s > b.s); };

  std::vector<double> stale_submodular(n, kUnbounded);
  std::vector<std::size_t> fresh_at(n, kNever);
  std::vector<char> taken(n, 0);
  std::vector<Entry> heap;
  heap.reserve(n);
  std::vector<SnippetIndex> selected;
  selected.reserve(k);

  for (std::size_t step = 0; step < k; ++step) {
    heap.clear();
    for (SnippetIndex s = 0; s < n; ++s) {
      if (taken[s]) continue;
      double key = stale_submodular[s];
      if (key != kUnbounded) key += f.other_bound(s);
      heap.push_back({key, s});
    }
    std::make_heap(heap.begin(), heap.end(), lower);

    SnippetIndex chosen = n;
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), lower);
      Entry top = heap.back();
      heap.pop_back();
      if (fresh_at[top.s] == step) {
        chosen = top.s;
        break;
      }
      const Gain g = f.gain(top.s);
      if (stats) ++stats->gain_evaluations;
      stale_submodular[top.s] = g.submodular;
      fresh_at[top.s] = step;
      heap.push_back({g.total(), top.s});
      std::push_heap(heap.begin(), heap.end(), lower);
    }
    taken[chosen] = 1;
    f.add(chosen);
    selected.push_back(chosen);
  }
  return selected;
}

// ---------------------------------------------------------------------------
// Runtime-polymorphic set functions, used where objectives are assembled from
// configuration (mixture models, loss-augmented inference).

class IncrementalSetFunction {
 public:
  virtual ~IncrementalSetFunction() = default;
  virtual std::size_t ground_size() const = 0;
  virtual Gain gain(SnippetIndex s) const = 0;
  virtual double other_bound(SnippetIndex) const { return kUnbounded; }
  virtual void add(SnippetIndex s) = 0;
  virtual double value() const = 0;
};

// Non-negative weighted sum of incremental set functions.
class WeightedSum {
 public:
  void push(double weight, IncrementalSetFunction* f) {
    if (weight < 0.0) throw std::invalid_argument("WeightedSum: negative weight");
    if (sized_ && f->ground_size() != n_) throw std::invalid_argument("WeightedSum: ground set size mismatch");
    n_ = f->ground_size();
    sized_ = true;
    if (weight > 0.0) terms_.push_back({weight, f});
  }

  std::size_t ground_size() const { return n_; }

  Gain gain(SnippetIndex s) const {
    Gain out;
    for (const auto& t : terms_) {
      const Gain g = t.f->gain(s);
      out.submodular += t.weight * g.submodular;
      out.other += t.weight * g.other;
    }
    return out;
  }

  double other_bound(SnippetIndex s) const {
    double b = 0.0;
    for (const auto& t : terms_) b += t.weight * t.f->other_bound(s);
    return b;
  }

  void add(SnippetIndex s) {
    for (auto& t : terms_) t.f->add(s);
  }

  double value() const {
    double v = 0.0;
    for (const auto& t : terms_) v += t.weight * t.f->value();
    return v;
  }

 private:
  struct Term {
    double weight;
    IncrementalSetFunction* f;
  };
  std::vector<Term> terms_;
  std::size_t n_ = 0;
  bool sized_ = false;
};

// Wraps an arbitrary set function; every gain is a full re-evaluation.
class OpaqueSetFunction final : public IncrementalSetFunction {
 public:
  using Fn = std::function<double(std::span<const SnippetIndex>)>;

  OpaqueSetFunction(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) { current_ = fn_(selected_); }

  std::size_t ground_size() const override { return n_; }
  Gain gain(SnippetIndex s) const override {
    auto trial = selected_;
    trial.insert(std::upper_bound(trial.begin(), trial.end(), s), s);
    return {0.0, fn_(trial) - current_};
  }
  void add(SnippetIndex s) override {
    selected_.insert(std::upper_bound(selected_.begin(), selected_.end(), s), s);
    current_ = fn_(selected_);
  }
  double value() const override { return current_; }

 private:
  std::size_t n_;
  Fn fn_;
  std::vector<SnippetIndex> selected_;
  double current_ = 0.0;
};

}  // namespace vsummkit
