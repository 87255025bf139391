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

// Mixture-of-set-functions summarizer trained with a large-margin objective.
//
//   o(y)   = w^T f(y),  w >= 0
//   L_n(w) = max_y [ o(y) + l_n(y) ] - o(y_gt)
//   min_w  (1/N) sum_n L_n(w) + (lambda/2) ||w||^2
//
// Components are facility location over a snippet similarity, modular
// per-snippet scores from external models, and the five annotation measures.
// Each component is divided by its value on the full ground set so weights
// are comparable across components.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vsummkit/annotation.hpp"
#include "vsummkit/greedy.hpp"
#include "vsummkit/io.hpp"
#include "vsummkit/measures.hpp"
#include "vsummkit/normalize.hpp"
#include "vsummkit/summarizer.hpp"
#include "vsummkit/synth.hpp"

namespace vsummkit {

// ---------------------------------------------------------------------------
// Similarity

class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;

  // Validates symmetry, non-negativity and a maximal diagonal in each row.
  SimilarityMatrix(std::size_t n, std::vector<double> values) : n_(n), m_(std::move(values)) {
    if (m_.size() != n_ * n_) throw std::invalid_argument("similarity: expected n*n values");
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const double x = (*this)(i, j);
        if (!(x >= 0.0) || !std::isfinite(x))
          throw std::invalid_argument("similarity: entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") must be finite and >= 0");
        if (x != (*this)(j, i))
          throw std::invalid_argument("similarity: not symmetric at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        if (x > (*this)(i, i))
          throw std::invalid_argument("similarity: diagonal not maximal in row " + std::to_string(i));
      }
  }

  static SimilarityMatrix jaccard(const VideoIndex& v) {
    const std::size_t n = v.size();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m[i * n + j] = m[j * n + i] = vsummkit::jaccard(v.keyword_ids(i), v.keyword_ids(j));
    return {n, std::move(m)};
  }

  static SimilarityMatrix parse(std::string_view text) {
    std::size_t n = 0;
    auto values = parse_similarity_matrix(text, n);
    return {n, std::move(values)};
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
  const std::vector<double>& values() const { return m_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> m_;
};

// f_fl(X) = sum_v max_{x in X} sim(v, x); zero for the empty set.
inline double facility_location(std::span<const SnippetIndex> selected, const SimilarityMatrix& sim) {
  double total = 0.0;
  for (std::size_t v = 0; v < sim.size(); ++v) {
    double best = 0.0;
    for (auto x : selected) best = std::max(best, sim(v, x));
    total += best;
  }
  return total;
}

inline double facility_location(const Summary& x, const SimilarityMatrix& sim, const Annotation& a) {
  if (sim.size() != a.size())
    throw std::invalid_argument("facility_location: similarity is " + std::to_string(sim.size()) + "x" +
                                std::to_string(sim.size()) + " but the video has " + std::to_string(a.size()) +
                                " snippets");
  check_summary(x, a);
  return facility_location(x.snippet_indices, sim);
}

// ---------------------------------------------------------------------------
// Incremental component states

class FacilityLocationState final : public IncrementalSetFunction {
 public:
  FacilityLocationState(const SimilarityMatrix& sim, double scale)
      : sim_(&sim), scale_(scale), cover_(sim.size(), 0.0) {}

  std::size_t ground_size() const override { return sim_->size(); }
  Gain gain(SnippetIndex s) const override {
    double g = 0.0;
    for (std::size_t v = 0; v < cover_.size(); ++v) g += std::max(0.0, (*sim_)(v, s) - cover_[v]);
    return {g / scale_, 0.0};
  }
  void add(SnippetIndex s) override {
    for (std::size_t v = 0; v < cover_.size(); ++v) cover_[v] = std::max(cover_[v], (*sim_)(v, s));
  }
  double value() const override { return std::accumulate(cover_.begin(), cover_.end(), 0.0) / scale_; }

 private:
  const SimilarityMatrix* sim_;
  double scale_;
  std::vector<double> cover_;
};

class ModularState final : public IncrementalSetFunction {
 public:
  ModularState(std::span<const double> scores, double scale) : scores_(scores), scale_(scale) {}

  std::size_t ground_size() const override { return scores_.size(); }
  Gain gain(SnippetIndex s) const override { return {scores_[s] / scale_, 0.0}; }
  void add(SnippetIndex s) override { total_ += scores_[s]; }
  double value() const override { return total_ / scale_; }

 private:
  std::span<const double> scores_;
  double scale_;
  double total_ = 0.0;
};

class MeasureComponentState final : public IncrementalSetFunction {
 public:
  MeasureComponentState(const VideoIndex& v, Measure m, double scale) : state_(v), m_(m), scale_(scale) {}

  std::size_t ground_size() const override { return state_.video().size(); }
  Gain gain(SnippetIndex s) const override {
    const double g = state_.gain(m_, s) / scale_;
    if (m_ == Measure::kMegaCont || m_ == Measure::kDivSim) return {0.0, g};
    return {g, 0.0};
  }
  // mega_cont: exact current gain; div_sim: gains are never positive.
  double other_bound(SnippetIndex s) const override {
    if (m_ == Measure::kMegaCont) return state_.gain(m_, s) / scale_;
    return 0.0;
  }
  void add(SnippetIndex s) override { state_.add(s); }
  double value() const override { return at(state_.values(), m_) / scale_; }

 private:
  MeasureState state_;
  Measure m_;
  double scale_;
};

// ---------------------------------------------------------------------------
// Model description

enum class ComponentKind { kFacilityLocation, kModular, kMeasure };

struct ComponentSpec {
  ComponentKind kind = ComponentKind::kFacilityLocation;
  std::string similarity = "jaccard";  // facility location: "jaccard" or "file"
  std::string path;                    // similarity or scores file; "{video_id}" is substituted
  Measure measure = Measure::kImportance;

  static ComponentSpec facility_location_jaccard() { return {}; }
  static ComponentSpec facility_location_file(std::string path) {
    return {ComponentKind::kFacilityLocation, "file", std::move(path), Measure::kImportance};
  }
  static ComponentSpec modular(std::string scores_file) {
    return {ComponentKind::kModular, "", std::move(scores_file), Measure::kImportance};
  }
  static ComponentSpec of_measure(Measure m) { return {ComponentKind::kMeasure, "", "", m}; }

  std::string label() const {
    switch (kind) {
      case ComponentKind::kFacilityLocation: return "facility_location(" + similarity + ")";
      case ComponentKind::kModular: return "modular(" + path + ")";
      case ComponentKind::kMeasure: return "measure(" + std::string(measure_name(measure)) + ")";
    }
    return "?";
  }

  friend bool operator==(const ComponentSpec&, const ComponentSpec&) = default;
};

inline std::string substitute_video_id(std::string pattern, const std::string& video_id) {
  const std::string key = "{video_id}";
  for (auto pos = pattern.find(key); pos != std::string::npos; pos = pattern.find(key, pos + video_id.size()))
    pattern.replace(pos, key.size(), video_id);
  return pattern;
}

inline Json to_json(const ComponentSpec& c) {
  switch (c.kind) {
    case ComponentKind::kFacilityLocation: {
      Json j = {{"kind", "facility_location"}, {"similarity", c.similarity}};
      if (c.similarity == "file") j["path"] = c.path;
      return j;
    }
    case ComponentKind::kModular: return {{"kind", "modular"}, {"scores_file", c.path}};
    case ComponentKind::kMeasure: return {{"kind", "measure"}, {"measure", std::string(measure_name(c.measure))}};
  }
  return {};
}

inline ComponentSpec component_from_json(const Json& j, const std::string& path) {
  using namespace detail;
  const std::string kind = as_string(require(j, "kind", path), path + "/kind");
  ComponentSpec c;
  if (kind == "facility_location") {
    c.kind = ComponentKind::kFacilityLocation;
    c.similarity = j.contains("similarity") ? as_string(j.at("similarity"), path + "/similarity") : "jaccard";
    if (c.similarity == "file") c.path = as_string(require(j, "path", path), path + "/path");
    else if (c.similarity != "jaccard") throw ParseError(path + "/similarity", "expected 'jaccard' or 'file'");
  } else if (kind == "modular") {
    c = ComponentSpec::modular("");
    c.path = as_string(require(j, "scores_file", path), path + "/scores_file");
  } else if (kind == "measure") {
    c = ComponentSpec::of_measure(Measure::kImportance);
    try {
      c.measure = measure_from_name(as_string(require(j, "measure", path), path + "/measure"));
    } catch (const std::invalid_argument& e) {
      throw ParseError(path + "/measure", e.what());
    }
  } else {
    throw ParseError(path + "/kind", "unknown component kind '" + kind + "'");
  }
  return c;
}

struct MixtureModel {
  std::vector<ComponentSpec> components;
  std::vector<double> weights;

  void check() const {
    if (components.empty()) throw std::invalid_argument("model: at least one component is required");
    if (weights.size() != components.size()) throw std::invalid_argument("model: one weight per component");
    for (double w : weights)
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("model: weights must be finite and >= 0");
  }
};

inline Json to_json(const MixtureModel& m) {
  Json comps = Json::array();
  for (const auto& c : m.components) comps.push_back(to_json(c));
  return {{"components", comps}, {"weights", m.weights}};
}

inline MixtureModel model_from_json(const Json& j) {
  using namespace detail;
  MixtureModel m;
  const auto& comps = as_array(require(j, "components", ""), "/components");
  for (std::size_t i = 0; i < comps.size(); ++i)
    m.components.push_back(component_from_json(comps[i], "/components/" + std::to_string(i)));
  if (j.contains("weights")) {
    const auto& w = as_array(j.at("weights"), "/weights");
    for (std::size_t i = 0; i < w.size(); ++i) m.weights.push_back(as_number(w[i], "/weights/" + std::to_string(i)));
  } else {
    m.weights.assign(m.components.size(), 1.0 / static_cast<double>(std::max<std::size_t>(m.components.size(), 1)));
  }
  try {
    m.check();
  } catch (const std::invalid_argument& e) {
    throw ParseError("/weights", e.what());
  }
  return m;
}

// ---------------------------------------------------------------------------
// Per-video feature functions

// Supplies file-backed component data for a video.
struct ComponentInputs {
  std::function<SimilarityMatrix(const ComponentSpec&, const VideoIndex&)> similarity;
  std::function<std::vector<double>(const ComponentSpec&, const VideoIndex&)> scores;
};

// The components of a model instantiated on one video. Keeps a pointer to
// the VideoIndex, which must outlive it.
class VideoFeatures {
 public:
  VideoFeatures(const VideoIndex& v, std::span<const ComponentSpec> specs, const ComponentInputs& inputs = {})
      : v_(&v), specs_(specs.begin(), specs.end()) {
    const std::size_t n = v.size();
    std::vector<SnippetIndex> all(n);
    std::iota(all.begin(), all.end(), SnippetIndex{0});
    for (const auto& c : specs_) {
      Data d;
      switch (c.kind) {
        case ComponentKind::kFacilityLocation:
          if (c.similarity == "file") {
            if (!inputs.similarity) throw std::invalid_argument("no similarity source for " + c.label());
            d.sim = std::make_shared<SimilarityMatrix>(inputs.similarity(c, v));
          } else {
            d.sim = std::make_shared<SimilarityMatrix>(SimilarityMatrix::jaccard(v));
          }
          if (d.sim->size() != n)
            throw std::invalid_argument("similarity dimension " + std::to_string(d.sim->size()) + " != " +
                                        std::to_string(n) + " snippets for '" + v.video_id() + "'");
          d.scale = facility_location(all, *d.sim);
          break;
        case ComponentKind::kModular:
          if (!inputs.scores) throw std::invalid_argument("no score source for " + c.label());
          d.scores = inputs.scores(c, v);
          if (d.scores.size() != n)
            throw std::invalid_argument(std::to_string(d.scores.size()) + " scores for " + std::to_string(n) +
                                        " snippets of '" + v.video_id() + "'");
          d.scale = std::accumulate(d.scores.begin(), d.scores.end(), 0.0, [](double acc, double x) {
            return acc + std::abs(x);
          });
          break;
        case ComponentKind::kMeasure: d.scale = measure_value(c.measure, all, v); break;
      }
      if (!(d.scale > 0.0)) d.scale = 1.0;
      data_.push_back(std::move(d));
    }
  }

  const VideoIndex& video() const { return *v_; }
  std::size_t num_components() const { return specs_.size(); }
  double scale(std::size_t c) const { return data_[c].scale; }

  // f(y), each component divided by its full-ground-set value.
  std::vector<double> features(std::span<const SnippetIndex> selected) const {
    std::vector<double> f(specs_.size());
    for (std::size_t c = 0; c < specs_.size(); ++c) {
      const auto& d = data_[c];
      switch (specs_[c].kind) {
        case ComponentKind::kFacilityLocation: f[c] = facility_location(selected, *d.sim) / d.scale; break;
        case ComponentKind::kModular: {
          double t = 0.0;
          for (auto s : selected) t += d.scores[s];
          f[c] = t / d.scale;
          break;
        }
        case ComponentKind::kMeasure: f[c] = measure_value(specs_[c].measure, selected, *v_) / d.scale; break;
      }
    }
    return f;
  }

  std::vector<std::unique_ptr<IncrementalSetFunction>> fresh_states() const {
    std::vector<std::unique_ptr<IncrementalSetFunction>> out;
    for (std::size_t c = 0; c < specs_.size(); ++c) {
      const auto& d = data_[c];
      switch (specs_[c].kind) {
        case ComponentKind::kFacilityLocation: out.push_back(std::make_unique<FacilityLocationState>(*d.sim, d.scale)); break;
        case ComponentKind::kModular: out.push_back(std::make_unique<ModularState>(d.scores, d.scale)); break;
        case ComponentKind::kMeasure:
          out.push_back(std::make_unique<MeasureComponentState>(*v_, specs_[c].measure, d.scale));
          break;
      }
    }
    return out;
  }

 private:
  struct Data {
    std::shared_ptr<SimilarityMatrix> sim;
    std::vector<double> scores;
    double scale = 1.0;
  };
  const VideoIndex* v_;
  std::vector<ComponentSpec> specs_;
  std::vector<Data> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i] * b[i];
  return t;
}

// ---------------------------------------------------------------------------
// Margin

// l(y) = sum_m beta_m * max(0, N_m(y_gt) - N_m(y)) / 100 with N the
// normalized measures at the reference's budget, so l(y_gt) = 0 and l >= 0.
class MarginState final : public IncrementalSetFunction {
 public:
  MarginState(const VideoIndex& v, const Summary& reference, const MeasureArray& beta)
      : state_(v), beta_(beta), budget_(reference.size()) {
    for (double b : beta_)
      if (!(b >= 0.0)) throw std::invalid_argument("margin: beta must be >= 0");
    denominators_ = normalization_denominators(v, budget_);
    target_ = normalize(raw_measures(reference.snippet_indices, v), denominators_);
    current_ = loss(state_.values());
  }

  std::size_t ground_size() const override { return state_.video().size(); }
  Gain gain(SnippetIndex s) const override { return {0.0, loss(state_.values_after(s)) - current_}; }
  // Only the div_sim term can grow, by at most its current normalized value.
  double other_bound(SnippetIndex) const override {
    const double ds = normalize(state_.values(), denominators_)[static_cast<std::size_t>(Measure::kDivSim)];
    const double b = at(beta_, Measure::kDivSim) * ds / 100.0;
    return b * (1.0 + 1e-12) + 1e-12;
  }
  void add(SnippetIndex s) override {
    state_.add(s);
    current_ = loss(state_.values());
  }
  double value() const override { return current_; }

  double loss(const MeasureArray& raw) const {
    const MeasureArray n = normalize(raw, denominators_);
    double l = 0.0;
    for (std::size_t m = 0; m < kNumMeasures; ++m) l += beta_[m] * std::max(0.0, target_[m] - n[m]) / 100.0;
    return l;
  }

 private:
  MeasureState state_;
  MeasureArray beta_;
  std::size_t budget_;
  MeasureArray denominators_{};
  MeasureArray target_{};
  double current_ = 0.0;
};

inline double margin(std::span<const SnippetIndex> y, const Summary& reference, const VideoIndex& v,
                     const MeasureArray& beta) {
  MarginState m(v, reference, beta);
  return m.loss(raw_measures(y, v));
}

inline double margin(const Summary& y, const Summary& reference, const Annotation& a, const RatingMap& r,
                     const MeasureArray& beta, double tau = 1.0) {
  check_summary(y, a);
  check_summary(reference, a);
  return margin(y.snippet_indices, reference, VideoIndex(a, r, tau), beta);
}

// ---------------------------------------------------------------------------
// Inference and loss-augmented inference

enum class InnerMax { kGreedy, kExhaustive };

inline Summary infer(const VideoFeatures& video, std::span<const double> weights, std::size_t k,
                     GreedyMode mode = GreedyMode::kLazy) {
  auto states = video.fresh_states();
  std::vector<IncrementalSetFunction*> ptrs;
  for (auto& s : states) ptrs.push_back(s.get());
  return greedy_select_lossaug(video.video().video_id(), ptrs, weights, nullptr,
                               std::min(k, video.video().size()), mode);
}

inline Summary infer(const VideoFeatures& video, const MixtureModel& model, const Budget& b) {
  return infer(video, model.weights, b.resolve(video.video().size()));
}

inline Summary loss_augmented_argmax(const VideoFeatures& video, std::span<const double> weights,
                                     const Summary& reference, const MeasureArray& beta, InnerMax inner) {
  const std::size_t k = reference.size();
  const auto& v = video.video();
  if (inner == InnerMax::kExhaustive) {
    auto best = exhaustive_optimum(
        v.size(),
        [&](std::span<const SnippetIndex> y) { return dot(weights, video.features(y)) + margin(y, reference, v, beta); },
        k);
    return Summary(v.video_id(), std::move(best.selection));
  }
  auto states = video.fresh_states();
  std::vector<IncrementalSetFunction*> ptrs;
  for (auto& s : states) ptrs.push_back(s.get());
  MarginState m(v, reference, beta);
  return greedy_select_lossaug(v.video_id(), ptrs, weights, &m, k);
}

struct HingeResult {
  double loss = 0.0;
  Summary y_star;
  bool clamped = false;  // the approximate inner max scored below y_gt
};

inline HingeResult hinge_loss(const VideoFeatures& video, const Summary& reference, std::span<const double> weights,
                              const MeasureArray& beta, InnerMax inner = InnerMax::kGreedy) {
  HingeResult out;
  out.y_star = loss_augmented_argmax(video, weights, reference, beta, inner);
  const auto& v = video.video();
  const double augmented =
      dot(weights, video.features(out.y_star.snippet_indices)) + margin(out.y_star.snippet_indices, reference, v, beta);
  const double raw = augmented - dot(weights, video.features(reference.snippet_indices));
  out.clamped = raw < 0.0;
  out.loss = std::max(0.0, raw);
  return out;
}

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
  double lambda_reg = 1e-3;
  std::size_t epochs = 20;
  double eta0 = 1.0;  // eta_t = eta0 / sqrt(t)
  MeasureArray beta{1.0, 1.0, 1.0, 1.0, 1.0};
  InnerMax inner = InnerMax::kGreedy;
  bool combined_gt = false;
  std::optional<std::vector<double>> initial_weights;  // default uniform 1/C

  void check() const {
    if (!(lambda_reg > 0.0)) throw std::invalid_argument("train: lambda_reg must be > 0");
    if (!(eta0 >= 0.0)) throw std::invalid_argument("train: eta0 must be >= 0");
    for (double b : beta)
      if (!(b >= 0.0)) throw std::invalid_argument("train: beta must be >= 0");
  }
};

struct TrainingExample {
  std::size_t video = 0;  // index into the feature list
  Summary reference;
};

struct TrainResult {
  std::vector<double> weights;
  std::vector<double> objective_trace;  // entry 0 before training, then one per epoch
  std::size_t clamped_losses = 0;
};

// One example per video whose reference is the top-k snippets by selection
// frequency across that video's references, k the rounded mean length.
inline std::vector<TrainingExample> combine_references(std::span<const TrainingExample> examples,
                                                       std::span<const VideoFeatures> videos) {
  std::vector<TrainingExample> out;
  for (std::size_t vi = 0; vi < videos.size(); ++vi) {
    std::vector<double> freq(videos[vi].video().size(), 0.0);
    std::size_t refs = 0, total_len = 0;
    for (const auto& e : examples) {
      if (e.video != vi) continue;
      ++refs;
      total_len += e.reference.size();
      for (auto s : e.reference.snippet_indices) freq[s] += 1.0;
    }
    if (refs == 0) continue;
    const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(total_len) / static_cast<double>(refs)));
    std::vector<SnippetIndex> order(freq.size());
    std::iota(order.begin(), order.end(), SnippetIndex{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return freq[a] > freq[b]; });
    order.resize(std::min(k, order.size()));
    out.push_back({vi, Summary(videos[vi].video().video_id(), order)});
  }
  return out;
}

inline double training_objective(std::span<const VideoFeatures> videos, std::span<const TrainingExample> examples,
                                 std::span<const double> w, const TrainConfig& cfg) {
  double total = 0.0;
  for (const auto& e : examples) total += hinge_loss(videos[e.video], e.reference, w, cfg.beta, cfg.inner).loss;
  return total / static_cast<double>(examples.size()) + 0.5 * cfg.lambda_reg * dot(w, w);
}

// Projected stochastic subgradient descent over the examples in fixed order.
inline TrainResult train(std::span<const VideoFeatures> videos, std::span<const TrainingExample> all_examples,
                         const TrainConfig& cfg) {
  cfg.check();
  if (videos.empty()) throw std::invalid_argument("train: no videos");
  const std::size_t dims = videos.front().num_components();
  if (dims == 0) throw std::invalid_argument("train: model has no components");
  for (const auto& v : videos)
    if (v.num_components() != dims) throw std::invalid_argument("train: component count differs across videos");

  std::vector<TrainingExample> examples;
  for (const auto& e : all_examples) {
    if (e.video >= videos.size()) throw std::invalid_argument("train: example refers to unknown video");
    check_summary(e.reference, videos[e.video].video().annotation());
    if (!e.reference.empty()) examples.push_back(e);
  }
  if (examples.empty()) throw std::invalid_argument("train: degenerate corpus (all references empty)");
  if (cfg.combined_gt) examples = combine_references(examples, videos);

  TrainResult out;
  out.weights = cfg.initial_weights.value_or(std::vector<double>(dims, 1.0 / static_cast<double>(dims)));
  if (out.weights.size() != dims) throw std::invalid_argument("train: initial weight count mismatch");
  out.objective_trace.push_back(training_objective(videos, examples, out.weights, cfg));

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& e : examples) {
      ++t;
      const auto& video = videos[e.video];
      const HingeResult h = hinge_loss(video, e.reference, out.weights, cfg.beta, cfg.inner);
      if (h.clamped) ++out.clamped_losses;
      const auto f_star = video.features(h.y_star.snippet_indices);
      const auto f_gt = video.features(e.reference.snippet_indices);
      const double eta = cfg.eta0 / std::sqrt(static_cast<double>(t));
      for (std::size_t c = 0; c < dims; ++c) {
        const double g = (h.loss > 0.0 ? f_star[c] - f_gt[c] : 0.0) + cfg.lambda_reg * out.weights[c];
        out.weights[c] = std::max(0.0, out.weights[c] - eta * g);
      }
    }
    out.objective_trace.push_back(training_objective(videos, examples, out.weights, cfg));
  }
  return out;
}

}  // namespace vsummkit
