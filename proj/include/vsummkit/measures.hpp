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

// Summary quality measures computed from snippet annotations:
//
//   importance      sum of ratings of selected snippets outside mega-events
//   mega_cont       sum over mega-events of r_mega * |X cap M|^2
//   div_sim         min pairwise (1 - Jaccard) keyword dissimilarity
//   div_time        sum over time clusters of the best selected rating
//   div_concept     same, over concept clusters
//
// plus F1 against reference summaries.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vsummkit/annotation.hpp"

namespace vsummkit {

// Order matches the weights of LambdaConfig.
enum class Measure : std::size_t { kMegaCont = 0, kImportance, kDivSim, kDivTime, kDivConcept };
inline constexpr std::size_t kNumMeasures = 5;
inline constexpr std::array<Measure, kNumMeasures> kAllMeasures = {
    Measure::kMegaCont, Measure::kImportance, Measure::kDivSim, Measure::kDivTime, Measure::kDivConcept};

inline std::string_view measure_name(Measure m) {
  constexpr std::array<std::string_view, kNumMeasures> names = {"mega_cont", "importance", "div_sim", "div_time",
                                                                "div_concept"};
  return names[static_cast<std::size_t>(m)];
}

inline Measure measure_from_name(std::string_view name) {
  for (auto m : kAllMeasures)
    if (measure_name(m) == name) return m;
  throw std::invalid_argument("unknown measure '" + std::string(name) + "'");
}

using MeasureArray = std::array<double, kNumMeasures>;

inline double& at(MeasureArray& a, Measure m) { return a[static_cast<std::size_t>(m)]; }
inline double at(const MeasureArray& a, Measure m) { return a[static_cast<std::size_t>(m)]; }

struct MeasureVector {
  MeasureArray raw{};
  MeasureArray normalized{};  // percentages in [0, 100]

  double imp() const { return at(raw, Measure::kImportance); }
  double mega_cont() const { return at(raw, Measure::kMegaCont); }
  double div_sim() const { return at(raw, Measure::kDivSim); }
  double div_time() const { return at(raw, Measure::kDivTime); }
  double div_concept() const { return at(raw, Measure::kDivConcept); }
};

// Jaccard index of two sorted id lists; two empty sets are identical.
inline double jaccard(std::span<const int> a, std::span<const int> b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else { ++inter; ++i; ++j; }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

enum class ClusterKind { kTime, kConcept };

struct ClusterSet {
  ClusterKind kind = ClusterKind::kTime;
  std::vector<std::vector<SnippetIndex>> clusters;
  std::vector<std::string> labels;  // keyword per concept cluster; empty for time clusters
};

// Greedy left-to-right partition: a snippet joins the open cluster iff the
// Jaccard index of its keywords with the cluster's first snippet is >= tau.
inline ClusterSet cluster_time(const Annotation& a, double tau) {
  ClusterSet out{ClusterKind::kTime, {}, {}};
  const Snippet* head = nullptr;
  for (const auto& s : a.snippets) {
    bool join = false;
    if (head) {
      std::size_t inter = 0;
      for (const auto& k : s.keywords) inter += head->keywords.count(k);
      const std::size_t uni = s.keywords.size() + head->keywords.size() - inter;
      const double j = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
      join = j >= tau;
    }
    if (!join) {
      out.clusters.emplace_back();
      head = &s;
    }
    out.clusters.back().push_back(s.index);
  }
  return out;
}

// One cluster per distinct full "category:concept" keyword, holding every
// snippet that carries it, ordered by keyword.
inline ClusterSet cluster_concept(const Annotation& a) {
  std::map<std::string, std::vector<SnippetIndex>> by_kw;
  for (const auto& s : a.snippets)
    for (const auto& k : s.keywords) by_kw[k].push_back(s.index);
  ClusterSet out{ClusterKind::kConcept, {}, {}};
  for (auto& [keyword, members] : by_kw) {
    out.labels.push_back(keyword);
    out.clusters.push_back(std::move(members));
  }
  return out;
}

// Flattened, index-addressed view of one annotated video with its ratings.
// Immutable after construction apart from an internal, thread-safe memo of
// normalization denominators keyed by budget.
class VideoIndex {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  VideoIndex(Annotation a, RatingMap r, double tau = 1.0)
      : annotation_(std::move(a)), ratings_(std::move(r)), tau_(tau),
        denominators_(std::make_shared<DenominatorMemo>()) {
    const std::size_t n = annotation_.size();
    rating_.resize(n);
    keyword_ids_.resize(n);
    mega_of_.assign(n, npos);
    time_cluster_of_.assign(n, 0);
    concept_clusters_of_.resize(n);

    std::map<std::string, int> ids;
    for (const auto& s : annotation_.snippets)
      for (const auto& k : s.keywords) ids.emplace(k, 0);
    int next = 0;
    for (auto& [k, id] : ids) id = next++;
    num_keywords_ = static_cast<std::size_t>(next);

    for (std::size_t pos = 0; pos < n; ++pos) {
      const auto& s = annotation_.snippets[pos];
      if (s.index != pos) throw std::invalid_argument("snippet indices of '" + annotation_.video_id + "' are not 0..n-1");
      rating_[pos] = snippet_rating(s, ratings_);
      for (const auto& k : s.keywords) keyword_ids_[pos].push_back(ids.at(k));
      concept_clusters_of_[pos] = keyword_ids_[pos];  // keyword sets are std::set, ids sorted
    }

    for (std::size_t e = 0; e < annotation_.mega_events.size(); ++e) {
      int best = 0;
      for (auto s : annotation_.mega_events[e].snippets) {
        if (s >= n) throw std::invalid_argument("mega-event index out of range");
        mega_of_[s] = e;
        best = std::max(best, rating_[s]);
      }
      mega_rating_.push_back(best);
      mega_size_.push_back(annotation_.mega_events[e].snippets.size());
    }

    auto tc = cluster_time(annotation_, tau_);
    num_time_clusters_ = tc.clusters.size();
    for (std::size_t c = 0; c < tc.clusters.size(); ++c)
      for (auto s : tc.clusters[c]) time_cluster_of_[s] = c;
  }

  const Annotation& annotation() const { return annotation_; }
  const RatingMap& ratings() const { return ratings_; }
  const std::string& video_id() const { return annotation_.video_id; }
  double tau() const { return tau_; }
  std::size_t size() const { return rating_.size(); }
  double snippet_duration() const { return annotation_.snippet_duration_sec; }

  int rating(SnippetIndex s) const { return rating_[s]; }
  const std::vector<int>& ratings_vector() const { return rating_; }
  std::span<const int> keyword_ids(SnippetIndex s) const { return keyword_ids_[s]; }
  std::size_t num_keywords() const { return num_keywords_; }

  std::size_t mega_of(SnippetIndex s) const { return mega_of_[s]; }
  std::size_t num_mega_events() const { return mega_rating_.size(); }
  int mega_rating(std::size_t e) const { return mega_rating_[e]; }
  std::size_t mega_size(std::size_t e) const { return mega_size_[e]; }

  std::size_t time_cluster_of(SnippetIndex s) const { return time_cluster_of_[s]; }
  std::size_t num_time_clusters() const { return num_time_clusters_; }
  std::span<const int> concept_clusters_of(SnippetIndex s) const { return concept_clusters_of_[s]; }

  double dissimilarity(SnippetIndex i, SnippetIndex j) const {
    return 1.0 - jaccard(keyword_ids_[i], keyword_ids_[j]);
  }

  // Memo used by the normalization step; see normalize.hpp.
  std::optional<MeasureArray> cached_denominators(std::size_t budget) const {
    std::shared_lock lock(denominators_->mutex);
    auto it = denominators_->values.find(budget);
    if (it == denominators_->values.end()) return std::nullopt;
    return it->second;
  }
  void store_denominators(std::size_t budget, const MeasureArray& d) const {
    std::unique_lock lock(denominators_->mutex);
    denominators_->values.emplace(budget, d);
  }

 private:
  struct DenominatorMemo {
    std::shared_mutex mutex;
    std::map<std::size_t, MeasureArray> values;
  };

  Annotation annotation_;
  RatingMap ratings_;
  double tau_;
  std::vector<int> rating_;
  std::vector<std::vector<int>> keyword_ids_;
  std::size_t num_keywords_ = 0;
  std::vector<std::size_t> mega_of_;
  std::vector<int> mega_rating_;
  std::vector<std::size_t> mega_size_;
  std::vector<std::size_t> time_cluster_of_;
  std::size_t num_time_clusters_ = 0;
  std::vector<std::vector<int>> concept_clusters_of_;
  std::shared_ptr<DenominatorMemo> denominators_;
};

// ---------------------------------------------------------------------------
// Measures over an indexed video. `selected` must hold distinct valid indices.

inline double importance(std::span<const SnippetIndex> selected, const VideoIndex& v) {
  double total = 0.0;
  for (auto s : selected)
    if (v.mega_of(s) == VideoIndex::npos) total += v.rating(s);
  return total;
}

inline double mega_continuity(std::span<const SnippetIndex> selected, const VideoIndex& v) {
  std::vector<std::size_t> count(v.num_mega_events(), 0);
  for (auto s : selected)
    if (auto e = v.mega_of(s); e != VideoIndex::npos) ++count[e];
  double total = 0.0;
  for (std::size_t e = 0; e < count.size(); ++e)
    total += static_cast<double>(v.mega_rating(e)) * static_cast<double>(count[e] * count[e]);
  return total;
}

// Minimum pairwise dissimilarity; 1 when fewer than two snippets are selected.
inline double diversity_sim(std::span<const SnippetIndex> selected, const VideoIndex& v) {
  double best = 1.0;
  for (std::size_t i = 0; i < selected.size(); ++i)
    for (std::size_t j = i + 1; j < selected.size(); ++j)
      best = std::min(best, v.dissimilarity(selected[i], selected[j]));
  return best;
}

inline double diversity_time(std::span<const SnippetIndex> selected, const VideoIndex& v) {
  std::vector<int> best(v.num_time_clusters(), 0);
  for (auto s : selected) best[v.time_cluster_of(s)] = std::max(best[v.time_cluster_of(s)], v.rating(s));
  return std::accumulate(best.begin(), best.end(), 0.0);
}

inline double diversity_concept(std::span<const SnippetIndex> selected, const VideoIndex& v) {
  std::vector<int> best(v.num_keywords(), 0);
  for (auto s : selected)
    for (int c : v.concept_clusters_of(s)) best[c] = std::max(best[c], v.rating(s));
  return std::accumulate(best.begin(), best.end(), 0.0);
}

// Sum over clusters of the best rating among selected members.
inline double diversity_clustered(std::span<const SnippetIndex> selected, const ClusterSet& clusters,
                                  const VideoIndex& v) {
  std::vector<char> chosen(v.size(), 0);
  for (auto s : selected) chosen[s] = 1;
  double total = 0.0;
  for (const auto& c : clusters.clusters) {
    int best = 0;
    for (auto s : c)
      if (chosen[s]) best = std::max(best, v.rating(s));
    total += best;
  }
  return total;
}

inline double measure_value(Measure m, std::span<const SnippetIndex> selected, const VideoIndex& v) {
  switch (m) {
    case Measure::kMegaCont: return mega_continuity(selected, v);
    case Measure::kImportance: return importance(selected, v);
    case Measure::kDivSim: return diversity_sim(selected, v);
    case Measure::kDivTime: return diversity_time(selected, v);
    case Measure::kDivConcept: return diversity_concept(selected, v);
  }
  return 0.0;
}

inline MeasureArray raw_measures(std::span<const SnippetIndex> selected, const VideoIndex& v) {
  MeasureArray out{};
  for (auto m : kAllMeasures) at(out, m) = measure_value(m, selected, v);
  return out;
}

// Convenience overloads over the plain data model.
inline double importance(const Summary& x, const Annotation& a, const RatingMap& r) {
  check_summary(x, a);
  return importance(x.snippet_indices, VideoIndex(a, r));
}
inline double mega_continuity(const Summary& x, const Annotation& a, const RatingMap& r) {
  check_summary(x, a);
  return mega_continuity(x.snippet_indices, VideoIndex(a, r));
}

// Keyword-only measure, so no rating map is needed.
inline double diversity_sim(const Summary& x, const Annotation& a) {
  check_summary(x, a);
  std::map<std::string, int> ids;
  for (const auto& s : a.snippets)
    for (const auto& k : s.keywords) ids.emplace(k, static_cast<int>(ids.size()));
  auto keyword_ids = [&](SnippetIndex s) {
    std::vector<int> out;
    for (const auto& k : a.snippets[s].keywords) out.push_back(ids.at(k));
    std::sort(out.begin(), out.end());
    return out;
  };
  double best = 1.0;
  const auto& sel = x.snippet_indices;
  for (std::size_t i = 0; i < sel.size(); ++i)
    for (std::size_t j = i + 1; j < sel.size(); ++j)
      best = std::min(best, 1.0 - jaccard(keyword_ids(sel[i]), keyword_ids(sel[j])));
  return best;
}

inline double diversity_clustered(const Summary& x, const ClusterSet& clusters, const Annotation& a,
                                  const RatingMap& r) {
  check_summary(x, a);
  return diversity_clustered(x.snippet_indices, clusters, VideoIndex(a, r));
}

// ---------------------------------------------------------------------------
// F1 against references (keyshot convention over uniform snippets).

enum class RecallDenominator { kReference, kVideo };

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline F1Score f1(const Summary& candidate, const Summary& reference, const Annotation& a,
                  RecallDenominator denom = RecallDenominator::kReference) {
  check_summary(candidate, a);
  check_summary(reference, a);
  if (candidate.empty() || reference.empty()) return {};
  std::size_t inter = 0;
  auto i = candidate.snippet_indices.begin();
  auto j = reference.snippet_indices.begin();
  while (i != candidate.snippet_indices.end() && j != reference.snippet_indices.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else { ++inter; ++i; ++j; }
  }
  const double d = a.snippet_duration_sec;
  const double overlap = static_cast<double>(inter) * d;
  F1Score out;
  out.precision = overlap / (static_cast<double>(candidate.size()) * d);
  const double recall_den =
      denom == RecallDenominator::kVideo ? a.duration_sec() : static_cast<double>(reference.size()) * d;
  out.recall = overlap / recall_den;
  const double pr = out.precision + out.recall;
  out.f1 = pr > 0.0 ? 2.0 * out.precision * out.recall / pr : 0.0;
  return out;
}

struct F1Stats {
  double avg = 0.0;  // AF1
  double max = 0.0;  // MF1
  std::vector<double> per_reference;
};

inline F1Stats f1_stats(const Summary& candidate, std::span<const Summary> references, const Annotation& a,
                        RecallDenominator denom = RecallDenominator::kReference) {
  if (references.empty()) throw std::invalid_argument("f1_stats: empty reference list");
  F1Stats out;
  for (const auto& ref : references) out.per_reference.push_back(f1(candidate, ref, a, denom).f1);
  out.avg = std::accumulate(out.per_reference.begin(), out.per_reference.end(), 0.0) /
            static_cast<double>(out.per_reference.size());
  out.max = *std::max_element(out.per_reference.begin(), out.per_reference.end());
  return out;
}

// For each reference, AF1/MF1 against all the others.
inline std::vector<F1Stats> leave_one_out_consistency(std::span<const Summary> references, const Annotation& a,
                                                      RecallDenominator denom = RecallDenominator::kReference) {
  if (references.size() < 2) throw std::invalid_argument("leave_one_out_consistency: need at least 2 references");
  std::vector<F1Stats> out;
  std::vector<Summary> others;
  for (std::size_t i = 0; i < references.size(); ++i) {
    others.clear();
    for (std::size_t j = 0; j < references.size(); ++j)
      if (j != i) others.push_back(references[j]);
    out.push_back(f1_stats(references[i], others, a, denom));
  }
  return out;
}

}  // namespace vsummkit
