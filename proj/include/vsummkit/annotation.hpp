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

// Annotation data model: snippets carrying "category:concept" keywords,
// mega-events over consecutive snippets, per-domain keyword ratings and
// summaries as sorted snippet index sets.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace vsummkit {

using SnippetIndex = std::size_t;

struct Snippet {
  SnippetIndex index = 0;
  std::set<std::string> keywords;

  friend bool operator==(const Snippet&, const Snippet&) = default;
};

// Snippet indices of one mega-event, ascending. A well-formed event is a
// contiguous run of at least two indices.
struct MegaEvent {
  std::vector<SnippetIndex> snippets;

  static MegaEvent range(SnippetIndex first, SnippetIndex last) {
    MegaEvent e;
    for (SnippetIndex i = first; i <= last; ++i) e.snippets.push_back(i);
    return e;
  }

  bool contiguous() const {
    for (std::size_t i = 1; i < snippets.size(); ++i)
      if (snippets[i] != snippets[i - 1] + 1) return false;
    return true;
  }

  friend bool operator==(const MegaEvent&, const MegaEvent&) = default;
};

struct Annotation {
  std::string video_id;
  std::string domain;
  double snippet_duration_sec = 1.0;
  std::vector<Snippet> snippets;  // ordered by index
  std::vector<MegaEvent> mega_events;

  std::size_t size() const { return snippets.size(); }
  double duration_sec() const { return snippet_duration_sec * static_cast<double>(snippets.size()); }

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct RatingMap {
  std::string domain;
  std::map<std::string, int> ratings;

  friend bool operator==(const RatingMap&, const RatingMap&) = default;
};

// A summary is a sorted, duplicate-free set of snippet indices of one video.
struct Summary {
  std::string video_id;
  std::vector<SnippetIndex> snippet_indices;

  Summary() = default;
  Summary(std::string id, std::vector<SnippetIndex> indices)
      : video_id(std::move(id)), snippet_indices(std::move(indices)) {
    std::sort(snippet_indices.begin(), snippet_indices.end());
    snippet_indices.erase(std::unique(snippet_indices.begin(), snippet_indices.end()),
                          snippet_indices.end());
  }

  std::size_t size() const { return snippet_indices.size(); }
  bool empty() const { return snippet_indices.empty(); }
  bool contains(SnippetIndex s) const {
    return std::binary_search(snippet_indices.begin(), snippet_indices.end(), s);
  }

  friend bool operator==(const Summary&, const Summary&) = default;
};

class UnknownKeyword : public std::invalid_argument {
 public:
  explicit UnknownKeyword(const std::string& keyword)
      : std::invalid_argument("unknown keyword '" + keyword + "'"), keyword_(keyword) {}
  const std::string& keyword() const { return keyword_; }

 private:
  std::string keyword_;
};

// Splits "category:concept"; the category is empty when there is no colon.
inline std::pair<std::string_view, std::string_view> split_keyword(std::string_view keyword) {
  auto colon = keyword.find(':');
  if (colon == std::string_view::npos) return {std::string_view{}, keyword};
  return {keyword.substr(0, colon), keyword.substr(colon + 1)};
}

// Zero if any keyword is rated zero or there are no keywords, otherwise the
// largest keyword rating.
inline int snippet_rating(const Snippet& s, const RatingMap& r) {
  if (s.keywords.empty()) return 0;
  int best = 0;
  bool has_zero = false;
  for (const auto& k : s.keywords) {
    auto it = r.ratings.find(k);
    if (it == r.ratings.end()) throw UnknownKeyword(k);
    if (it->second == 0) has_zero = true;
    best = std::max(best, it->second);
  }
  return has_zero ? 0 : best;
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationCode {
  kEmptyVideoId,
  kUnknownDomain,
  kDomainMismatch,
  kNonPositiveDuration,
  kSnippetIndexDuplicate,
  kSnippetIndexGap,
  kSnippetOutOfOrder,
  kBadKeyword,
  kUnknownKeyword,
  kRatingOutOfRange,
  kMegaTooShort,
  kMegaNotContiguous,
  kMegaOutOfRange,
  kMegaOverlap,
};

inline std::string_view to_string(ViolationCode c) {
  switch (c) {
    case ViolationCode::kEmptyVideoId: return "EMPTY_VIDEO_ID";
    case ViolationCode::kUnknownDomain: return "UNKNOWN_DOMAIN";
    case ViolationCode::kDomainMismatch: return "DOMAIN_MISMATCH";
    case ViolationCode::kNonPositiveDuration: return "NONPOSITIVE_DURATION";
    case ViolationCode::kSnippetIndexDuplicate: return "SNIPPET_INDEX_DUPLICATE";
    case ViolationCode::kSnippetIndexGap: return "SNIPPET_INDEX_GAP";
    case ViolationCode::kSnippetOutOfOrder: return "SNIPPET_OUT_OF_ORDER";
    case ViolationCode::kBadKeyword: return "BAD_KEYWORD";
    case ViolationCode::kUnknownKeyword: return "UNKNOWN_KEYWORD";
    case ViolationCode::kRatingOutOfRange: return "RATING_OUT_OF_RANGE";
    case ViolationCode::kMegaTooShort: return "MEGA_TOO_SHORT";
    case ViolationCode::kMegaNotContiguous: return "MEGA_NOT_CONTIGUOUS";
    case ViolationCode::kMegaOutOfRange: return "MEGA_OUT_OF_RANGE";
    case ViolationCode::kMegaOverlap: return "MEGA_OVERLAP";
  }
  return "UNKNOWN";
}

struct Violation {
  ViolationCode code;
  std::string location;  // JSON-pointer-like path, e.g. "/mega_events/2"
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
  friend bool operator<(const Violation& a, const Violation& b) {
    return std::tie(a.location, a.code, a.detail) < std::tie(b.location, b.code, b.detail);
  }
};

struct ValidateOptions {
  // Accepted domains; empty accepts any.
  std::vector<std::string> domains;
};

// Checks every structural invariant of an annotation against its rating map.
// Locations refer to snippet *indices*, not file positions, so the result
// does not depend on the order snippets were listed in.
inline std::vector<Violation> validate(const Annotation& a, const RatingMap& r,
                                       const ValidateOptions& opts = {}) {
  std::vector<Violation> out;
  auto add = [&](ViolationCode c, std::string loc, std::string detail = {}) {
    out.push_back({c, std::move(loc), std::move(detail)});
  };

  if (a.video_id.empty()) add(ViolationCode::kEmptyVideoId, "/video_id");
  if (!opts.domains.empty() &&
      std::find(opts.domains.begin(), opts.domains.end(), a.domain) == opts.domains.end())
    add(ViolationCode::kUnknownDomain, "/domain", a.domain);
  if (a.domain != r.domain)
    add(ViolationCode::kDomainMismatch, "/domain", a.domain + " vs ratings " + r.domain);
  if (!(a.snippet_duration_sec > 0.0))
    add(ViolationCode::kNonPositiveDuration, "/snippet_duration_sec");

  for (const auto& [k, v] : r.ratings)
    if (v < 0 || v > 10) add(ViolationCode::kRatingOutOfRange, "/ratings/" + k, std::to_string(v));

  const std::size_t n = a.snippets.size();
  std::vector<std::size_t> seen(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto& s = a.snippets[pos];
    const std::string loc = "/snippets/" + std::to_string(s.index);
    if (s.index < n) ++seen[s.index];
    else add(ViolationCode::kSnippetIndexGap, loc, "index beyond snippet count");
    if (pos > 0 && a.snippets[pos - 1].index > s.index)
      add(ViolationCode::kSnippetOutOfOrder, loc);
    for (const auto& k : s.keywords) {
      auto [category, name] = split_keyword(k);
      if (category.empty() || name.empty()) add(ViolationCode::kBadKeyword, loc, k);
      if (!r.ratings.contains(k)) add(ViolationCode::kUnknownKeyword, loc, k);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i] > 1) add(ViolationCode::kSnippetIndexDuplicate, "/snippets/" + std::to_string(i));
    if (seen[i] == 0) add(ViolationCode::kSnippetIndexGap, "/snippets/" + std::to_string(i), "missing");
  }

  std::vector<int> owner(n, -1);
  for (std::size_t e = 0; e < a.mega_events.size(); ++e) {
    const auto& m = a.mega_events[e].snippets;
    const std::string loc = "/mega_events/" + std::to_string(e);
    if (m.size() < 2) add(ViolationCode::kMegaTooShort, loc);
    if (!std::is_sorted(m.begin(), m.end()) || !a.mega_events[e].contiguous())
      add(ViolationCode::kMegaNotContiguous, loc);
    for (auto s : m) {
      if (s >= n) {
        add(ViolationCode::kMegaOutOfRange, loc, std::to_string(s));
        continue;
      }
      if (owner[s] >= 0 && owner[s] != static_cast<int>(e))
        add(ViolationCode::kMegaOverlap, loc,
            "snippet " + std::to_string(s) + " also in /mega_events/" + std::to_string(owner[s]));
      owner[s] = static_cast<int>(e);
    }
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Throws std::invalid_argument unless every index lies in [0, a.size()).
inline void check_summary(const Summary& x, const Annotation& a) {
  for (auto s : x.snippet_indices)
    if (s >= a.size())
      throw std::invalid_argument("summary index " + std::to_string(s) + " out of range for video '" +
                                  a.video_id + "' with " + std::to_string(a.size()) + " snippets");
}

}  // namespace vsummkit
