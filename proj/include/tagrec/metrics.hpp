// Copyright 2026 The tagrec Authors.
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

// Accuracy and diversity measures: ranking score, inter/inner diversity,
// tag and object overlap ratios, tag-usage entropy and degree distributions.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tagrec/diffusion.hpp"
#include "tagrec/graph.hpp"
#include "tagrec/ingest.hpp"

namespace tagrec {

struct RankingOutcome {
  UserId user{};
  ObjectId object{};
  std::size_t object_degree = 0;  // k_o in the training graph
  double rs = 0.0;                // in (0, 1]

  friend bool operator==(const RankingOutcome&, const RankingOutcome&) = default;
};

/// Mean of y per abscissa. `x` is strictly increasing; counts[i] >= 1 is
/// the number of samples behind y[i].
struct MetricCurve {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::size_t> counts;

  std::size_t size() const noexcept { return x.size(); }
  bool empty() const noexcept { return x.empty(); }
  std::size_t samples() const noexcept;

  friend bool operator==(const MetricCurve&, const MetricCurve&) = default;
};

/// Rank of `test_object` among the target user's uncollected objects,
/// ordered by descending score, divided by their number. Tied objects share
/// the mean of their positions.
/// Throws ProtocolError if the user collected the object, LookupError for an
/// unknown object.
RankingOutcome ranking_score(const TripartiteGraph& g,
                             const ScoreVector& scores, ObjectId test_object);

/// Throws UndefinedValueError on an empty input.
double mean_rs(std::span<const RankingOutcome> outcomes);

struct DegreeConditionedRs {
  MetricCurve curve;  // x = k_o, y = mean rs
  std::size_t threshold = 10;
  std::optional<double> low;   // k_o <= threshold
  std::optional<double> high;  // k_o > threshold
  std::size_t low_count = 0;
  std::size_t high_count = 0;
};

DegreeConditionedRs rs_by_object_degree(std::span<const RankingOutcome> outcomes,
                                        std::size_t threshold = 10);

struct Diversity {
  double value = 0.0;
  std::size_t users = 0;     // lists that took part
  std::size_t excluded = 0;  // lists shorter than L
};

/// InterD = (2 / (n(n-1))) sum_{i<j} (1 - |R_i ∩ R_j| / L) over lists with
/// at least L entries, each cut to its first L. Evaluated through object
/// co-occurrence counts: sum_{i<j} |R_i ∩ R_j| = sum_o c_o (c_o - 1) / 2.
/// Throws UndefinedValueError with fewer than two eligible lists or L == 0.
Diversity inter_diversity(std::span<const RecommendationList> lists,
                          std::size_t length);

/// InnerD = 1 - mean over eligible lists of the mean cosine similarity
/// S_jl = |Γ_j ∩ Γ_l| / sqrt(|Γ_j| |Γ_l|) over unordered object pairs, with
/// Γ the collectors of an object in `g`. Lists are cut to their first L.
/// Per-list sums run in parallel over `jobs` threads and are reduced in list
/// order. Throws UndefinedValueError if L < 2 or no list is eligible.
Diversity inner_diversity(const TripartiteGraph& g,
                          std::span<const RecommendationList> lists,
                          std::size_t length, int jobs = 0);

/// Single-threaded reference for inner_diversity.
Diversity inner_diversity_serial(const TripartiteGraph& g,
                                 std::span<const RecommendationList> lists,
                                 std::size_t length);

/// Cosine similarity of two objects' collector sets.
double object_similarity(const TripartiteGraph& g, ObjectId a, ObjectId b);

/// Mean tag agreements per user pair, grouped by g = number of common
/// objects (g >= 1). A pair's agreements count the (object, tag) pairs where
/// both users annotated the common object with the tag.
MetricCurve overlap_ratio_tags(const Dataset& d, int jobs = 0);

/// Mean number of common objects per user pair, grouped by g = number of
/// tags both users have used anywhere (g >= 1).
MetricCurve overlap_ratio_objects(const Dataset& d, int jobs = 0);

/// Shannon entropy (natural log) of the user's tag usage a''(u, .).
/// Throws UndefinedValueError for a user without tags.
double user_entropy(const TripartiteGraph& g, UserId user);

/// Entropy of the tag distribution on an object, p_t proportional to the
/// number of users who assigned t to it.
double object_entropy(const TripartiteGraph& g, ObjectId object);

enum class EntropyKind { kUser, kObject };

/// Mean entropy grouped by k(U) (users) or k(O) (objects).
MetricCurve entropy_by_degree(const TripartiteGraph& g, EntropyKind kind);

struct DegreeDistribution {
  MetricCurve probability;  // x = k, y = P(k), counts = entities with k
  std::vector<double> ccdf; // P(K >= k), parallel to probability.x
};

DegreeDistribution degree_distribution(const TripartiteGraph& g,
                                       DegreeKind kind);

}  // namespace tagrec
