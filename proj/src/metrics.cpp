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

#include "tagrec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>

#include "parallel.hpp"
#include "tagrec/errors.hpp"

namespace tagrec {
namespace {

// Running mean per abscissa; summation follows insertion order.
class CurveBuilder {
 public:
  void add(double x, double y) {
    auto& [sum, count] = groups_[x];
    sum += y;
    ++count;
  }
  MetricCurve build() const {
    MetricCurve c;
    for (const auto& [x, acc] : groups_) {
      c.x.push_back(x);
      c.y.push_back(acc.first / static_cast<double>(acc.second));
      c.counts.push_back(acc.second);
    }
    return c;
  }

 private:
  std::map<double, std::pair<double, std::size_t>> groups_;
};

// Integer sums per integer abscissa; merging is order independent.
using PairTotals = std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>>;

MetricCurve to_curve(const PairTotals& totals) {
  MetricCurve c;
  for (const auto& [g, acc] : totals) {
    c.x.push_back(static_cast<double>(g));
    c.y.push_back(static_cast<double>(acc.first) /
                  static_cast<double>(acc.second));
    c.counts.push_back(acc.second);
  }
  return c;
}

template <typename T>
std::size_t sorted_intersection_size(std::span<const T> a, std::span<const T> b) {
  std::size_t common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return common;
}

double entropy_of_counts(std::span<const std::uint32_t> counts) {
  double total = 0.0;
  for (auto c : counts) total += c;
  double e = 0.0;
  for (auto c : counts) {
    const double p = c / total;
    e -= p * std::log(p);
  }
  // A single tag yields -0.0.
  return e > 0.0 ? e : 0.0;
}

std::span<const ObjectId> list_prefix(const RecommendationList& list,
                                      std::size_t length) {
  return std::span<const ObjectId>(list.objects).first(length);
}

// Assignments interned for the pairwise overlap measures.
struct PairIndex {
  std::size_t users = 0;
  // Per assignment: object and sorted tag ids.
  std::vector<std::uint32_t> object_of;
  std::vector<std::vector<std::uint32_t>> tags_of;
  // Per user: assignment ids. Per object: (user, assignment) sorted by user.
  std::vector<std::vector<std::uint32_t>> user_assignments;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> object_entries;
  // Per user: sorted distinct tags. Per tag: sorted distinct users.
  std::vector<std::vector<std::uint32_t>> user_vocab;
  std::vector<std::vector<std::uint32_t>> tag_users;

  explicit PairIndex(const Dataset& d) {
    LabelIndex user_ids, object_ids, tag_ids;
    for (std::uint32_t a = 0; a < d.assignments.size(); ++a) {
      const auto& rec = d.assignments[a];
      const auto u = user_ids.intern(rec.user);
      const auto o = object_ids.intern(rec.object);
      if (u >= user_assignments.size()) {
        user_assignments.resize(u + 1);
        user_vocab.resize(u + 1);
      }
      if (o >= object_entries.size()) object_entries.resize(o + 1);
      std::vector<std::uint32_t> tags;
      for (const auto& t : rec.tags) tags.push_back(tag_ids.intern(t));
      std::sort(tags.begin(), tags.end());
      tags.erase(std::unique(tags.begin(), tags.end()), tags.end());

      user_assignments[u].push_back(a);
      object_entries[o].emplace_back(u, a);
      user_vocab[u].insert(user_vocab[u].end(), tags.begin(), tags.end());
      object_of.push_back(o);
      tags_of.push_back(std::move(tags));
    }
    users = user_ids.size();
    tag_users.resize(tag_ids.size());
    for (std::uint32_t u = 0; u < users; ++u) {
      auto& v = user_vocab[u];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      for (auto t : v) tag_users[t].push_back(u);
    }
    for (auto& entries : object_entries) std::sort(entries.begin(), entries.end());
  }
};

void merge_totals(PairTotals& into, const PairTotals& from) {
  for (const auto& [g, acc] : from) {
    into[g].first += acc.first;
    into[g].second += acc.second;
  }
}

}  // namespace

std::size_t MetricCurve::samples() const noexcept {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

RankingOutcome ranking_score(const TripartiteGraph& g,
                             const ScoreVector& scores, ObjectId test_object) {
  const UserId user = scores.target_user;
  if (index_of(user) >= g.users()) {
    throw LookupError("no user with id " + std::to_string(index_of(user)));
  }
  if (index_of(test_object) >= g.objects()) {
    throw LookupError("no object with id " +
                      std::to_string(index_of(test_object)));
  }
  if (g.has_collected(user, test_object)) {
    throw ProtocolError("object '" + g.object_label(test_object) +
                        "' is already collected by user '" +
                        g.user_label(user) + "'");
  }

  const double target = scores.scores[index_of(test_object)];
  std::size_t greater = 0, tied = 0;
  const auto collected = g.user_objects(user);
  auto next = collected.begin();
  for (std::uint32_t j = 0; j < g.objects(); ++j) {
    if (next != collected.end() && index_of(*next) == j) {
      ++next;
      continue;
    }
    const double s = scores.scores[j];
    if (s > target) {
      ++greater;
    } else if (s == target) {
      ++tied;
    }
  }
  const double uncollected =
      static_cast<double>(g.objects() - collected.size());
  const double rank = static_cast<double>(greater) +
                      static_cast<double>(tied + 1) / 2.0;
  return {user, test_object, g.object_degree(test_object), rank / uncollected};
}

double mean_rs(std::span<const RankingOutcome> outcomes) {
  if (outcomes.empty()) {
    throw UndefinedValueError("mean ranking score of no outcomes");
  }
  double sum = 0.0;
  for (const auto& o : outcomes) sum += o.rs;
  return sum / static_cast<double>(outcomes.size());
}

DegreeConditionedRs rs_by_object_degree(std::span<const RankingOutcome> outcomes,
                                        std::size_t threshold) {
  CurveBuilder builder;
  DegreeConditionedRs out;
  out.threshold = threshold;
  double low_sum = 0.0, high_sum = 0.0;
  for (const auto& o : outcomes) {
    builder.add(static_cast<double>(o.object_degree), o.rs);
    if (o.object_degree <= threshold) {
      low_sum += o.rs;
      ++out.low_count;
    } else {
      high_sum += o.rs;
      ++out.high_count;
    }
  }
  out.curve = builder.build();
  if (out.low_count > 0) out.low = low_sum / static_cast<double>(out.low_count);
  if (out.high_count > 0) {
    out.high = high_sum / static_cast<double>(out.high_count);
  }
  return out;
}

Diversity inter_diversity(std::span<const RecommendationList> lists,
                          std::size_t length) {
  if (length == 0) throw UndefinedValueError("InterD needs L >= 1");
  Diversity d;
  std::unordered_map<std::uint32_t, std::uint64_t> occurrences;
  for (const auto& list : lists) {
    if (list.objects.size() < length) {
      ++d.excluded;
      continue;
    }
    ++d.users;
    for (const auto o : list_prefix(list, length)) {
      ++occurrences[static_cast<std::uint32_t>(o)];
    }
  }
  if (d.users < 2) {
    throw UndefinedValueError("InterD needs at least two lists of length " +
                              std::to_string(length));
  }
  std::uint64_t shared = 0;
  for (const auto& [object, c] : occurrences) shared += c * (c - 1) / 2;
  const double pairs =
      static_cast<double>(d.users) * static_cast<double>(d.users - 1) / 2.0;
  d.value = 1.0 - static_cast<double>(shared) /
                      (static_cast<double>(length) * pairs);
  return d;
}

double object_similarity(const TripartiteGraph& g, ObjectId a, ObjectId b) {
  const auto ua = g.object_users(a);
  const auto ub = g.object_users(b);
  const auto common = sorted_intersection_size(ua, ub);
  if (common == 0) return 0.0;
  return static_cast<double>(common) /
         std::sqrt(static_cast<double>(ua.size()) *
                   static_cast<double>(ub.size()));
}

namespace {

// Mean pairwise similarity inside one list prefix.
double mean_list_similarity(const TripartiteGraph& g,
                            std::span<const ObjectId> objects) {
  double sum = 0.0;
  for (std::size_t j = 0; j < objects.size(); ++j) {
    for (std::size_t l = j + 1; l < objects.size(); ++l) {
      sum += object_similarity(g, objects[j], objects[l]);
    }
  }
  const double pairs =
      static_cast<double>(objects.size()) * (objects.size() - 1) / 2.0;
  return sum / pairs;
}

Diversity reduce_inner(const std::vector<double>& per_list,
                       const std::vector<char>& eligible, std::size_t length) {
  Diversity d;
  double sum = 0.0;
  for (std::size_t i = 0; i < per_list.size(); ++i) {
    if (!eligible[i]) {
      ++d.excluded;
      continue;
    }
    ++d.users;
    sum += per_list[i];
  }
  if (d.users == 0) {
    throw UndefinedValueError("InnerD has no list of length " +
                              std::to_string(length));
  }
  d.value = 1.0 - sum / static_cast<double>(d.users);
  return d;
}

}  // namespace

Diversity inner_diversity(const TripartiteGraph& g,
                          std::span<const RecommendationList> lists,
                          std::size_t length, int jobs) {
  if (length < 2) throw UndefinedValueError("InnerD needs L >= 2");
  const auto n = static_cast<std::int64_t>(lists.size());
  std::vector<double> per_list(lists.size(), 0.0);
  std::vector<char> eligible(lists.size(), 0);
#pragma omp parallel for schedule(dynamic, 16) num_threads(detail::resolve_jobs(jobs))
  for (std::int64_t i = 0; i < n; ++i) {
    const auto& list = lists[i];
    if (list.objects.size() < length) continue;
    eligible[i] = 1;
    per_list[i] = mean_list_similarity(g, list_prefix(list, length));
  }
  return reduce_inner(per_list, eligible, length);
}

Diversity inner_diversity_serial(const TripartiteGraph& g,
                                 std::span<const RecommendationList> lists,
                                 std::size_t length) {
  if (length < 2) throw UndefinedValueError("InnerD needs L >= 2");
  std::vector<double> per_list(lists.size(), 0.0);
  std::vector<char> eligible(lists.size(), 0);
  for (std::size_t i = 0; i < lists.size(); ++i) {
    if (lists[i].objects.size() < length) continue;
    eligible[i] = 1;
    per_list[i] = mean_list_similarity(g, list_prefix(lists[i], length));
  }
  return reduce_inner(per_list, eligible, length);
}

MetricCurve overlap_ratio_tags(const Dataset& d, int jobs) {
  const PairIndex index(d);
  const auto n = static_cast<std::int64_t>(index.users);
  PairTotals totals;
#pragma omp parallel num_threads(detail::resolve_jobs(jobs))
  {
    PairTotals local;
    std::vector<std::uint32_t> common(index.users, 0);
    std::vector<std::uint64_t> agree(index.users, 0);
    std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) {
      for (const auto a : index.user_assignments[i]) {
        const std::span<const std::uint32_t> mine(index.tags_of[a]);
        for (const auto& [j, b] : index.object_entries[index.object_of[a]]) {
          if (j <= i) continue;
          if (common[j]++ == 0) touched.push_back(j);
          agree[j] += sorted_intersection_size(
              mine, std::span<const std::uint32_t>(index.tags_of[b]));
        }
      }
      for (const auto j : touched) {
        auto& acc = local[common[j]];
        acc.first += agree[j];
        ++acc.second;
        common[j] = 0;
        agree[j] = 0;
      }
      touched.clear();
    }
#pragma omp critical(tagrec_overlap_merge)
    merge_totals(totals, local);
  }
  return to_curve(totals);
}

MetricCurve overlap_ratio_objects(const Dataset& d, int jobs) {
  const PairIndex index(d);
  const auto n = static_cast<std::int64_t>(index.users);
  PairTotals totals;
#pragma omp parallel num_threads(detail::resolve_jobs(jobs))
  {
    PairTotals local;
    std::vector<std::uint32_t> common_tags(index.users, 0);
    std::vector<std::uint32_t> common_objects(index.users, 0);
    std::vector<std::uint32_t> by_tag, by_object;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) {
      for (const auto t : index.user_vocab[i]) {
        for (const auto j : index.tag_users[t]) {
          if (j <= i) continue;
          if (common_tags[j]++ == 0) by_tag.push_back(j);
        }
      }
      for (const auto a : index.user_assignments[i]) {
        for (const auto& [j, b] : index.object_entries[index.object_of[a]]) {
          if (j <= i) continue;
          if (common_objects[j]++ == 0) by_object.push_back(j);
        }
      }
      for (const auto j : by_tag) {
        auto& acc = local[common_tags[j]];
        acc.first += common_objects[j];
        ++acc.second;
        common_tags[j] = 0;
      }
      for (const auto j : by_object) common_objects[j] = 0;
      by_tag.clear();
      by_object.clear();
    }
#pragma omp critical(tagrec_overlap_merge)
    merge_totals(totals, local);
  }
  return to_curve(totals);
}

double user_entropy(const TripartiteGraph& g, UserId user) {
  if (index_of(user) >= g.users()) {
    throw LookupError("no user with id " + std::to_string(index_of(user)));
  }
  const auto counts = g.user_tag_counts(user);
  if (counts.empty()) {
    throw UndefinedValueError("user '" + g.user_label(user) + "' has no tags");
  }
  return entropy_of_counts(counts);
}

double object_entropy(const TripartiteGraph& g, ObjectId object) {
  if (index_of(object) >= g.objects()) {
    throw LookupError("no object with id " + std::to_string(index_of(object)));
  }
  return entropy_of_counts(g.object_tag_counts(object));
}

MetricCurve entropy_by_degree(const TripartiteGraph& g, EntropyKind kind) {
  CurveBuilder builder;
  if (kind == EntropyKind::kUser) {
    for (std::uint32_t u = 0; u < g.users(); ++u) {
      const UserId id{u};
      if (g.user_tags(id).empty()) continue;
      builder.add(static_cast<double>(g.user_degree(id)), user_entropy(g, id));
    }
  } else {
    for (std::uint32_t o = 0; o < g.objects(); ++o) {
      const ObjectId id{o};
      builder.add(static_cast<double>(g.object_degree(id)),
                  object_entropy(g, id));
    }
  }
  return builder.build();
}

DegreeDistribution degree_distribution(const TripartiteGraph& g,
                                       DegreeKind kind) {
  std::size_t entities = 0;
  switch (kind) {
    case DegreeKind::kUser:
      entities = g.users();
      break;
    case DegreeKind::kObject:
    case DegreeKind::kObjectTag:
      entities = g.objects();
      break;
    case DegreeKind::kTagObject:
      entities = g.tags();
      break;
  }
  std::map<std::size_t, std::size_t> histogram;
  for (std::uint32_t id = 0; id < entities; ++id) {
    ++histogram[g.degree(kind, id)];
  }

  DegreeDistribution out;
  const double total = static_cast<double>(entities);
  std::size_t at_least = entities;
  for (const auto& [k, count] : histogram) {
    out.probability.x.push_back(static_cast<double>(k));
    out.probability.y.push_back(static_cast<double>(count) / total);
    out.probability.counts.push_back(count);
    out.ccdf.push_back(static_cast<double>(at_least) / total);
    at_least -= count;
  }
  return out;
}

}  // namespace tagrec
