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

#include "tagrec/diffusion.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "parallel.hpp"
#include "tagrec/errors.hpp"

namespace tagrec {
namespace {

void check_user(const TripartiteGraph& g, UserId user) {
  if (index_of(user) >= g.users()) {
    throw LookupError("no user with id " + std::to_string(index_of(user)));
  }
}

// Scatters mass[id] / degree(id) over each touched id's neighbour row, in
// ascending id order, then clears the touched entries.
template <typename Id, typename RowFn>
void spread_touched(std::vector<double>& mass,
                    std::vector<std::uint32_t>& touched, RowFn&& row,
                    std::span<double> out) {
  std::sort(touched.begin(), touched.end());
  for (const auto id : touched) {
    const auto targets = row(Id{id});
    const double share = mass[id] / static_cast<double>(targets.size());
    for (const auto j : targets) out[index_of(j)] += share;
    mass[id] = 0.0;
  }
  touched.clear();
}

inline void deposit(std::vector<double>& mass,
                    std::vector<std::uint32_t>& touched, std::uint32_t id,
                    double amount) {
  if (mass[id] == 0.0) touched.push_back(id);
  mass[id] += amount;
}

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kUserObject:
      return "UO";
    case Algorithm::kUserObjectTag:
      return "UOT";
    case Algorithm::kUserTagObject:
      return "UTO";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "UO" || upper == "I") return Algorithm::kUserObject;
  if (upper == "UOT" || upper == "II") return Algorithm::kUserObjectTag;
  if (upper == "UTO" || upper == "III") return Algorithm::kUserTagObject;
  return std::nullopt;
}

DiffusionWorkspace::DiffusionWorkspace(const TripartiteGraph& g)
    : user_mass_(g.users(), 0.0), tag_mass_(g.tags(), 0.0) {
  touched_.reserve(std::max(g.users(), g.tags()));
  candidates_.reserve(g.objects());
}

std::size_t diffuse_into(const TripartiteGraph& g, UserId user,
                         Algorithm algorithm, DiffusionWorkspace& ws,
                         std::span<double> out) {
  check_user(g, user);
  std::fill(out.begin(), out.end(), 0.0);
  std::size_t leaked = 0;

  switch (algorithm) {
    case Algorithm::kUserObject: {
      // Each collected object sends 1/k(O_s) to every collector; each
      // collector splits what it received over its k(U_l) objects.
      for (const auto s : g.user_objects(user)) {
        const auto collectors = g.object_users(s);
        const double share = 1.0 / static_cast<double>(collectors.size());
        for (const auto l : collectors) {
          deposit(ws.user_mass_, ws.touched_, static_cast<std::uint32_t>(l), share);
        }
      }
      spread_touched<UserId>(
          ws.user_mass_, ws.touched_,
          [&](UserId l) { return g.user_objects(l); }, out);
      break;
    }
    case Algorithm::kUserObjectTag: {
      for (const auto s : g.user_objects(user)) {
        const auto tags = g.object_tags(s);
        if (tags.empty()) {
          ++leaked;
          continue;
        }
        const double share = 1.0 / static_cast<double>(tags.size());
        for (const auto t : tags) {
          deposit(ws.tag_mass_, ws.touched_, static_cast<std::uint32_t>(t), share);
        }
      }
      spread_touched<TagId>(
          ws.tag_mass_, ws.touched_,
          [&](TagId t) { return g.tag_objects(t); }, out);
      break;
    }
    case Algorithm::kUserTagObject: {
      const auto tags = g.user_tags(user);
      if (tags.empty()) {
        throw EmptyProfileError("user '" + g.user_label(user) +
                                "' has no tags");
      }
      const auto counts = g.user_tag_counts(user);
      for (std::size_t k = 0; k < tags.size(); ++k) {
        const auto objects = g.tag_objects(tags[k]);
        const double share =
            static_cast<double>(counts[k]) / static_cast<double>(objects.size());
        for (const auto j : objects) out[index_of(j)] += share;
      }
      break;
    }
  }
  return leaked;
}

ScoreVector diffuse(const TripartiteGraph& g, UserId user,
                    Algorithm algorithm) {
  check_user(g, user);
  DiffusionWorkspace ws(g);
  ScoreVector sv{user, algorithm, std::vector<double>(g.objects()), 0};
  sv.leaked_objects = diffuse_into(g, user, algorithm, ws, sv.scores);
  return sv;
}

ScoreVector diffuse_uo(const TripartiteGraph& g, UserId user) {
  return diffuse(g, user, Algorithm::kUserObject);
}

ScoreVector diffuse_uot(const TripartiteGraph& g, UserId user) {
  return diffuse(g, user, Algorithm::kUserObjectTag);
}

ScoreVector diffuse_uto(const TripartiteGraph& g, UserId user) {
  return diffuse(g, user, Algorithm::kUserTagObject);
}

RecommendationList recommend(const TripartiteGraph& g,
                             const ScoreVector& scores, std::size_t length,
                             DiffusionWorkspace& ws) {
  if (length == 0) throw ArgumentError("recommendation length must be >= 1");
  check_user(g, scores.target_user);

  // Merge-walk against the sorted collection to list uncollected objects.
  auto& candidates = ws.candidates_;
  candidates.clear();
  const auto collected = g.user_objects(scores.target_user);
  auto next = collected.begin();
  for (std::uint32_t j = 0; j < g.objects(); ++j) {
    if (next != collected.end() && index_of(*next) == j) {
      ++next;
      continue;
    }
    candidates.push_back(ObjectId{j});
  }

  const auto& f = scores.scores;
  auto better = [&](ObjectId a, ObjectId b) {
    const double fa = f[index_of(a)], fb = f[index_of(b)];
    if (fa != fb) return fa > fb;
    return a < b;
  };
  const std::size_t keep = std::min(length, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end(), better);

  RecommendationList list;
  list.target_user = scores.target_user;
  list.length = length;
  list.objects.assign(candidates.begin(), candidates.begin() + keep);
  list.scores.reserve(keep);
  for (const auto o : list.objects) list.scores.push_back(f[index_of(o)]);
  return list;
}

RecommendationList recommend(const TripartiteGraph& g,
                             const ScoreVector& scores, std::size_t length) {
  DiffusionWorkspace ws(g);
  return recommend(g, scores, length, ws);
}

namespace {

RecommendationList recommend_one(const TripartiteGraph& g, UserId u,
                                 Algorithm algorithm, std::size_t length,
                                 DiffusionWorkspace& ws, ScoreVector& sv) {
  if (algorithm == Algorithm::kUserTagObject && g.user_tags(u).empty()) {
    return RecommendationList{u, length, {}, {}};
  }
  sv.target_user = u;
  sv.algorithm = algorithm;
  sv.leaked_objects = diffuse_into(g, u, algorithm, ws, sv.scores);
  return recommend(g, sv, length, ws);
}

}  // namespace

std::vector<RecommendationList> recommend_all(const TripartiteGraph& g,
                                              Algorithm algorithm,
                                              std::size_t length, int jobs) {
  if (length == 0) throw ArgumentError("recommendation length must be >= 1");
  const auto n = static_cast<std::int64_t>(g.users());
  std::vector<RecommendationList> lists(g.users());
#pragma omp parallel num_threads(detail::resolve_jobs(jobs))
  {
    DiffusionWorkspace ws(g);
    ScoreVector sv{UserId{0}, algorithm, std::vector<double>(g.objects()), 0};
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t u = 0; u < n; ++u) {
      const UserId id{static_cast<std::uint32_t>(u)};
      lists[u] = recommend_one(g, id, algorithm, length, ws, sv);
    }
  }
  return lists;
}

std::vector<RecommendationList> recommend_all_serial(const TripartiteGraph& g,
                                                     Algorithm algorithm,
                                                     std::size_t length) {
  if (length == 0) throw ArgumentError("recommendation length must be >= 1");
  std::vector<RecommendationList> lists;
  lists.reserve(g.users());
  DiffusionWorkspace ws(g);
  ScoreVector sv{UserId{0}, algorithm, std::vector<double>(g.objects()), 0};
  for (std::uint32_t u = 0; u < g.users(); ++u) {
    lists.push_back(recommend_one(g, UserId{u}, algorithm, length, ws, sv));
  }
  return lists;
}

}  // namespace tagrec
