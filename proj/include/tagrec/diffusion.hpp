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

// Resource-spreading scores on the tripartite graph and top-L lists.
//
// For a target user i the three kernels compute, for every object j:
//
//   UO   f_j   = sum_l sum_s a_lj a_ls a_is / (k(U_l) k(O_s))
//                objects of i -> their users -> those users' objects
//   UOT  f'_j  = sum_l sum_s a'_jl a'_ls a_is / (k'(T_l) k'(O_s))
//                objects of i -> their tags -> those tags' objects
//   UTO  f''_j = sum_l a'_jl a''_il / k'(T_l)
//                tags of i, weighted by usage count -> their objects
//
// Every pass walks neighbours in ascending id order, so results are
// bit-reproducible regardless of threading.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tagrec/graph.hpp"

namespace tagrec {

enum class Algorithm {
  kUserObject,     // UO
  kUserObjectTag,  // UOT
  kUserTagObject,  // UTO
};

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::kUserObject, Algorithm::kUserObjectTag,
    Algorithm::kUserTagObject};

std::string_view to_string(Algorithm a);
/// Case-insensitive "uo"/"uot"/"uto"; also accepts "I"/"II"/"III".
std::optional<Algorithm> parse_algorithm(std::string_view name);

struct ScoreVector {
  UserId target_user{};
  Algorithm algorithm = Algorithm::kUserObject;
  std::vector<double> scores;  // indexed by object id, length m
  /// UOT only: collected objects without tags, whose unit resource was
  /// dropped instead of spread.
  std::size_t leaked_objects = 0;
};

struct RecommendationList {
  UserId target_user{};
  std::size_t length = 0;         // requested L
  std::vector<ObjectId> objects;  // at most L, best first
  std::vector<double> scores;     // parallel to objects
};

/// Scratch buffers reused across kernel calls on one graph. Not shareable
/// between threads; give each worker its own.
class DiffusionWorkspace {
 public:
  explicit DiffusionWorkspace(const TripartiteGraph& g);

 private:
  friend std::size_t diffuse_into(const TripartiteGraph&, UserId, Algorithm,
                                  DiffusionWorkspace&, std::span<double>);
  friend RecommendationList recommend(const TripartiteGraph&,
                                      const ScoreVector&, std::size_t,
                                      DiffusionWorkspace&);
  std::vector<double> user_mass_;
  std::vector<double> tag_mass_;
  std::vector<std::uint32_t> touched_;
  std::vector<ObjectId> candidates_;
};

/// Writes the scores of `algorithm` for `user` into `out` (length m) and
/// returns the number of leaked objects (always 0 except for UOT).
/// Throws LookupError for an unknown user, EmptyProfileError for UTO on a
/// user without tags.
std::size_t diffuse_into(const TripartiteGraph& g, UserId user,
                         Algorithm algorithm, DiffusionWorkspace& ws,
                         std::span<double> out);

ScoreVector diffuse(const TripartiteGraph& g, UserId user, Algorithm algorithm);
ScoreVector diffuse_uo(const TripartiteGraph& g, UserId user);
ScoreVector diffuse_uot(const TripartiteGraph& g, UserId user);
ScoreVector diffuse_uto(const TripartiteGraph& g, UserId user);

/// Objects not collected by the target user, by descending score with ties
/// broken by ascending object id, truncated to `length`.
/// Throws ArgumentError if length == 0.
RecommendationList recommend(const TripartiteGraph& g,
                             const ScoreVector& scores, std::size_t length);
RecommendationList recommend(const TripartiteGraph& g,
                             const ScoreVector& scores, std::size_t length,
                             DiffusionWorkspace& ws);

/// Lists for every user in id order, users scored in parallel over `jobs`
/// OpenMP threads (jobs <= 0: runtime default). A UTO user with no tags gets
/// an empty list.
std::vector<RecommendationList> recommend_all(const TripartiteGraph& g,
                                              Algorithm algorithm,
                                              std::size_t length, int jobs = 0);

/// Single-threaded reference for recommend_all.
std::vector<RecommendationList> recommend_all_serial(const TripartiteGraph& g,
                                                     Algorithm algorithm,
                                                     std::size_t length);

}  // namespace tagrec
