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

#pragma once

#include <cstddef>
#include <cstdint>

#include "tagrec/ingest.hpp"

namespace tagrec {

/// Folksonomy with planted communities. Users, objects and tags are dealt
/// round-robin into communities. A user collects objects mostly from their
/// own community, picked by Zipf popularity, and annotates each with a few
/// of the object's topic tags (drawn from the object's community pool).
struct PlantedConfig {
  std::size_t users = 200;
  std::size_t objects = 500;
  std::size_t tags = 50;
  std::size_t communities = 2;
  double mean_objects_per_user = 20.0;
  std::size_t min_objects_per_user = 4;
  /// Object weight within a community is rank^-popularity_exponent.
  double popularity_exponent = 1.0;
  double in_community = 0.9;
  std::size_t topic_tags_per_object = 3;
  std::size_t max_tags_per_assignment = 2;
  /// Chance of adding one random tag from the user's community pool.
  double stray_tag = 0.1;
  std::uint64_t seed = 1;
};

/// Labels are "u<i>", "o<j>", "t<k>". Deterministic in the config.
Dataset planted_dataset(const PlantedConfig& cfg);

}  // namespace tagrec
