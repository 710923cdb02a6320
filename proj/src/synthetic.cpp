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

#include "tagrec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tagrec/errors.hpp"
#include "tagrec/random.hpp"

namespace tagrec {
namespace {

// Cumulative-weight sampler over one community's members.
struct Pool {
  std::vector<std::uint32_t> members;
  std::vector<double> cumulative;

  std::uint32_t draw(Rng& rng) const {
    const double x = uniform_unit(rng) * cumulative.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    const auto pos = std::min<std::size_t>(it - cumulative.begin(),
                                           members.size() - 1);
    return members[pos];
  }
};

}  // namespace

Dataset planted_dataset(const PlantedConfig& cfg) {
  const std::size_t c = cfg.communities;
  if (c == 0 || cfg.users < c || cfg.objects < c || cfg.tags < c) {
    throw ArgumentError("each community needs at least one user, object, tag");
  }
  if (cfg.topic_tags_per_object == 0 || cfg.max_tags_per_assignment == 0) {
    throw ArgumentError("objects and assignments need at least one tag");
  }
  Rng rng(cfg.seed);

  std::vector<Pool> object_pools(c);
  for (std::uint32_t o = 0; o < cfg.objects; ++o) {
    auto& pool = object_pools[o % c];
    const double rank = static_cast<double>(pool.members.size() + 1);
    const double weight = std::pow(rank, -cfg.popularity_exponent);
    pool.members.push_back(o);
    pool.cumulative.push_back(
        (pool.cumulative.empty() ? 0.0 : pool.cumulative.back()) + weight);
  }
  std::vector<std::vector<std::uint32_t>> tag_pools(c);
  for (std::uint32_t t = 0; t < cfg.tags; ++t) tag_pools[t % c].push_back(t);

  // Topic tags per object: a random subset of its community's tag pool.
  std::vector<std::vector<std::uint32_t>> topic(cfg.objects);
  for (std::uint32_t o = 0; o < cfg.objects; ++o) {
    auto pool = tag_pools[o % c];
    shuffle(std::span<std::uint32_t>(pool), rng);
    pool.resize(std::min(pool.size(), cfg.topic_tags_per_object));
    topic[o] = std::move(pool);
  }

  Dataset d;
  d.provenance.source = "planted(seed=" + std::to_string(cfg.seed) + ")";
  std::vector<char> taken(cfg.objects, 0);
  std::vector<std::uint32_t> picked;
  const double extra =
      std::max(0.0, cfg.mean_objects_per_user -
                        static_cast<double>(cfg.min_objects_per_user));

  for (std::uint32_t u = 0; u < cfg.users; ++u) {
    const std::size_t home = u % c;
    const double draw = -std::log1p(-uniform_unit(rng)) * extra;
    const std::size_t want = std::min<std::size_t>(
        cfg.objects / 2,
        cfg.min_objects_per_user + static_cast<std::size_t>(draw));

    picked.clear();
    for (std::size_t attempts = 0; picked.size() < want && attempts < want * 50;
         ++attempts) {
      std::size_t community = home;
      if (c > 1 && uniform_unit(rng) >= cfg.in_community) {
        community = (home + 1 + uniform_below(rng, c - 1)) % c;
      }
      const auto o = object_pools[community].draw(rng);
      if (taken[o]) continue;
      taken[o] = 1;
      picked.push_back(o);
    }

    for (const auto o : picked) {
      taken[o] = 0;
      auto tags = topic[o];
      shuffle(std::span<std::uint32_t>(tags), rng);
      const auto count = 1 + uniform_below(
          rng, std::min(tags.size(), cfg.max_tags_per_assignment));
      tags.resize(count);
      if (uniform_unit(rng) < cfg.stray_tag) {
        const auto& pool = tag_pools[home];
        const auto t = pool[uniform_below(rng, pool.size())];
        if (std::find(tags.begin(), tags.end(), t) == tags.end()) {
          tags.push_back(t);
        }
      }
      Assignment a{"u" + std::to_string(u), "o" + std::to_string(o), {}};
      for (const auto t : tags) a.tags.push_back("t" + std::to_string(t));
      d.assignments.push_back(std::move(a));
    }
  }
  return d;
}

}  // namespace tagrec
