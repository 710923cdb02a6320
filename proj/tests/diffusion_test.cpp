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

#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "tagrec/errors.hpp"

namespace tagrec {
namespace {

using Scores = std::vector<double>;

// U1 -> {O1, O2}, U2 -> {O2, O3}; O1 -> {T1}, O2 -> {T1, T2}, O3 -> {T2}.
TripartiteGraph two_user_graph() {
  Dataset d;
  d.assignments.push_back({"U1", "O1", {"T1"}});
  d.assignments.push_back({"U1", "O2", {"T1", "T2"}});
  d.assignments.push_back({"U2", "O2", {"T1"}});
  d.assignments.push_back({"U2", "O3", {"T2"}});
  return build_graph(d);
}

TEST(DiffuseUo, TwoUserExample) {
  const auto g = two_user_graph();
  EXPECT_EQ(diffuse_uo(g, UserId{0}).scores, (Scores{0.75, 1.0, 0.25}));
}

TEST(DiffuseUo, LoneUserGetsUnitMass) {
  Dataset d;
  for (const char* o : {"a", "b", "c"}) d.assignments.push_back({"u", o, {"t"}});
  const auto g = build_graph(d);
  EXPECT_EQ(diffuse_uo(g, UserId{0}).scores, (Scores{1.0, 1.0, 1.0}));
}

TEST(DiffuseUo, UnknownUser) {
  const auto g = two_user_graph();
  EXPECT_THROW(diffuse_uo(g, UserId{7}), LookupError);
}

TEST(DiffuseUot, TwoUserExample) {
  const auto g = two_user_graph();
  const auto f = diffuse_uot(g, UserId{0});
  EXPECT_EQ(f.scores, (Scores{0.75, 1.0, 0.25}));
  EXPECT_EQ(f.leaked_objects, 0u);
}

TEST(DiffuseUot, SingleObjectSingleTag) {
  Dataset d;
  d.assignments.push_back({"u", "o", {"t"}});
  EXPECT_EQ(diffuse_uot(build_graph(d), UserId{0}).scores, (Scores{1.0}));
}

TEST(DiffuseUto, WeightedProfileExample) {
  LabelIndex users, objects, tags;
  users.intern("U1");
  users.intern("U2");
  for (const char* o : {"O1", "O2", "O3"}) objects.intern(o);
  tags.intern("T1");
  tags.intern("T2");
  const auto g = TripartiteGraph::from_edges(
      users, objects, tags,
      {{UserId{0}, ObjectId{0}}, {UserId{0}, ObjectId{1}}, {UserId{1}, ObjectId{2}}},
      {{ObjectId{0}, TagId{0}, 1}, {ObjectId{1}, TagId{0}, 1}, {ObjectId{1}, TagId{1}, 1},
       {ObjectId{2}, TagId{1}, 1}},
      {{UserId{0}, TagId{0}, 3}, {UserId{0}, TagId{1}, 1}, {UserId{1}, TagId{1}, 1}});
  EXPECT_EQ(diffuse_uto(g, UserId{0}).scores, (Scores{1.5, 2.0, 0.5}));
}

TEST(DiffuseUto, OneTagOneObjectGivesTotalCount) {
  LabelIndex users, objects, tags;
  users.intern("u");
  objects.intern("o");
  tags.intern("t");
  const auto g = TripartiteGraph::from_edges(users, objects, tags, {{UserId{0}, ObjectId{0}}},
                                             {{ObjectId{0}, TagId{0}, 4}},
                                             {{UserId{0}, TagId{0}, 4}});
  EXPECT_EQ(diffuse_uto(g, UserId{0}).scores, (Scores{4.0}));
}

TEST(DiffuseUto, UserWithoutTags) {
  LabelIndex users, objects, tags;
  users.intern("tagger");
  users.intern("silent");
  objects.intern("o");
  tags.intern("t");
  const auto g = TripartiteGraph::from_edges(
      users, objects, tags, {{UserId{0}, ObjectId{0}}, {UserId{1}, ObjectId{0}}},
      {{ObjectId{0}, TagId{0}, 1}}, {{UserId{0}, TagId{0}, 1}});
  EXPECT_THROW(diffuse_uto(g, UserId{1}), EmptyProfileError);
  EXPECT_THROW(diffuse_uto(g, UserId{1}), LookupError);
  const auto lists = recommend_all(g, Algorithm::kUserTagObject, 5, 1);
  EXPECT_TRUE(lists[1].objects.empty());
}

TEST(AlgorithmNames, ParseAndPrint) {
  for (auto a : kAllAlgorithms) EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_EQ(parse_algorithm("uto"), Algorithm::kUserTagObject);
  EXPECT_EQ(parse_algorithm("I"), Algorithm::kUserObject);
  EXPECT_EQ(parse_algorithm("II"), Algorithm::kUserObjectTag);
  EXPECT_EQ(parse_algorithm("III"), Algorithm::kUserTagObject);
  EXPECT_FALSE(parse_algorithm("IV").has_value());
}

class KernelOracle : public ::testing::TestWithParam<int> {};

TEST_P(KernelOracle, MatchesDenseEvaluationAndConserves) {
  Rng rng(1000 + static_cast<std::uint64_t>(GetParam()));
  const auto d = oracle::random_dataset(rng, 2 + uniform_below(rng, 28),
                                        2 + uniform_below(rng, 28),
                                        1 + uniform_below(rng, 29),
                                        0.1 + 0.4 * uniform_unit(rng));
  const auto g = build_graph(d);
  const oracle::DenseModel dense(d, g);
  for (std::uint32_t u = 0; u < g.users(); ++u) {
    const UserId user{u};
    const auto uo = diffuse_uo(g, user).scores;
    const auto uot = diffuse_uot(g, user);
    const auto uto = diffuse_uto(g, user).scores;
    const auto e_uo = dense.uo(u), e_uot = dense.uot(u), e_uto = dense.uto(u);
    for (std::size_t j = 0; j < g.objects(); ++j) {
      ASSERT_NEAR(uo[j], e_uo[j], 1e-12);
      ASSERT_NEAR(uot.scores[j], e_uot[j], 1e-12);
      ASSERT_NEAR(uto[j], e_uto[j], 1e-12);
    }
    const double k = static_cast<double>(g.user_degree(user));
    const double mass = std::accumulate(dense.a2[u].begin(), dense.a2[u].end(), 0.0);
    EXPECT_NEAR(std::accumulate(uo.begin(), uo.end(), 0.0), k, 1e-9 * k);
    EXPECT_NEAR(std::accumulate(uot.scores.begin(), uot.scores.end(), 0.0),
                k - static_cast<double>(uot.leaked_objects), 1e-9 * k);
    EXPECT_NEAR(std::accumulate(uto.begin(), uto.end(), 0.0), mass, 1e-9 * mass);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, KernelOracle, ::testing::Range(0, 30));

TEST(DiffuseUto, ScalesWithProfileCounts) {
  LabelIndex users, objects, tags;
  users.intern("u");
  objects.intern("a");
  objects.intern("b");
  tags.intern("x");
  tags.intern("y");
  auto build = [&](std::uint32_t scale) {
    return TripartiteGraph::from_edges(
        users, objects, tags, {{UserId{0}, ObjectId{0}}, {UserId{0}, ObjectId{1}}},
        {{ObjectId{0}, TagId{0}, 1}, {ObjectId{1}, TagId{0}, 1}, {ObjectId{1}, TagId{1}, 1}},
        {{UserId{0}, TagId{0}, 2 * scale}, {UserId{0}, TagId{1}, 3 * scale}});
  };
  const auto base = diffuse_uto(build(1), UserId{0}).scores;
  const auto scaled = diffuse_uto(build(5), UserId{0}).scores;
  for (std::size_t j = 0; j < base.size(); ++j) EXPECT_DOUBLE_EQ(scaled[j], 5 * base[j]);
}

TEST(Recommend, ExcludesCollectedObjects) {
  const auto g = two_user_graph();
  const auto list = recommend(g, diffuse_uo(g, UserId{0}), 10);
  ASSERT_EQ(list.objects.size(), 1u);
  EXPECT_EQ(list.objects[0], ObjectId{2});
  EXPECT_EQ(list.scores[0], 0.25);
  EXPECT_EQ(list.length, 10u);
}

TEST(Recommend, TiesBreakByObjectIdAndTruncate) {
  Dataset d;
  d.assignments.push_back({"u", "mine", {"t"}});
  for (const char* o : {"e", "d", "c", "b", "a"}) d.assignments.push_back({"v", o, {"t"}});
  const auto g = build_graph(d);
  ScoreVector s;
  s.target_user = UserId{0};
  s.scores.assign(g.objects(), 0.5);
  const auto list = recommend(g, s, 3);
  EXPECT_EQ(list.objects, (std::vector<ObjectId>{ObjectId{1}, ObjectId{2}, ObjectId{3}}));

  s.scores = {9.0, 0.1, 0.3, 0.3, 0.2, 0.0};
  const auto full = recommend(g, s, 100);
  EXPECT_EQ(full.objects, (std::vector<ObjectId>{ObjectId{2}, ObjectId{3}, ObjectId{4},
                                                 ObjectId{1}, ObjectId{5}}));
  EXPECT_THROW(recommend(g, s, 0), ArgumentError);
}

TEST(RecommendAll, ParallelMatchesSerial) {
  Rng rng(5);
  const auto d = oracle::random_dataset(rng, 40, 60, 15, 0.15);
  const auto g = build_graph(d);
  for (auto a : kAllAlgorithms) {
    const auto serial = recommend_all_serial(g, a, 7);
    for (int jobs : {1, 2, 4}) {
      const auto parallel = recommend_all(g, a, 7, jobs);
      ASSERT_EQ(parallel.size(), serial.size());
      for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(parallel[i].objects, serial[i].objects);
        EXPECT_EQ(parallel[i].scores, serial[i].scores);
      }
    }
  }
}

}  // namespace
}  // namespace tagrec
