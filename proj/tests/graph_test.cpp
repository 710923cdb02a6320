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

#include "tagrec/graph.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "tagrec/errors.hpp"

namespace tagrec {
namespace {

TEST(BuildGraph, HandConstructedCounts) {
  Dataset d;
  d.assignments.push_back({"u1", "o1", {"t1", "t2"}});
  d.assignments.push_back({"u1", "o2", {"t1"}});
  const auto g = build_graph(d);
  EXPECT_EQ(g.users(), 1u);
  EXPECT_EQ(g.objects(), 2u);
  EXPECT_EQ(g.tags(), 2u);
  const auto u1 = g.user_id("u1");
  const auto t1 = *g.find_tag("t1");
  const auto t2 = *g.find_tag("t2");
  ASSERT_EQ(g.user_tags(u1).size(), 2u);
  EXPECT_EQ(g.user_tags(u1)[0], t1);
  EXPECT_EQ(g.user_tag_counts(u1)[0], 2u);
  EXPECT_EQ(g.user_tags(u1)[1], t2);
  EXPECT_EQ(g.user_tag_counts(u1)[1], 1u);
  EXPECT_EQ(g.tag_object_degree(t1), 2u);
  EXPECT_EQ(g.tag_object_degree(t2), 1u);
}

TEST(BuildGraph, SingleAssignmentDegrees) {
  Dataset d;
  d.assignments.push_back({"u", "o", {"a", "b", "c"}});
  const auto g = build_graph(d);
  EXPECT_EQ(g.user_degree(UserId{0}), 1u);
  EXPECT_EQ(g.object_degree(ObjectId{0}), 1u);
  EXPECT_EQ(g.object_tag_degree(ObjectId{0}), 3u);
  for (std::uint32_t t = 0; t < 3; ++t) EXPECT_EQ(g.tag_object_degree(TagId{t}), 1u);
}

TEST(BuildGraph, IdsFollowFirstAppearance) {
  Dataset d;
  d.assignments.push_back({"zed", "b", {"y"}});
  d.assignments.push_back({"amy", "a", {"x", "y"}});
  const auto g = build_graph(d);
  EXPECT_EQ(g.user_label(UserId{0}), "zed");
  EXPECT_EQ(g.object_label(ObjectId{1}), "a");
  EXPECT_EQ(g.tag_label(TagId{0}), "y");
}

TEST(BuildGraph, EmptyDatasetIsAnError) { EXPECT_THROW(build_graph(Dataset{}), GraphError); }

TEST(Degree, SmallExamples) {
  Dataset d;
  for (const char* u : {"u1", "u2", "u3"}) d.assignments.push_back({u, "hub", {"t"}});
  for (const char* o : {"a", "b", "c", "d"}) d.assignments.push_back({"u1", o, {"s"}});
  d.assignments.push_back({"u2", "a", {"s"}});
  const auto g = build_graph(d);
  EXPECT_EQ(g.degree(DegreeKind::kObject, index_of(*g.find_object("hub"))), 3u);
  EXPECT_EQ(g.degree(DegreeKind::kUser, index_of(g.user_id("u1"))), 5u);
  EXPECT_EQ(g.degree(DegreeKind::kTagObject, index_of(*g.find_tag("s"))), 4u);
  EXPECT_THROW(g.degree(DegreeKind::kUser, 99), LookupError);
  EXPECT_THROW(g.degree(DegreeKind::kTagObject, 2), LookupError);
  EXPECT_THROW(g.user_id("nobody"), LookupError);
}

TEST(Degree, KindNamesRoundTrip) {
  for (auto k : {DegreeKind::kUser, DegreeKind::kObject, DegreeKind::kObjectTag,
                 DegreeKind::kTagObject}) {
    EXPECT_EQ(parse_degree_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_degree_kind("bogus").has_value());
}

class RandomGraphs : public ::testing::TestWithParam<int> {};

TEST_P(RandomGraphs, RepresentationInvariants) {
  Rng rng(static_cast<std::uint64_t>(GetParam()));
  const auto d = oracle::random_dataset(rng, 1 + uniform_below(rng, 20),
                                        1 + uniform_below(rng, 20),
                                        1 + uniform_below(rng, 10),
                                        0.1 + 0.4 * uniform_unit(rng));
  const auto g = build_graph(d);
  const oracle::DenseModel dense(d, g);

  std::set<std::pair<std::uint32_t, std::uint32_t>> forward, backward;
  for (std::uint32_t u = 0; u < g.users(); ++u)
    for (auto o : g.user_objects(UserId{u})) forward.insert({u, index_of(o)});
  for (std::uint32_t o = 0; o < g.objects(); ++o)
    for (auto u : g.object_users(ObjectId{o})) backward.insert({index_of(u), o});
  EXPECT_EQ(forward, backward);

  std::set<std::pair<std::uint32_t, std::uint32_t>> ot, to;
  for (std::uint32_t o = 0; o < g.objects(); ++o)
    for (auto t : g.object_tags(ObjectId{o})) ot.insert({o, index_of(t)});
  for (std::uint32_t t = 0; t < g.tags(); ++t)
    for (auto o : g.tag_objects(TagId{t})) to.insert({index_of(o), t});
  EXPECT_EQ(ot, to);

  std::size_t ku = 0, ko = 0, kot = 0, kto = 0;
  for (std::uint32_t u = 0; u < g.users(); ++u) {
    ku += g.user_degree(UserId{u});
    EXPECT_EQ(static_cast<double>(g.user_degree(UserId{u})), dense.user_degree(u));
  }
  for (std::uint32_t o = 0; o < g.objects(); ++o) {
    ko += g.object_degree(ObjectId{o});
    kot += g.object_tag_degree(ObjectId{o});
    EXPECT_EQ(static_cast<double>(g.object_degree(ObjectId{o})), dense.object_degree(o));
    EXPECT_EQ(static_cast<double>(g.object_tag_degree(ObjectId{o})),
              dense.object_tag_degree(o));
  }
  for (std::uint32_t t = 0; t < g.tags(); ++t) kto += g.tag_object_degree(TagId{t});
  EXPECT_EQ(ku, ko);
  EXPECT_EQ(ku, g.user_object_edges());
  EXPECT_EQ(kot, kto);
  EXPECT_EQ(kot, g.object_tag_edges());

  // a''(u, t) recounted from the records, and the total tag uses.
  std::size_t uses = 0;
  for (const auto& a : d.assignments) uses += a.tags.size();
  std::size_t sum = 0;
  for (std::uint32_t u = 0; u < g.users(); ++u) {
    const auto tags = g.user_tags(UserId{u});
    const auto counts = g.user_tag_counts(UserId{u});
    for (std::size_t k = 0; k < tags.size(); ++k) {
      EXPECT_EQ(static_cast<double>(counts[k]), dense.a2[u][index_of(tags[k])]);
      sum += counts[k];
    }
  }
  EXPECT_EQ(sum, uses);

  for (std::uint32_t u = 0; u < g.users(); ++u)
    for (std::uint32_t o = 0; o < g.objects(); ++o)
      EXPECT_EQ(g.has_collected(UserId{u}, ObjectId{o}), dense.a[u][o] == 1.0);

  std::stringstream buf;
  write_graph(g, buf);
  EXPECT_EQ(read_graph(buf), g);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomGraphs, ::testing::Range(1, 41));

TEST(GraphFormat, RejectsWrongMagic) {
  std::istringstream in("not-a-graph 1\n");
  EXPECT_THROW(read_graph(in), Error);
}

TEST(GraphFormat, RejectsTruncatedInput) {
  Dataset d;
  d.assignments.push_back({"u", "o", {"a"}});
  std::stringstream buf;
  write_graph(build_graph(d), buf);
  auto text = buf.str();
  text.resize(text.size() - 8);
  std::istringstream in(text);
  EXPECT_THROW(read_graph(in), Error);
}

TEST(FromEdges, RejectsDuplicateAndIsolated) {
  LabelIndex users, objects, tags;
  users.intern("u");
  objects.intern("o");
  tags.intern("t");
  using G = TripartiteGraph;
  EXPECT_THROW(G::from_edges(users, objects, tags,
                             {{UserId{0}, ObjectId{0}}, {UserId{0}, ObjectId{0}}},
                             {{ObjectId{0}, TagId{0}, 1}}, {{UserId{0}, TagId{0}, 1}}),
               GraphError);
  EXPECT_THROW(G::from_edges(users, objects, tags, {}, {{ObjectId{0}, TagId{0}, 1}},
                             {{UserId{0}, TagId{0}, 1}}),
               GraphError);
  EXPECT_THROW(G::from_edges(users, objects, tags, {{UserId{0}, ObjectId{3}}},
                             {{ObjectId{0}, TagId{0}, 1}}, {{UserId{0}, TagId{0}, 1}}),
               GraphError);
  EXPECT_THROW(G::from_edges(users, objects, tags, {{UserId{0}, ObjectId{0}}},
                             {{ObjectId{0}, TagId{0}, 0}}, {{UserId{0}, TagId{0}, 1}}),
               GraphError);
}

}  // namespace
}  // namespace tagrec
