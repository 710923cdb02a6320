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

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <tuple>

#include "tagrec/errors.hpp"
#include "text.hpp"

namespace tagrec {
namespace {

struct Edge {
  std::uint32_t row;
  std::uint32_t col;
  std::uint32_t weight;
};

// `edges` must be sorted by (row, col).
template <typename Target>
Adjacency<Target> to_rows(std::size_t rows, const std::vector<Edge>& edges) {
  Adjacency<Target> adj;
  adj.offsets.assign(rows + 1, 0);
  adj.targets.reserve(edges.size());
  for (const auto& e : edges) {
    ++adj.offsets[e.row + 1];
    adj.targets.push_back(static_cast<Target>(e.col));
  }
  for (std::size_t i = 0; i < rows; ++i) adj.offsets[i + 1] += adj.offsets[i];
  return adj;
}

Adjacency<std::uint32_t> to_weights(std::size_t rows,
                                    const std::vector<Edge>& edges) {
  Adjacency<std::uint32_t> adj;
  adj.offsets.assign(rows + 1, 0);
  adj.targets.reserve(edges.size());
  for (const auto& e : edges) {
    ++adj.offsets[e.row + 1];
    adj.targets.push_back(e.weight);
  }
  for (std::size_t i = 0; i < rows; ++i) adj.offsets[i + 1] += adj.offsets[i];
  return adj;
}

void sort_edges(std::vector<Edge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
}

std::vector<Edge> transposed(const std::vector<Edge>& edges) {
  std::vector<Edge> t;
  t.reserve(edges.size());
  for (const auto& e : edges) t.push_back({e.col, e.row, e.weight});
  sort_edges(t);
  return t;
}

void check_edges(std::vector<Edge>& edges, std::size_t rows, std::size_t cols,
                 std::string_view what) {
  for (const auto& e : edges) {
    if (e.row >= rows || e.col >= cols) {
      throw GraphError(std::string(what) + " edge (" + std::to_string(e.row) +
                       ", " + std::to_string(e.col) + ") out of range");
    }
    if (e.weight == 0) {
      throw GraphError(std::string(what) + " edge with zero count");
    }
  }
  sort_edges(edges);
  const auto dup = std::adjacent_find(
      edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.row == b.row && a.col == b.col;
      });
  if (dup != edges.end()) {
    throw GraphError(std::string(what) + " edge (" + std::to_string(dup->row) +
                     ", " + std::to_string(dup->col) + ") repeated");
  }
}

template <typename Target>
void require_no_empty_rows(const Adjacency<Target>& adj, std::string_view what) {
  for (std::size_t i = 0; i < adj.rows(); ++i) {
    if (adj.row_size(i) == 0) {
      throw GraphError(std::string(what) + " " + std::to_string(i) +
                       " has no neighbours");
    }
  }
}

}  // namespace

std::string_view to_string(DegreeKind kind) {
  switch (kind) {
    case DegreeKind::kUser:
      return "user";
    case DegreeKind::kObject:
      return "object";
    case DegreeKind::kObjectTag:
      return "object_tag";
    case DegreeKind::kTagObject:
      return "tag_object";
  }
  return "?";
}

std::optional<DegreeKind> parse_degree_kind(std::string_view name) {
  for (auto k : {DegreeKind::kUser, DegreeKind::kObject,
                 DegreeKind::kObjectTag, DegreeKind::kTagObject}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::uint32_t LabelIndex::intern(std::string_view label) {
  auto [it, inserted] = ids_.try_emplace(
      std::string(label), static_cast<std::uint32_t>(labels_.size()));
  if (inserted) labels_.emplace_back(label);
  return it->second;
}

std::optional<std::uint32_t> LabelIndex::find(std::string_view label) const {
  const auto it = ids_.find(std::string(label));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TripartiteGraph TripartiteGraph::from_edges(
    LabelIndex users, LabelIndex objects, LabelIndex tags,
    std::vector<UserObjectEdge> user_object,
    std::vector<ObjectTagEdge> object_tag, std::vector<UserTagEdge> user_tag) {
  const std::size_t n = users.size(), m = objects.size(), r = tags.size();

  std::vector<Edge> uo, ot, ut;
  uo.reserve(user_object.size());
  for (const auto& e : user_object) {
    uo.push_back({static_cast<std::uint32_t>(e.user),
                  static_cast<std::uint32_t>(e.object), 1});
  }
  ot.reserve(object_tag.size());
  for (const auto& e : object_tag) {
    ot.push_back({static_cast<std::uint32_t>(e.object),
                  static_cast<std::uint32_t>(e.tag), e.count});
  }
  ut.reserve(user_tag.size());
  for (const auto& e : user_tag) {
    ut.push_back({static_cast<std::uint32_t>(e.user),
                  static_cast<std::uint32_t>(e.tag), e.count});
  }
  check_edges(uo, n, m, "user-object");
  check_edges(ot, m, r, "object-tag");
  check_edges(ut, n, r, "user-tag");

  TripartiteGraph g;
  g.user_objects_ = to_rows<ObjectId>(n, uo);
  g.object_users_ = to_rows<UserId>(m, transposed(uo));
  g.object_tags_ = to_rows<TagId>(m, ot);
  g.object_tag_counts_ = to_weights(m, ot);
  g.tag_objects_ = to_rows<ObjectId>(r, transposed(ot));
  g.user_tags_ = to_rows<TagId>(n, ut);
  g.user_tag_counts_ = to_weights(n, ut);

  require_no_empty_rows(g.user_objects_, "user");
  require_no_empty_rows(g.object_users_, "object");
  require_no_empty_rows(g.object_tags_, "object");
  require_no_empty_rows(g.tag_objects_, "tag");

  g.users_ = std::move(users);
  g.objects_ = std::move(objects);
  g.tags_ = std::move(tags);
  return g;
}

TripartiteGraph build_graph(const Dataset& d) {
  if (d.empty()) throw GraphError("cannot build a graph from an empty dataset");

  LabelIndex users, objects, tags;
  std::vector<Edge> uo, ot, ut;
  for (const auto& a : d.assignments) {
    const auto u = users.intern(a.user);
    const auto o = objects.intern(a.object);
    uo.push_back({u, o, 1});
    for (const auto& label : a.tags) {
      const auto t = tags.intern(label);
      ot.push_back({o, t, 1});
      ut.push_back({u, t, 1});
    }
  }

  // Collapse repeats: A is binary, A' and A'' accumulate assignment counts.
  auto collapse = [](std::vector<Edge>& edges, bool binary) {
    sort_edges(edges);
    std::size_t out = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (out > 0 && edges[out - 1].row == edges[i].row &&
          edges[out - 1].col == edges[i].col) {
        if (!binary) edges[out - 1].weight += edges[i].weight;
        continue;
      }
      edges[out++] = edges[i];
    }
    edges.resize(out);
  };
  collapse(uo, true);
  collapse(ot, false);
  collapse(ut, false);

  std::vector<TripartiteGraph::UserObjectEdge> user_object;
  user_object.reserve(uo.size());
  for (const auto& e : uo) {
    user_object.push_back({UserId{e.row}, ObjectId{e.col}});
  }
  std::vector<TripartiteGraph::ObjectTagEdge> object_tag;
  object_tag.reserve(ot.size());
  for (const auto& e : ot) {
    object_tag.push_back({ObjectId{e.row}, TagId{e.col}, e.weight});
  }
  std::vector<TripartiteGraph::UserTagEdge> user_tag;
  user_tag.reserve(ut.size());
  for (const auto& e : ut) {
    user_tag.push_back({UserId{e.row}, TagId{e.col}, e.weight});
  }
  return TripartiteGraph::from_edges(
      std::move(users), std::move(objects), std::move(tags),
      std::move(user_object), std::move(object_tag), std::move(user_tag));
}

std::size_t TripartiteGraph::degree(DegreeKind kind, std::uint32_t id) const {
  auto check = [&](std::size_t limit) {
    if (id >= limit) {
      throw LookupError("no " + std::string(to_string(kind)) + " with id " +
                        std::to_string(id));
    }
  };
  switch (kind) {
    case DegreeKind::kUser:
      check(users());
      return user_degree(UserId{id});
    case DegreeKind::kObject:
      check(objects());
      return object_degree(ObjectId{id});
    case DegreeKind::kObjectTag:
      check(objects());
      return object_tag_degree(ObjectId{id});
    case DegreeKind::kTagObject:
      check(tags());
      return tag_object_degree(TagId{id});
  }
  throw LookupError("unknown degree kind");
}

bool TripartiteGraph::has_collected(UserId u, ObjectId o) const {
  const auto row = user_objects(u);
  return std::binary_search(row.begin(), row.end(), o);
}

std::optional<UserId> TripartiteGraph::find_user(std::string_view label) const {
  if (auto id = users_.find(label)) return UserId{*id};
  return std::nullopt;
}

std::optional<ObjectId> TripartiteGraph::find_object(
    std::string_view label) const {
  if (auto id = objects_.find(label)) return ObjectId{*id};
  return std::nullopt;
}

std::optional<TagId> TripartiteGraph::find_tag(std::string_view label) const {
  if (auto id = tags_.find(label)) return TagId{*id};
  return std::nullopt;
}

UserId TripartiteGraph::user_id(std::string_view label) const {
  if (auto id = find_user(label)) return *id;
  throw LookupError("unknown user '" + std::string(label) + "'");
}

void write_graph(const TripartiteGraph& g, std::ostream& out) {
  out << kGraphMagic << " 1\n";
  out << "users " << g.users() << '\n';
  for (std::uint32_t i = 0; i < g.users(); ++i) out << g.user_label(UserId{i}) << '\n';
  out << "objects " << g.objects() << '\n';
  for (std::uint32_t i = 0; i < g.objects(); ++i) {
    out << g.object_label(ObjectId{i}) << '\n';
  }
  out << "tags " << g.tags() << '\n';
  for (std::uint32_t i = 0; i < g.tags(); ++i) out << g.tag_label(TagId{i}) << '\n';

  out << "user_object " << g.user_object_edges() << '\n';
  for (std::uint32_t u = 0; u < g.users(); ++u) {
    for (auto o : g.user_objects(UserId{u})) out << u << ' ' << index_of(o) << '\n';
  }
  out << "object_tag " << g.object_tag_edges() << '\n';
  for (std::uint32_t o = 0; o < g.objects(); ++o) {
    const auto tags = g.object_tags(ObjectId{o});
    const auto counts = g.object_tag_counts(ObjectId{o});
    for (std::size_t k = 0; k < tags.size(); ++k) {
      out << o << ' ' << index_of(tags[k]) << ' ' << counts[k] << '\n';
    }
  }
  out << "user_tag " << g.user_tag_edges() << '\n';
  for (std::uint32_t u = 0; u < g.users(); ++u) {
    const auto tags = g.user_tags(UserId{u});
    const auto counts = g.user_tag_counts(UserId{u});
    for (std::size_t k = 0; k < tags.size(); ++k) {
      out << u << ' ' << index_of(tags[k]) << ' ' << counts[k] << '\n';
    }
  }
}

namespace {

class GraphReader {
 public:
  explicit GraphReader(std::istream& in) : in_(in) {}

  std::string next_line() {
    std::string line;
    if (!std::getline(in_, line)) {
      throw GraphError("graph file truncated after line " +
                       std::to_string(line_no_));
    }
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  std::size_t section(std::string_view name) {
    const auto line = next_line();
    const auto parts = text::split(line, ' ');
    if (parts.size() != 2 || parts[0] != name) {
      fail("expected section '" + std::string(name) + "'");
    }
    const auto count = text::parse_number<std::size_t>(parts[1]);
    if (!count) fail("bad count");
    return *count;
  }

  LabelIndex labels(std::string_view name) {
    const auto count = section(name);
    LabelIndex index;
    for (std::size_t i = 0; i < count; ++i) {
      const auto label = next_line();
      if (index.intern(label) != i) fail("duplicate label '" + label + "'");
    }
    return index;
  }

  std::vector<std::uint32_t> fields(std::size_t expected) {
    const auto line = next_line();
    const auto parts = text::split(line, ' ');
    if (parts.size() != expected) fail("expected " + std::to_string(expected) + " fields");
    std::vector<std::uint32_t> values;
    for (auto p : parts) {
      const auto v = text::parse_number<std::uint32_t>(p);
      if (!v) fail("bad integer '" + std::string(p) + "'");
      values.push_back(*v);
    }
    return values;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw GraphError("graph line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

TripartiteGraph read_graph(std::istream& in) {
  GraphReader reader(in);
  if (reader.next_line() != std::string(kGraphMagic) + " 1") {
    reader.fail("not a tagrec graph (bad header)");
  }
  auto users = reader.labels("users");
  auto objects = reader.labels("objects");
  auto tags = reader.labels("tags");

  std::vector<TripartiteGraph::UserObjectEdge> uo(reader.section("user_object"));
  for (auto& e : uo) {
    const auto f = reader.fields(2);
    e = {UserId{f[0]}, ObjectId{f[1]}};
  }
  std::vector<TripartiteGraph::ObjectTagEdge> ot(reader.section("object_tag"));
  for (auto& e : ot) {
    const auto f = reader.fields(3);
    e = {ObjectId{f[0]}, TagId{f[1]}, f[2]};
  }
  std::vector<TripartiteGraph::UserTagEdge> ut(reader.section("user_tag"));
  for (auto& e : ut) {
    const auto f = reader.fields(3);
    e = {UserId{f[0]}, TagId{f[1]}, f[2]};
  }
  return TripartiteGraph::from_edges(std::move(users), std::move(objects),
                                     std::move(tags), std::move(uo),
                                     std::move(ot), std::move(ut));
}

}  // namespace tagrec
