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

// Immutable user-object-tag graph.
//
// Three relations are stored as compressed sorted adjacency lists:
//   A   user -> objects (binary), with its transpose object -> users
//   A'  object -> tags (binary), with its transpose tag -> objects
//   A'' user -> tags, weighted by the number of the user's assignments
//       that carry the tag
// Each object -> tag edge also keeps the number of assignments carrying the
// tag on that object (used for per-object tag entropy); A' itself is binary.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tagrec/ingest.hpp"

namespace tagrec {

enum class UserId : std::uint32_t {};
enum class ObjectId : std::uint32_t {};
enum class TagId : std::uint32_t {};

template <typename Id>
constexpr std::size_t index_of(Id id) noexcept {
  return static_cast<std::size_t>(id);
}

enum class DegreeKind {
  kUser,       // k(U): objects collected by a user
  kObject,     // k(O): users who collected an object
  kObjectTag,  // k'(O): distinct tags on an object
  kTagObject,  // k'(T): objects carrying a tag
};

std::string_view to_string(DegreeKind kind);
/// Accepts "user", "object", "object_tag", "tag_object".
std::optional<DegreeKind> parse_degree_kind(std::string_view name);

/// Dense bijection between labels and ids, in first-appearance order.
class LabelIndex {
 public:
  std::uint32_t intern(std::string_view label);
  std::optional<std::uint32_t> find(std::string_view label) const;
  const std::string& label(std::uint32_t id) const { return labels_[id]; }
  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  friend bool operator==(const LabelIndex& a, const LabelIndex& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

/// Offset-array adjacency. Row i is targets[offsets[i] .. offsets[i+1]).
template <typename Target>
struct Adjacency {
  std::vector<std::size_t> offsets{0};
  std::vector<Target> targets;

  std::size_t rows() const noexcept { return offsets.size() - 1; }
  std::span<const Target> row(std::size_t i) const noexcept {
    return {targets.data() + offsets[i], offsets[i + 1] - offsets[i]};
  }
  std::size_t row_size(std::size_t i) const noexcept {
    return offsets[i + 1] - offsets[i];
  }
  friend bool operator==(const Adjacency&, const Adjacency&) = default;
};

class TripartiteGraph {
 public:
  std::size_t users() const noexcept { return users_.size(); }
  std::size_t objects() const noexcept { return objects_.size(); }
  std::size_t tags() const noexcept { return tags_.size(); }

  std::span<const ObjectId> user_objects(UserId u) const {
    return user_objects_.row(index_of(u));
  }
  std::span<const UserId> object_users(ObjectId o) const {
    return object_users_.row(index_of(o));
  }
  std::span<const TagId> object_tags(ObjectId o) const {
    return object_tags_.row(index_of(o));
  }
  /// Assignments on `o` carrying each tag of object_tags(o).
  std::span<const std::uint32_t> object_tag_counts(ObjectId o) const {
    return object_tag_counts_.row(index_of(o));
  }
  std::span<const ObjectId> tag_objects(TagId t) const {
    return tag_objects_.row(index_of(t));
  }
  std::span<const TagId> user_tags(UserId u) const {
    return user_tags_.row(index_of(u));
  }
  /// a''(u, t) for each tag of user_tags(u).
  std::span<const std::uint32_t> user_tag_counts(UserId u) const {
    return user_tag_counts_.row(index_of(u));
  }

  std::size_t user_degree(UserId u) const {
    return user_objects_.row_size(index_of(u));
  }
  std::size_t object_degree(ObjectId o) const {
    return object_users_.row_size(index_of(o));
  }
  std::size_t object_tag_degree(ObjectId o) const {
    return object_tags_.row_size(index_of(o));
  }
  std::size_t tag_object_degree(TagId t) const {
    return tag_objects_.row_size(index_of(t));
  }

  /// Degree by kind with a range-checked id. Throws LookupError.
  std::size_t degree(DegreeKind kind, std::uint32_t id) const;

  bool has_collected(UserId u, ObjectId o) const;

  std::size_t user_object_edges() const { return user_objects_.targets.size(); }
  std::size_t object_tag_edges() const { return object_tags_.targets.size(); }
  std::size_t user_tag_edges() const { return user_tags_.targets.size(); }

  std::optional<UserId> find_user(std::string_view label) const;
  std::optional<ObjectId> find_object(std::string_view label) const;
  std::optional<TagId> find_tag(std::string_view label) const;
  /// Throws LookupError for an unknown label.
  UserId user_id(std::string_view label) const;

  const std::string& user_label(UserId u) const {
    return users_.label(static_cast<std::uint32_t>(u));
  }
  const std::string& object_label(ObjectId o) const {
    return objects_.label(static_cast<std::uint32_t>(o));
  }
  const std::string& tag_label(TagId t) const {
    return tags_.label(static_cast<std::uint32_t>(t));
  }

  friend bool operator==(const TripartiteGraph&,
                         const TripartiteGraph&) = default;

  struct UserObjectEdge {
    UserId user;
    ObjectId object;
  };
  struct ObjectTagEdge {
    ObjectId object;
    TagId tag;
    std::uint32_t count;
  };
  struct UserTagEdge {
    UserId user;
    TagId tag;
    std::uint32_t count;
  };

  /// Assembles a graph from labelled entities and edge lists. Edges may come
  /// in any order but must not repeat. Throws GraphError if an id is out of
  /// range, an edge repeats, a count is zero, or an entity is isolated.
  static TripartiteGraph from_edges(LabelIndex users, LabelIndex objects,
                                    LabelIndex tags,
                                    std::vector<UserObjectEdge> user_object,
                                    std::vector<ObjectTagEdge> object_tag,
                                    std::vector<UserTagEdge> user_tag);

 private:
  LabelIndex users_;
  LabelIndex objects_;
  LabelIndex tags_;
  Adjacency<ObjectId> user_objects_;
  Adjacency<UserId> object_users_;
  Adjacency<TagId> object_tags_;
  Adjacency<std::uint32_t> object_tag_counts_;
  Adjacency<ObjectId> tag_objects_;
  Adjacency<TagId> user_tags_;
  Adjacency<std::uint32_t> user_tag_counts_;
};

/// Builds A, A', A'' from assignments. Ids follow first appearance in `d`.
/// Throws GraphError on an empty dataset.
TripartiteGraph build_graph(const Dataset& d);

/// Plain-text graph format:
///
///   tagrec-graph 1
///   users <n>          followed by n label lines, in id order
///   objects <m>        followed by m label lines
///   tags <r>           followed by r label lines
///   user_object <e>    followed by e lines "<user id> <object id>"
///   object_tag <e>     followed by e lines "<object id> <tag id> <count>"
///   user_tag <e>       followed by e lines "<user id> <tag id> <count>"
void write_graph(const TripartiteGraph& g, std::ostream& out);
TripartiteGraph read_graph(std::istream& in);

inline constexpr std::string_view kGraphMagic = "tagrec-graph";

}  // namespace tagrec
