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

// Tag-assignment records: parsing, purification and train/test splitting.
//
// Record format, one per line:
//
//   <user> TAB <object> TAB <tag1>[,<tag2>...]
//
// Lines starting with '#' and blank lines are ignored. Further tab-separated
// fields after the third are read as additional comma-separated tag lists.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace tagrec {

/// One collection event: a user collected an object and annotated it.
/// `tags` keeps first-seen order and holds no duplicates.
struct Assignment {
  std::string user;
  std::string object;
  std::vector<std::string> tags;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Provenance {
  std::string source;
  std::vector<std::string> filter_log;
};

struct Dataset {
  std::vector<Assignment> assignments;
  Provenance provenance;

  std::size_t size() const noexcept { return assignments.size(); }
  bool empty() const noexcept { return assignments.empty(); }
};

struct SplitPair {
  Dataset train;
  Dataset test;
  std::uint64_t seed = 0;
  double ratio = 1.0;
};

/// Table-1 style summary of a dataset.
struct DatasetStats {
  std::size_t users = 0;    // n
  std::size_t objects = 0;  // m
  std::size_t tags = 0;     // r
  double mean_user_degree = 0.0;   // <k>: objects per user
  double mean_object_tags = 0.0;   // <k'>: distinct tags per object
  double mean_user_tags = 0.0;     // <k''>: distinct tags per user

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

/// Parses records from `in`. Duplicate (user, object) lines are merged into
/// the first occurrence by tag-set union. Throws ParseError on a malformed
/// line.
Dataset parse_records(std::istream& in, std::string source = "<stream>");

/// Reads and parses a file. Throws IoError when it cannot be opened.
Dataset load_dataset(const std::filesystem::path& path);

/// Writes `d` in the record format; parse_records reads it back unchanged.
void serialize_records(const Dataset& d, std::ostream& out);
void save_dataset(const Dataset& d, const std::filesystem::path& path);

/// Removes assignments and tag uses until all of the following hold:
///   (a) every user has at least one object;
///   (b) every object is collected by at least two distinct users;
///   (c) every object carries at least two distinct tags;
///   (d) every tag is used by at least two distinct users;
///   (e) every user uses each of their tags in at least two assignments.
/// Every removal is forced, so the greatest satisfying subset is reached
/// regardless of visiting order. Input order is preserved.
Dataset purify(const Dataset& d);

/// Seeded uniform partition at assignment granularity:
/// |train| = round(ratio * |d|). Both halves keep input order.
/// Throws ArgumentError unless 0 < ratio <= 1.
SplitPair split(const Dataset& d, double ratio, std::uint64_t seed);

/// Writes `train.tsv`, `test.tsv` and `split.meta` into `dir`.
void write_split(const SplitPair& s, const std::filesystem::path& dir);

DatasetStats summarize(const Dataset& d);

}  // namespace tagrec
