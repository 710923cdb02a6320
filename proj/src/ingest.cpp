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

#include "tagrec/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tagrec/errors.hpp"
#include "tagrec/random.hpp"
#include "text.hpp"

namespace tagrec {
namespace {

constexpr std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

class Interner {
 public:
  std::uint32_t intern(const std::string& label) {
    auto [it, inserted] =
        ids_.try_emplace(label, static_cast<std::uint32_t>(ids_.size()));
    return it->second;
  }
  std::size_t size() const { return ids_.size(); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
};

void add_tags(std::string_view field, std::vector<std::string>& tags) {
  for (auto token : text::split(field, ',')) {
    if (token.empty()) continue;
    if (std::find(tags.begin(), tags.end(), token) == tags.end()) {
      tags.emplace_back(token);
    }
  }
}

}  // namespace

Dataset parse_records(std::istream& in, std::string source) {
  Dataset d;
  d.provenance.source = std::move(source);
  std::unordered_map<std::string, std::size_t> pair_index;

  std::string line;
  std::size_t line_no = 0;
  std::size_t merged = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    const auto fields = text::split(line, '\t');
    if (fields.size() < 3) {
      throw ParseError(line_no, "expected <user>\\t<object>\\t<tags>, got " +
                                    std::to_string(fields.size()) +
                                    " field(s)");
    }
    if (fields[0].empty()) throw ParseError(line_no, "empty user label");
    if (fields[1].empty()) throw ParseError(line_no, "empty object label");

    Assignment a{std::string(fields[0]), std::string(fields[1]), {}};
    for (std::size_t f = 2; f < fields.size(); ++f) add_tags(fields[f], a.tags);
    if (a.tags.empty()) throw ParseError(line_no, "empty tag list");

    std::string key = a.user;
    key.push_back('\t');
    key += a.object;
    auto [it, inserted] = pair_index.try_emplace(key, d.assignments.size());
    if (inserted) {
      d.assignments.push_back(std::move(a));
    } else {
      auto& tags = d.assignments[it->second].tags;
      for (auto& t : a.tags) {
        if (std::find(tags.begin(), tags.end(), t) == tags.end()) {
          tags.push_back(std::move(t));
        }
      }
      ++merged;
    }
  }
  if (merged > 0) {
    d.provenance.filter_log.push_back(
        "parse: merged " + std::to_string(merged) +
        " duplicate (user, object) line(s) by tag union");
  }
  return d;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path.string() + "'");
  return parse_records(in, path.string());
}

void serialize_records(const Dataset& d, std::ostream& out) {
  for (const auto& a : d.assignments) {
    out << a.user << '\t' << a.object << '\t';
    for (std::size_t i = 0; i < a.tags.size(); ++i) {
      if (i > 0) out << ',';
      out << a.tags[i];
    }
    out << '\n';
  }
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  serialize_records(d, out);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Dataset purify(const Dataset& d) {
  struct Work {
    std::uint32_t user;
    std::uint32_t object;
    std::vector<std::uint32_t> tags;  // interned, parallel to kept_positions
    std::vector<std::uint32_t> kept_positions;
    bool alive = true;
  };

  Interner users, objects, tags;
  std::vector<Work> work;
  work.reserve(d.size());
  for (const auto& a : d.assignments) {
    Work w{users.intern(a.user), objects.intern(a.object), {}, {}, true};
    for (std::uint32_t p = 0; p < a.tags.size(); ++p) {
      w.tags.push_back(tags.intern(a.tags[p]));
      w.kept_positions.push_back(p);
    }
    work.push_back(std::move(w));
  }

  Dataset out;
  out.provenance = d.provenance;

  std::size_t round = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++round;
    std::size_t low_use = 0, narrow_tag = 0, emptied = 0, few_users = 0,
                few_tags = 0;

    auto drop_tags_if = [&](auto&& pred) {
      std::size_t dropped = 0;
      for (auto& w : work) {
        if (!w.alive) continue;
        std::size_t keep = 0;
        for (std::size_t i = 0; i < w.tags.size(); ++i) {
          if (pred(w, w.tags[i])) {
            ++dropped;
            continue;
          }
          w.tags[keep] = w.tags[i];
          w.kept_positions[keep] = w.kept_positions[i];
          ++keep;
        }
        w.tags.resize(keep);
        w.kept_positions.resize(keep);
      }
      return dropped;
    };

    // (e) per-user tag usage count >= 2.
    {
      std::unordered_map<std::uint64_t, std::uint32_t> uses;
      for (const auto& w : work) {
        if (!w.alive) continue;
        for (auto t : w.tags) ++uses[pair_key(w.user, t)];
      }
      low_use = drop_tags_if([&](const Work& w, std::uint32_t t) {
        return uses[pair_key(w.user, t)] < 2;
      });
    }

    // (d) tag used by >= 2 distinct users.
    {
      std::unordered_set<std::uint64_t> user_tag;
      std::vector<std::uint32_t> tag_users(tags.size(), 0);
      for (const auto& w : work) {
        if (!w.alive) continue;
        for (auto t : w.tags) {
          if (user_tag.insert(pair_key(t, w.user)).second) ++tag_users[t];
        }
      }
      narrow_tag = drop_tags_if(
          [&](const Work&, std::uint32_t t) { return tag_users[t] < 2; });
    }

    for (auto& w : work) {
      if (w.alive && w.tags.empty()) {
        w.alive = false;
        ++emptied;
      }
    }

    // (b) object collected by >= 2 distinct users.
    {
      std::unordered_set<std::uint64_t> seen;
      std::vector<std::uint32_t> object_users(objects.size(), 0);
      for (const auto& w : work) {
        if (w.alive && seen.insert(pair_key(w.object, w.user)).second) {
          ++object_users[w.object];
        }
      }
      for (auto& w : work) {
        if (w.alive && object_users[w.object] < 2) {
          w.alive = false;
          ++few_users;
        }
      }
    }

    // (c) object annotated with >= 2 distinct tags.
    {
      std::unordered_set<std::uint64_t> seen;
      std::vector<std::uint32_t> object_tags(objects.size(), 0);
      for (const auto& w : work) {
        if (!w.alive) continue;
        for (auto t : w.tags) {
          if (seen.insert(pair_key(w.object, t)).second) ++object_tags[w.object];
        }
      }
      for (auto& w : work) {
        if (w.alive && object_tags[w.object] < 2) {
          w.alive = false;
          ++few_tags;
        }
      }
    }

    // (a) holds by construction: users exist only through live assignments.
    changed = low_use + narrow_tag + emptied + few_users + few_tags > 0;
    if (changed) {
      std::ostringstream log;
      log << "purify round " << round << ": dropped " << low_use
          << " tag use(s) with per-user count < 2, " << narrow_tag
          << " tag use(s) of tags with < 2 users; removed " << emptied
          << " emptied assignment(s), " << few_users
          << " assignment(s) of objects with < 2 users, " << few_tags
          << " assignment(s) of objects with < 2 tags";
      out.provenance.filter_log.push_back(log.str());
    }
  }

  for (std::size_t i = 0; i < work.size(); ++i) {
    if (!work[i].alive) continue;
    const auto& src = d.assignments[i];
    Assignment a{src.user, src.object, {}};
    a.tags.reserve(work[i].kept_positions.size());
    for (auto p : work[i].kept_positions) a.tags.push_back(src.tags[p]);
    out.assignments.push_back(std::move(a));
  }
  out.provenance.filter_log.push_back(
      "purify: " + std::to_string(d.size()) + " -> " +
      std::to_string(out.size()) + " assignment(s), fixpoint after " +
      std::to_string(round) + " round(s)");
  return out;
}

SplitPair split(const Dataset& d, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ArgumentError("split ratio must be in (0, 1], got " +
                        text::format_double(ratio));
  }
  const std::size_t n = d.size();
  const auto train_count = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(std::span<std::size_t>(order), rng);

  std::vector<char> in_train(n, 0);
  for (std::size_t i = 0; i < train_count; ++i) in_train[order[i]] = 1;

  SplitPair s;
  s.seed = seed;
  s.ratio = ratio;
  s.train.provenance = d.provenance;
  s.test.provenance = d.provenance;
  s.train.assignments.reserve(train_count);
  s.test.assignments.reserve(n - train_count);
  for (std::size_t i = 0; i < n; ++i) {
    (in_train[i] ? s.train : s.test).assignments.push_back(d.assignments[i]);
  }
  const std::string note = "split ratio=" + text::format_double(ratio) +
                           " seed=" + std::to_string(seed) +
                           ": train=" + std::to_string(s.train.size()) +
                           " test=" + std::to_string(s.test.size());
  s.train.provenance.filter_log.push_back(note);
  s.test.provenance.filter_log.push_back(note);
  return s;
}

void write_split(const SplitPair& s, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir.string() +
                  "': " + ec.message());
  }
  save_dataset(s.train, dir / "train.tsv");
  save_dataset(s.test, dir / "test.tsv");

  const auto meta_path = dir / "split.meta";
  std::ofstream meta(meta_path, std::ios::binary);
  if (!meta) throw IoError("cannot write '" + meta_path.string() + "'");
  meta << "source=" << s.train.provenance.source << '\n'
       << "seed=" << s.seed << '\n'
       << "ratio=" << text::format_double(s.ratio) << '\n'
       << "input=" << s.train.size() + s.test.size() << '\n'
       << "train=" << s.train.size() << '\n'
       << "test=" << s.test.size() << '\n';
  if (!meta) throw IoError("write failed for '" + meta_path.string() + "'");
}

DatasetStats summarize(const Dataset& d) {
  Interner users, objects, tags;
  std::unordered_set<std::uint64_t> user_object, object_tag, user_tag;
  for (const auto& a : d.assignments) {
    const auto u = users.intern(a.user);
    const auto o = objects.intern(a.object);
    user_object.insert(pair_key(u, o));
    for (const auto& label : a.tags) {
      const auto t = tags.intern(label);
      object_tag.insert(pair_key(o, t));
      user_tag.insert(pair_key(u, t));
    }
  }
  DatasetStats s;
  s.users = users.size();
  s.objects = objects.size();
  s.tags = tags.size();
  if (s.users > 0) {
    s.mean_user_degree = static_cast<double>(user_object.size()) / s.users;
    s.mean_user_tags = static_cast<double>(user_tag.size()) / s.users;
  }
  if (s.objects > 0) {
    s.mean_object_tags = static_cast<double>(object_tag.size()) / s.objects;
  }
  return s;
}

}  // namespace tagrec
