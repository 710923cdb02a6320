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

#include "tagrec/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tagrec/diffusion.hpp"
#include "tagrec/ingest.hpp"

namespace tagrec {
namespace {

namespace fs = std::filesystem;

const fs::path kData = TAGREC_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("tagrec_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsageError);
  EXPECT_EQ(run({"purify"}).code, cli::kUsageError);
  EXPECT_EQ(run({"split", "a", "b", "--ratio", "nope"}).code, cli::kUsageError);
}

TEST(Cli, HelpAndVersionSucceed) {
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, cli::kSuccess);
  EXPECT_NE(help.out.find("evaluate"), std::string::npos);
  EXPECT_EQ(run({"--version"}).code, cli::kSuccess);
}

TEST(Cli, PurifyWritesOutputAndLog) {
  const auto dir = scratch("purify");
  const auto r = run({"purify", (kData / "fixture.tsv").string(), (dir / "p.tsv").string()});
  ASSERT_EQ(r.code, cli::kSuccess) << r.err;
  const auto purified = load_dataset(dir / "p.tsv");
  EXPECT_EQ(purified.assignments, purify(load_dataset(kData / "fixture.tsv")).assignments);
  EXPECT_TRUE(fs::exists(dir / "p.tsv.log"));
  EXPECT_NE(r.err.find("# command=purify"), std::string::npos);

  // Already pure input comes back byte for byte.
  ASSERT_EQ(run({"purify", (dir / "p.tsv").string(), (dir / "q.tsv").string()}).code, 0);
  EXPECT_EQ(slurp(dir / "p.tsv"), slurp(dir / "q.tsv"));
  fs::remove_all(dir);
}

TEST(Cli, PurifyMalformedInputIsDataError) {
  const auto dir = scratch("malformed");
  std::ofstream(dir / "bad.tsv") << "u1\to1\tt1\nu2\to2\n";
  const auto r = run({"purify", (dir / "bad.tsv").string(), (dir / "out.tsv").string()});
  EXPECT_EQ(r.code, cli::kDataError);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  fs::remove_all(dir);
}

TEST(Cli, UnreadableInputIsDataError) {
  EXPECT_EQ(run({"stats", "/nonexistent/x.tsv"}).code, cli::kDataError);
}

TEST(Cli, UnwritableOutputIsRuntimeError) {
  EXPECT_EQ(run({"purify", (kData / "fixture.tsv").string(), "/proc/tagrec/out.tsv"}).code,
            cli::kRuntimeError);
}

TEST(Cli, SplitWritesArtifacts) {
  const auto dir = scratch("split");
  const auto r = run({"split", (kData / "fixture.tsv").string(), dir.string(), "--ratio",
                      "0.75", "--seed", "4"});
  ASSERT_EQ(r.code, cli::kSuccess) << r.err;
  const auto expected = split(load_dataset(kData / "fixture.tsv"), 0.75, 4);
  EXPECT_EQ(load_dataset(dir / "train.tsv").assignments, expected.train.assignments);
  EXPECT_EQ(load_dataset(dir / "test.tsv").assignments, expected.test.assignments);
  EXPECT_EQ(run({"split", (kData / "fixture.tsv").string(), dir.string(), "--ratio", "2"}).code,
            cli::kUsageError);
  fs::remove_all(dir);
}

TEST(Cli, StatsPrintsTableAndGraph) {
  const auto dir = scratch("stats");
  const auto r = run({"stats", (kData / "fixture.tsv").string(), "--purify", "--graph-out",
                      (dir / "g.txt").string()});
  ASSERT_EQ(r.code, cli::kSuccess) << r.err;
  EXPECT_EQ(r.out.rfind("n\tm\tr\t", 0), 0u);
  EXPECT_EQ(slurp(dir / "g.txt").rfind("tagrec-graph 1\n", 0), 0u);
  fs::remove_all(dir);
}

TEST(Cli, RecommendMatchesLibrary) {
  const auto d = purify(load_dataset(kData / "fixture.tsv"));
  const auto g = build_graph(d);
  const auto user = g.user_label(UserId{3});
  const auto list = recommend(g, diffuse(g, UserId{3}, Algorithm::kUserTagObject), 4);
  const auto r = run({"recommend", (kData / "fixture.tsv").string(), "--purify", "-u", user,
                      "-a", "UTO", "-L", "4"});
  ASSERT_EQ(r.code, cli::kSuccess) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "rank\tobject\tscore");
  for (std::size_t i = 0; i < list.objects.size(); ++i) {
    ASSERT_TRUE(std::getline(lines, line));
    EXPECT_EQ(line.substr(0, line.rfind('\t')),
              std::to_string(i + 1) + "\t" + g.object_label(list.objects[i]));
  }
  EXPECT_FALSE(std::getline(lines, line));

  // Same answer from a saved graph.
  const auto dir = scratch("recommend");
  ASSERT_EQ(run({"stats", (kData / "fixture.tsv").string(), "--purify", "--graph-out",
                 (dir / "g.txt").string()}).code, 0);
  const auto from_graph =
      run({"recommend", (dir / "g.txt").string(), "-u", user, "-a", "UTO", "-L", "4"});
  EXPECT_EQ(from_graph.out, r.out);
  fs::remove_all(dir);
}

TEST(Cli, RecommendErrors) {
  const auto input = (kData / "fixture.tsv").string();
  EXPECT_EQ(run({"recommend", input, "-u", "nobody"}).code, cli::kDataError);
  EXPECT_EQ(run({"recommend", input, "-u", "u0", "-L", "0"}).code, cli::kUsageError);
  EXPECT_EQ(run({"recommend", input, "-u", "u0", "-a", "XYZ"}).code, cli::kUsageError);
}

TEST(Cli, EvaluateFixtureConfig) {
  const auto dir = scratch("evaluate");
  const auto cfg = (kData / "fixture.cfg").string();
  const auto first = run({"evaluate", cfg, "--output", (dir / "a").string()});
  ASSERT_EQ(first.code, cli::kSuccess) << first.err;
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) files += e.is_regular_file();
  EXPECT_EQ(files, 9u);
  EXPECT_NE(first.err.find("# realizations=3"), std::string::npos);
  EXPECT_NE(first.out.find("UTO"), std::string::npos);

  const auto second = run({"evaluate", cfg, "--output", (dir / "b").string(), "--jobs", "3"});
  ASSERT_EQ(second.code, cli::kSuccess) << second.err;
  EXPECT_EQ(slurp(dir / "a" / "accuracy.csv"), slurp(dir / "b" / "accuracy.csv"));

  const auto overridden =
      run({"evaluate", cfg, "--output", (dir / "c").string(), "--realizations", "1"});
  ASSERT_EQ(overridden.code, cli::kSuccess);
  EXPECT_NE(overridden.err.find("# realizations=1"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, EvaluateErrors) {
  const auto dir = scratch("evaluate_err");
  const auto cfg = (kData / "fixture.cfg").string();
  EXPECT_EQ(run({"evaluate", cfg, "--dataset", "/nonexistent/d.tsv", "--output",
                 dir.string()}).code,
            cli::kUsageError);
  EXPECT_EQ(run({"evaluate", "/nonexistent/x.cfg"}).code, cli::kUsageError);
  EXPECT_EQ(run({"evaluate", cfg, "--ratio", "0", "--output", dir.string()}).code,
            cli::kUsageError);
  fs::remove_all(dir);
}

TEST(Cli, GenerateIsSeeded) {
  const auto dir = scratch("generate");
  ASSERT_EQ(run({"generate", (dir / "a.tsv").string(), "--users", "20", "--seed", "3"}).code, 0);
  ASSERT_EQ(run({"generate", (dir / "b.tsv").string(), "--users", "20", "--seed", "3"}).code, 0);
  EXPECT_EQ(slurp(dir / "a.tsv"), slurp(dir / "b.tsv"));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace tagrec
