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

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <utility>

#include "tagrec/diffusion.hpp"
#include "tagrec/errors.hpp"
#include "tagrec/graph.hpp"
#include "tagrec/harness.hpp"
#include "tagrec/ingest.hpp"
#include "tagrec/synthetic.hpp"
#include "text.hpp"

namespace tagrec::cli {
namespace {

namespace fs = std::filesystem;

// Failures already classified by exit code.
struct Failure {
  ExitCode code;
  std::string message;
};

using Settings = std::vector<std::pair<std::string, std::string>>;

void print_settings(std::ostream& err, std::string_view command,
                    const Settings& settings) {
  err << "# command=" << command << '\n';
  for (const auto& [key, value] : settings) err << "# " << key << '=' << value << '\n';
}

Dataset read_dataset(const std::string& path) {
  try {
    return load_dataset(path);
  } catch (const IoError& e) {
    throw Failure{kDataError, e.what()};
  }
}

void write_text(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

bool is_graph_file(const std::string& path) {
  std::ifstream in(path);
  std::string first;
  return in && std::getline(in, first) &&
         first.rfind(std::string(kGraphMagic), 0) == 0;
}

TripartiteGraph read_graph_or_dataset(const std::string& path, bool purify_first) {
  if (is_graph_file(path)) {
    std::ifstream in(path);
    return read_graph(in);
  }
  Dataset d = read_dataset(path);
  if (purify_first) d = purify(d);
  if (d.empty()) throw Failure{kDataError, "dataset '" + path + "' is empty"};
  return build_graph(d);
}

struct PurifyArgs {
  std::string input, output;
};

int cmd_purify(const PurifyArgs& a, std::ostream&, std::ostream& err) {
  print_settings(err, "purify", {{"input", a.input}, {"output", a.output}});
  const Dataset raw = read_dataset(a.input);
  const Dataset pure = purify(raw);
  save_dataset(pure, a.output);
  std::string log;
  for (const auto& line : pure.provenance.filter_log) log += line + '\n';
  write_text(a.output + ".log", log);
  err << "purified " << raw.size() << " -> " << pure.size()
      << " assignment(s)\n";
  return kSuccess;
}

struct SplitArgs {
  std::string input, output_dir;
  double ratio = 0.9;
  std::uint64_t seed = 1;
  bool purify_first = false;
};

int cmd_split(const SplitArgs& a, std::ostream& out, std::ostream& err) {
  print_settings(err, "split",
                 {{"input", a.input},
                  {"output", a.output_dir},
                  {"ratio", text::format_double(a.ratio)},
                  {"seed", std::to_string(a.seed)},
                  {"purify", a.purify_first ? "true" : "false"}});
  Dataset d = read_dataset(a.input);
  if (a.purify_first) d = purify(d);
  const SplitPair s = split(d, a.ratio, a.seed);
  write_split(s, a.output_dir);
  out << "train\t" << s.train.size() << "\ntest\t" << s.test.size() << '\n';
  return kSuccess;
}

struct StatsArgs {
  std::string input, graph_out;
  bool purify_first = false;
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
  print_settings(err, "stats",
                 {{"input", a.input},
                  {"purify", a.purify_first ? "true" : "false"},
                  {"graph_out", a.graph_out}});
  Dataset d = read_dataset(a.input);
  if (a.purify_first) d = purify(d);
  const DatasetStats s = summarize(d);
  out << "n\tm\tr\tk_mean\tk_object_tags_mean\tk_user_tags_mean\n"
      << s.users << '\t' << s.objects << '\t' << s.tags << '\t'
      << text::format_double(s.mean_user_degree) << '\t'
      << text::format_double(s.mean_object_tags) << '\t'
      << text::format_double(s.mean_user_tags) << '\n';
  if (!a.graph_out.empty()) {
    if (d.empty()) throw Failure{kDataError, "cannot write a graph of an empty dataset"};
    const TripartiteGraph g = build_graph(d);
    std::ofstream gout(a.graph_out, std::ios::binary);
    write_graph(g, gout);
    if (!gout) throw IoError("cannot write '" + a.graph_out + "'");
  }
  return kSuccess;
}

struct RecommendArgs {
  std::string input, user, algorithm = "UTO";
  long long length = 10;
  bool purify_first = false;
};

int cmd_recommend(const RecommendArgs& a, std::ostream& out, std::ostream& err) {
  print_settings(err, "recommend",
                 {{"input", a.input},
                  {"user", a.user},
                  {"algorithm", a.algorithm},
                  {"length", std::to_string(a.length)},
                  {"purify", a.purify_first ? "true" : "false"}});
  if (a.length < 1) throw Failure{kUsageError, "--length must be >= 1"};
  const auto algorithm = parse_algorithm(a.algorithm);
  if (!algorithm) {
    throw Failure{kUsageError, "unknown algorithm '" + a.algorithm + "'"};
  }
  const TripartiteGraph g = read_graph_or_dataset(a.input, a.purify_first);
  const UserId user = g.user_id(a.user);
  const ScoreVector scores = diffuse(g, user, *algorithm);
  const RecommendationList list =
      recommend(g, scores, static_cast<std::size_t>(a.length));
  out << "rank\tobject\tscore\n";
  for (std::size_t i = 0; i < list.objects.size(); ++i) {
    out << i + 1 << '\t' << g.object_label(list.objects[i]) << '\t'
        << text::format_double(list.scores[i]) << '\n';
  }
  return kSuccess;
}

struct EvaluateArgs {
  std::string config;
  Settings overrides;  // flag name -> value, in flag order
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(a.config);
    for (const auto& [key, value] : a.overrides) apply_setting(cfg, key, value);
    cfg.validate();
  } catch (const IoError& e) {
    throw Failure{kUsageError, e.what()};
  } catch (const ArgumentError& e) {
    throw Failure{kUsageError, std::string("invalid config: ") + e.what()};
  }
  Settings settings = describe(cfg);
  settings.emplace_back("output", cfg.output.string());
  settings.emplace_back("jobs", std::to_string(cfg.jobs));
  print_settings(err, "evaluate", settings);

  if (cfg.dataset.empty()) throw Failure{kUsageError, "config has no dataset"};
  if (!fs::is_regular_file(cfg.dataset)) {
    throw Failure{kUsageError,
                  "dataset '" + cfg.dataset.string() + "' does not exist"};
  }
  const ExperimentReport report = run_experiment(cfg);
  const auto files = emit_report(report, cfg.output);
  print_accuracy(report, out);
  err << "wrote " << files.size() << " file(s) to " << cfg.output.string()
      << '\n';
  return kSuccess;
}

struct GenerateArgs {
  std::string output;
  PlantedConfig planted;
};

int cmd_generate(const GenerateArgs& a, std::ostream&, std::ostream& err) {
  const auto& p = a.planted;
  print_settings(err, "generate",
                 {{"output", a.output},
                  {"users", std::to_string(p.users)},
                  {"objects", std::to_string(p.objects)},
                  {"tags", std::to_string(p.tags)},
                  {"communities", std::to_string(p.communities)},
                  {"mean_degree", text::format_double(p.mean_objects_per_user)},
                  {"seed", std::to_string(p.seed)}});
  save_dataset(planted_dataset(p), a.output);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Tag-aware diffusion recommendation and evaluation", "tagrec"};
  app.set_version_flag("--version", std::string("tagrec ") + std::string(kVersion));
  app.require_subcommand(1);

  PurifyArgs purify_args;
  auto* purify_cmd = app.add_subcommand(
      "purify", "Filter records until every purification constraint holds");
  purify_cmd->add_option("input", purify_args.input, "Raw records")->required();
  purify_cmd->add_option("output", purify_args.output,
                         "Purified records (filter log goes to <output>.log)")
      ->required();

  SplitArgs split_args;
  auto* split_cmd = app.add_subcommand("split", "Seeded train/test split");
  split_cmd->add_option("input", split_args.input, "Records")->required();
  split_cmd->add_option("output", split_args.output_dir,
                        "Directory for train.tsv, test.tsv, split.meta")
      ->required();
  split_cmd->add_option("--ratio", split_args.ratio, "Training fraction")
      ->capture_default_str();
  split_cmd->add_option("--seed", split_args.seed, "Random seed")
      ->capture_default_str();
  split_cmd->add_flag("--purify", split_args.purify_first, "Purify before splitting");

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics");
  stats_cmd->add_option("input", stats_args.input, "Records")->required();
  stats_cmd->add_flag("--purify", stats_args.purify_first, "Purify first");
  stats_cmd->add_option("--graph-out", stats_args.graph_out,
                        "Also write the graph in tagrec-graph format");

  RecommendArgs rec_args;
  auto* rec_cmd = app.add_subcommand("recommend", "Top-L list for one user");
  rec_cmd->add_option("input", rec_args.input, "Records or tagrec-graph file")
      ->required();
  rec_cmd->add_option("--user,-u", rec_args.user, "User label")->required();
  rec_cmd->add_option("--algorithm,-a", rec_args.algorithm, "UO, UOT or UTO")
      ->capture_default_str();
  rec_cmd->add_option("--length,-L", rec_args.length, "List length")
      ->capture_default_str();
  rec_cmd->add_flag("--purify", rec_args.purify_first,
                    "Purify a record file before building the graph");

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Run a multi-realization experiment and write CSV reports");
  eval_cmd->add_option("config", eval_args.config, "key=value config file")
      ->required();
  std::vector<std::pair<std::string, std::string>> eval_flags = {
      {"--dataset", "dataset"},       {"--algorithms", "algorithms"},
      {"--ratio", "ratio"},           {"--realizations", "realizations"},
      {"--seed", "seed"},             {"--lengths", "lengths"},
      {"--threshold", "threshold"},   {"--output", "output"},
      {"--jobs", "jobs"},             {"--dataset-metrics", "dataset_metrics"},
  };
  std::vector<std::string> eval_values(eval_flags.size());
  std::vector<CLI::Option*> eval_options;
  for (std::size_t i = 0; i < eval_flags.size(); ++i) {
    eval_options.push_back(eval_cmd->add_option(
        eval_flags[i].first, eval_values[i],
        "Overrides config key '" + eval_flags[i].second + "'"));
  }

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand(
      "generate", "Write a synthetic dataset with planted communities");
  gen_cmd->add_option("output", gen_args.output, "Records file")->required();
  gen_cmd->add_option("--users", gen_args.planted.users)->capture_default_str();
  gen_cmd->add_option("--objects", gen_args.planted.objects)->capture_default_str();
  gen_cmd->add_option("--tags", gen_args.planted.tags)->capture_default_str();
  gen_cmd->add_option("--communities", gen_args.planted.communities)
      ->capture_default_str();
  gen_cmd->add_option("--mean-degree", gen_args.planted.mean_objects_per_user)
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.planted.seed)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (*purify_cmd) return cmd_purify(purify_args, out, err);
    if (*split_cmd) return cmd_split(split_args, out, err);
    if (*stats_cmd) return cmd_stats(stats_args, out, err);
    if (*rec_cmd) return cmd_recommend(rec_args, out, err);
    if (*eval_cmd) {
      for (std::size_t i = 0; i < eval_flags.size(); ++i) {
        if (eval_options[i]->count() > 0) {
          eval_args.overrides.emplace_back(eval_flags[i].second, eval_values[i]);
        }
      }
      return cmd_evaluate(eval_args, out, err);
    }
    if (*gen_cmd) return cmd_generate(gen_args, out, err);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const Error& e) {
    // Parse, lookup, graph, protocol and empty-data failures.
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace tagrec::cli
