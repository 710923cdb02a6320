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

#include "tagrec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "parallel.hpp"
#include "tagrec/graph.hpp"
#include "tagrec/random.hpp"
#include "text.hpp"

namespace tagrec {
namespace {

template <typename T>
T parse_or_throw(std::string_view key, std::string_view value) {
  const auto parsed = text::parse_number<T>(text::trim(value));
  if (!parsed) {
    throw ArgumentError("invalid value '" + std::string(value) + "' for " +
                        std::string(key));
  }
  return *parsed;
}

std::string join_lengths(const std::vector<std::size_t>& lengths) {
  std::string s;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(lengths[i]);
  }
  return s;
}

std::string join_algorithms(const std::vector<Algorithm>& algorithms) {
  std::string s;
  for (std::size_t i = 0; i < algorithms.size(); ++i) {
    if (i > 0) s += ',';
    s += to_string(algorithms[i]);
  }
  return s;
}

std::optional<double> defined_or_empty(const auto& fn) {
  try {
    return fn();
  } catch (const UndefinedValueError&) {
    return std::nullopt;
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw ArgumentError("no algorithms selected");
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ArgumentError("ratio must be in (0, 1], got " +
                        text::format_double(ratio));
  }
  if (realizations < 1) throw ArgumentError("realizations must be >= 1");
  for (auto L : lengths) {
    if (L < 2) {
      throw ArgumentError("list lengths must be >= 2, got " + std::to_string(L));
    }
  }
  if (threshold < 1) throw ArgumentError("threshold must be >= 1");
}

void apply_setting(ExperimentConfig& cfg, std::string_view key,
                   std::string_view value) {
  value = text::trim(value);
  if (key == "dataset") {
    cfg.dataset = std::string(value);
  } else if (key == "algorithms") {
    cfg.algorithms.clear();
    for (auto name : text::split(value, ',')) {
      const auto algo = parse_algorithm(text::trim(name));
      if (!algo) {
        throw ArgumentError("unknown algorithm '" + std::string(name) + "'");
      }
      if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), *algo) ==
          cfg.algorithms.end()) {
        cfg.algorithms.push_back(*algo);
      }
    }
  } else if (key == "ratio") {
    cfg.ratio = parse_or_throw<double>(key, value);
  } else if (key == "realizations") {
    cfg.realizations = parse_or_throw<std::size_t>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_or_throw<std::uint64_t>(key, value);
  } else if (key == "lengths") {
    cfg.lengths.clear();
    if (!value.empty()) {
      for (auto item : text::split(value, ',')) {
        cfg.lengths.push_back(parse_or_throw<std::size_t>(key, item));
      }
    }
    std::sort(cfg.lengths.begin(), cfg.lengths.end());
    cfg.lengths.erase(std::unique(cfg.lengths.begin(), cfg.lengths.end()),
                      cfg.lengths.end());
  } else if (key == "threshold") {
    cfg.threshold = parse_or_throw<std::size_t>(key, value);
  } else if (key == "output") {
    cfg.output = std::string(value);
  } else if (key == "jobs") {
    cfg.jobs = parse_or_throw<int>(key, value);
  } else if (key == "dataset_metrics") {
    if (value == "full") {
      cfg.dataset_metrics_on_training = false;
    } else if (value == "train") {
      cfg.dataset_metrics_on_training = true;
    } else {
      throw ArgumentError("dataset_metrics must be 'full' or 'train'");
    }
  } else {
    throw ArgumentError("unknown setting '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in,
                              const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw ArgumentError("config line " + std::to_string(line_no) +
                          ": expected key=value");
    }
    const auto key = text::trim(trimmed.substr(0, eq));
    apply_setting(cfg, key, trimmed.substr(eq + 1));
    if (key == "dataset" && cfg.dataset.is_relative() && !cfg.dataset.empty()) {
      cfg.dataset = base_dir / cfg.dataset;
    }
    if (key == "output" && cfg.output.is_relative()) {
      cfg.output = base_dir / cfg.output;
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

std::vector<std::pair<std::string, std::string>> describe(
    const ExperimentConfig& cfg) {
  return {
      {"dataset", cfg.dataset.string()},
      {"algorithms", join_algorithms(cfg.algorithms)},
      {"ratio", text::format_double(cfg.ratio)},
      {"realizations", std::to_string(cfg.realizations)},
      {"seed", std::to_string(cfg.seed)},
      {"lengths", join_lengths(cfg.lengths)},
      {"threshold", std::to_string(cfg.threshold)},
      {"dataset_metrics", cfg.dataset_metrics_on_training ? "train" : "full"},
  };
}

RealizationResult run_realization(const Dataset& purified,
                                  const ExperimentConfig& cfg,
                                  std::size_t index) {
  cfg.validate();
  RealizationResult result;
  result.index = index;
  result.seed = child_seed(cfg.seed, index);

  const SplitPair parts = split(purified, cfg.ratio, result.seed);
  result.train_size = parts.train.size();
  result.test_size = parts.test.size();
  if (parts.train.empty()) {
    throw RealizationError("realization " + std::to_string(index) +
                           ": empty training set");
  }
  const TripartiteGraph g = build_graph(parts.train);

  // Test entries grouped by user; unseen endpoints are skipped.
  std::vector<std::vector<ObjectId>> tests(g.users());
  for (const auto& a : parts.test.assignments) {
    const auto u = g.find_user(a.user);
    const auto o = g.find_object(a.object);
    if (!u || !o || g.has_collected(*u, *o)) {
      ++result.skipped_test_entries;
      continue;
    }
    tests[index_of(*u)].push_back(*o);
  }

  const std::size_t max_length =
      cfg.lengths.empty() ? 0 : *std::max_element(cfg.lengths.begin(),
                                                  cfg.lengths.end());
  const auto n = static_cast<std::int64_t>(g.users());

  for (const auto algorithm : cfg.algorithms) {
    std::vector<std::vector<RankingOutcome>> outcomes(g.users());
    std::vector<RecommendationList> lists(g.users());
    std::vector<char> unscored(g.users(), 0);

#pragma omp parallel num_threads(detail::resolve_jobs(cfg.jobs))
    {
      DiffusionWorkspace ws(g);
      ScoreVector sv{UserId{0}, algorithm, std::vector<double>(g.objects()), 0};
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t i = 0; i < n; ++i) {
        const UserId u{static_cast<std::uint32_t>(i)};
        if (algorithm == Algorithm::kUserTagObject && g.user_tags(u).empty()) {
          unscored[i] = 1;
          lists[i].target_user = u;
          continue;
        }
        sv.target_user = u;
        sv.leaked_objects = diffuse_into(g, u, algorithm, ws, sv.scores);
        for (const auto o : tests[i]) {
          outcomes[i].push_back(ranking_score(g, sv, o));
        }
        if (max_length > 0) lists[i] = recommend(g, sv, max_length, ws);
      }
    }

    AlgorithmRealization ar;
    ar.algorithm = algorithm;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      ar.unscored_users += unscored[i];
      ar.outcomes.insert(ar.outcomes.end(), outcomes[i].begin(),
                         outcomes[i].end());
    }
    if (!ar.outcomes.empty()) {
      ar.rs = mean_rs(ar.outcomes);
      const auto buckets = rs_by_object_degree(ar.outcomes, cfg.threshold);
      ar.rs_low = buckets.low;
      ar.rs_high = buckets.high;
      ar.rs_by_degree = buckets.curve;
    }
    for (const auto L : cfg.lengths) {
      std::size_t eligible = 0;
      for (const auto& list : lists) eligible += list.objects.size() >= L;
      ar.diversity_users.push_back(eligible);
      ar.diversity_excluded.push_back(lists.size() - eligible);
      ar.interd.push_back(
          defined_or_empty([&] { return inter_diversity(lists, L).value; }));
      ar.innerd.push_back(defined_or_empty(
          [&] { return inner_diversity(g, lists, L, cfg.jobs).value; }));
    }
    result.algorithms.push_back(std::move(ar));
  }
  return result;
}

Aggregate aggregate(std::span<const std::optional<double>> values) {
  Aggregate a;
  double sum = 0.0;
  for (const auto& v : values) {
    if (!v) continue;
    sum += *v;
    ++a.realizations;
  }
  if (a.realizations == 0) return a;
  const double mean = sum / static_cast<double>(a.realizations);
  double squares = 0.0;
  for (const auto& v : values) {
    if (v) squares += (*v - mean) * (*v - mean);
  }
  a.mean = mean;
  a.stddev = a.realizations > 1
                 ? std::sqrt(squares / static_cast<double>(a.realizations - 1))
                 : 0.0;
  return a;
}

namespace {

AlgorithmReport aggregate_algorithm(const std::vector<RealizationResult>& runs,
                                    std::size_t slot,
                                    const ExperimentConfig& cfg) {
  AlgorithmReport rep;
  rep.algorithm = cfg.algorithms[slot];
  std::vector<std::optional<double>> rs, low, high;
  std::map<double, std::pair<double, std::size_t>> curve_sum;  // per k_o
  std::map<double, std::size_t> curve_samples;
  for (const auto& run : runs) {
    const auto& ar = run.algorithms[slot];
    rs.push_back(ar.rs);
    low.push_back(ar.rs_low);
    high.push_back(ar.rs_high);
    rep.unscored_users += ar.unscored_users;
    for (std::size_t i = 0; i < ar.rs_by_degree.size(); ++i) {
      auto& [sum, realizations] = curve_sum[ar.rs_by_degree.x[i]];
      sum += ar.rs_by_degree.y[i];
      ++realizations;
      curve_samples[ar.rs_by_degree.x[i]] += ar.rs_by_degree.counts[i];
    }
  }
  rep.rs = aggregate(rs);
  rep.rs_low = aggregate(low);
  rep.rs_high = aggregate(high);
  for (const auto& [k, acc] : curve_sum) {
    rep.rs_by_degree.x.push_back(k);
    rep.rs_by_degree.y.push_back(acc.first / static_cast<double>(acc.second));
    rep.rs_by_degree.counts.push_back(curve_samples[k]);
  }

  for (std::size_t l = 0; l < cfg.lengths.size(); ++l) {
    std::vector<std::optional<double>> inter, inner;
    std::size_t users = 0, excluded = 0;
    for (const auto& run : runs) {
      const auto& ar = run.algorithms[slot];
      inter.push_back(ar.interd[l]);
      inner.push_back(ar.innerd[l]);
      users += ar.diversity_users[l];
      excluded += ar.diversity_excluded[l];
    }
    rep.interd.push_back(aggregate(inter));
    rep.innerd.push_back(aggregate(inner));
    rep.diversity_users.push_back(users);
    rep.diversity_excluded.push_back(excluded);
  }
  return rep;
}

}  // namespace

ExperimentReport run_experiment(const Dataset& purified,
                                const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  report.input_assignments = purified.size();
  report.stats = summarize(purified);
  report.filter_log = purified.provenance.filter_log;

  for (std::size_t r = 0; r < cfg.realizations; ++r) {
    try {
      report.realizations.push_back(run_realization(purified, cfg, r));
      report.skipped_test_entries +=
          report.realizations.back().skipped_test_entries;
    } catch (const RealizationError& e) {
      report.failed_realizations.emplace_back(r, e.what());
    } catch (const GraphError& e) {
      report.failed_realizations.emplace_back(r, e.what());
    }
  }
  if (report.realizations.empty()) {
    throw ExperimentError("all " + std::to_string(cfg.realizations) +
                          " realization(s) failed");
  }
  for (std::size_t slot = 0; slot < cfg.algorithms.size(); ++slot) {
    report.algorithms.push_back(
        aggregate_algorithm(report.realizations, slot, cfg));
  }

  const Dataset* metrics_data = &purified;
  SplitPair first_split;
  if (cfg.dataset_metrics_on_training) {
    first_split = split(purified, cfg.ratio, child_seed(cfg.seed, 0));
    metrics_data = &first_split.train;
  }
  if (!metrics_data->empty()) {
    const TripartiteGraph g = build_graph(*metrics_data);
    report.overlap_tags = overlap_ratio_tags(*metrics_data, cfg.jobs);
    report.overlap_objects = overlap_ratio_objects(*metrics_data, cfg.jobs);
    report.entropy_users = entropy_by_degree(g, EntropyKind::kUser);
    report.entropy_objects = entropy_by_degree(g, EntropyKind::kObject);
    for (auto kind : {DegreeKind::kUser, DegreeKind::kObject,
                      DegreeKind::kObjectTag, DegreeKind::kTagObject}) {
      report.degree_distributions.emplace_back(kind,
                                               degree_distribution(g, kind));
    }
  }
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.dataset.empty()) throw ArgumentError("no dataset path configured");
  const Dataset raw = load_dataset(cfg.dataset);
  const Dataset purified = purify(raw);
  if (purified.empty()) {
    throw ExperimentError("dataset '" + cfg.dataset.string() +
                          "' is empty after purification");
  }
  ExperimentReport report = run_experiment(purified, cfg);
  report.input_assignments = raw.size();
  return report;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body,
                std::vector<std::filesystem::path>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << body;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
  written.push_back(path);
}

using text::format_double;
using text::format_optional;

}  // namespace

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir.string() +
                  "': " + ec.message());
  }
  std::vector<std::filesystem::path> written;
  const auto& cfg = report.config;

  {
    const auto& s = report.stats;
    std::ostringstream out;
    out << "n,m,r,k_mean,k_object_tags_mean,k_user_tags_mean\n"
        << s.users << ',' << s.objects << ',' << s.tags << ','
        << format_double(s.mean_user_degree) << ','
        << format_double(s.mean_object_tags) << ','
        << format_double(s.mean_user_tags) << '\n';
    write_file(dir / "stats.csv", out.str(), written);
  }
  {
    std::ostringstream out;
    out << "algorithm,rs,rs_low,rs_high,rs_std,rs_low_std,rs_high_std,"
           "threshold,realizations,skipped_test_entries\n";
    for (const auto& a : report.algorithms) {
      out << to_string(a.algorithm) << ',' << format_optional(a.rs.mean) << ','
          << format_optional(a.rs_low.mean) << ','
          << format_optional(a.rs_high.mean) << ','
          << format_optional(a.rs.stddev) << ','
          << format_optional(a.rs_low.stddev) << ','
          << format_optional(a.rs_high.stddev) << ',' << cfg.threshold << ','
          << report.realizations.size() << ',' << report.skipped_test_entries
          << '\n';
    }
    write_file(dir / "accuracy.csv", out.str(), written);
  }
  {
    std::ostringstream out;
    out << "algorithm,k_o,rs,samples\n";
    for (const auto& a : report.algorithms) {
      const auto& c = a.rs_by_degree;
      for (std::size_t i = 0; i < c.size(); ++i) {
        out << to_string(a.algorithm) << ',' << format_double(c.x[i]) << ','
            << format_double(c.y[i]) << ',' << c.counts[i] << '\n';
      }
    }
    write_file(dir / "rs_vs_degree.csv", out.str(), written);
  }
  auto diversity_csv = [&](std::string_view name, bool inter) {
    std::ostringstream out;
    out << "algorithm,L," << name << ',' << name << "_std,users,excluded_users\n";
    for (const auto& a : report.algorithms) {
      for (std::size_t l = 0; l < cfg.lengths.size(); ++l) {
        const auto& agg = inter ? a.interd[l] : a.innerd[l];
        out << to_string(a.algorithm) << ',' << cfg.lengths[l] << ','
            << format_optional(agg.mean) << ',' << format_optional(agg.stddev)
            << ',' << a.diversity_users[l] << ',' << a.diversity_excluded[l]
            << '\n';
      }
    }
    return out.str();
  };
  write_file(dir / "interd_vs_L.csv", diversity_csv("interd", true), written);
  write_file(dir / "innerd_vs_L.csv", diversity_csv("innerd", false), written);
  {
    std::ostringstream out;
    out << "variant,g,or,pairs\n";
    auto rows = [&](std::string_view variant, const MetricCurve& c) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        out << variant << ',' << format_double(c.x[i]) << ','
            << format_double(c.y[i]) << ',' << c.counts[i] << '\n';
      }
    };
    rows("tags", report.overlap_tags);
    rows("objects", report.overlap_objects);
    write_file(dir / "or_vs_g.csv", out.str(), written);
  }
  {
    std::ostringstream out;
    out << "kind,k,entropy,count\n";
    auto rows = [&](std::string_view kind, const MetricCurve& c) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        out << kind << ',' << format_double(c.x[i]) << ','
            << format_double(c.y[i]) << ',' << c.counts[i] << '\n';
      }
    };
    rows("user", report.entropy_users);
    rows("object", report.entropy_objects);
    write_file(dir / "entropy_vs_degree.csv", out.str(), written);
  }
  {
    std::ostringstream out;
    out << "kind,k,probability,ccdf,count\n";
    for (const auto& [kind, dist] : report.degree_distributions) {
      const auto& p = dist.probability;
      for (std::size_t i = 0; i < p.size(); ++i) {
        out << to_string(kind) << ',' << format_double(p.x[i]) << ','
            << format_double(p.y[i]) << ',' << format_double(dist.ccdf[i])
            << ',' << p.counts[i] << '\n';
      }
    }
    write_file(dir / "degree_dist.csv", out.str(), written);
  }
  {
    std::ostringstream out;
    out << "software=tagrec " << kVersion << '\n';
    for (const auto& [key, value] : describe(cfg)) {
      out << key << '=' << value << '\n';
    }
    out << "input_assignments=" << report.input_assignments << '\n';
    for (std::size_t i = 0; i < report.filter_log.size(); ++i) {
      out << "filter_log." << i << '=' << report.filter_log[i] << '\n';
    }
    out << "realizations.completed=" << report.realizations.size() << '\n';
    out << "realizations.failed=" << report.failed_realizations.size() << '\n';
    for (const auto& [index, why] : report.failed_realizations) {
      out << "failed." << index << '=' << why << '\n';
    }
    for (const auto& run : report.realizations) {
      const std::string prefix = "realization." + std::to_string(run.index) + '.';
      out << prefix << "seed=" << run.seed << '\n'
          << prefix << "train=" << run.train_size << '\n'
          << prefix << "test=" << run.test_size << '\n'
          << prefix << "skipped_test_entries=" << run.skipped_test_entries
          << '\n';
      for (const auto& ar : run.algorithms) {
        const std::string p = prefix + std::string(to_string(ar.algorithm)) + '.';
        out << p << "rs=" << format_optional(ar.rs) << '\n'
            << p << "rs_low=" << format_optional(ar.rs_low) << '\n'
            << p << "rs_high=" << format_optional(ar.rs_high) << '\n'
            << p << "outcomes=" << ar.outcomes.size() << '\n';
        for (std::size_t l = 0; l < cfg.lengths.size(); ++l) {
          out << p << "interd.L" << cfg.lengths[l] << '='
              << format_optional(ar.interd[l]) << '\n'
              << p << "innerd.L" << cfg.lengths[l] << '='
              << format_optional(ar.innerd[l]) << '\n';
        }
      }
    }
    write_file(dir / "manifest.txt", out.str(), written);
  }
  return written;
}

void print_accuracy(const ExperimentReport& report, std::ostream& out) {
  out << "algorithm\trs\trs_low\trs_high\tthreshold\n";
  for (const auto& a : report.algorithms) {
    out << to_string(a.algorithm) << '\t' << format_optional(a.rs.mean) << '\t'
        << format_optional(a.rs_low.mean) << '\t'
        << format_optional(a.rs_high.mean) << '\t' << report.config.threshold
        << '\n';
  }
}

}  // namespace tagrec
