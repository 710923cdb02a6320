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

// Multi-realization evaluation: split, build, score, measure, average.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagrec/diffusion.hpp"
#include "tagrec/errors.hpp"
#include "tagrec/ingest.hpp"
#include "tagrec/metrics.hpp"

namespace tagrec {

inline constexpr std::string_view kVersion = "1.0.0";

struct ExperimentConfig {
  std::filesystem::path dataset;
  std::vector<Algorithm> algorithms{std::begin(kAllAlgorithms),
                                    std::end(kAllAlgorithms)};
  double ratio = 0.9;
  std::size_t realizations = 50;
  std::uint64_t seed = 1;
  std::vector<std::size_t> lengths{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::size_t threshold = 10;
  std::filesystem::path output = "report";
  /// Worker threads; 0 picks the runtime default. Never changes results.
  int jobs = 0;
  /// Overlap, entropy and degree metrics on realization 0's training set
  /// instead of the full purified dataset.
  bool dataset_metrics_on_training = false;

  /// Throws ArgumentError on an invalid field.
  void validate() const;
};

/// Sets one `key=value` setting. Keys: dataset, algorithms, ratio,
/// realizations, seed, lengths, threshold, output, jobs, dataset_metrics
/// (full|train). Throws ArgumentError for an unknown key or bad value.
void apply_setting(ExperimentConfig& cfg, std::string_view key,
                   std::string_view value);

/// Reads flat `key=value` lines ('#' comments allowed). Relative dataset and
/// output paths are resolved against `base_dir`.
ExperimentConfig parse_config(std::istream& in,
                              const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Settings that determine results, as ordered key/value pairs (no jobs, no
/// output directory).
std::vector<std::pair<std::string, std::string>> describe(
    const ExperimentConfig& cfg);

class RealizationError : public Error {
 public:
  using Error::Error;
};

class ExperimentError : public Error {
 public:
  using Error::Error;
};

struct AlgorithmRealization {
  Algorithm algorithm = Algorithm::kUserObject;
  std::vector<RankingOutcome> outcomes;  // user order, then test order
  std::optional<double> rs;
  std::optional<double> rs_low;   // k_o <= threshold
  std::optional<double> rs_high;  // k_o > threshold
  MetricCurve rs_by_degree;
  /// Parallel to ExperimentConfig::lengths; empty when undefined.
  std::vector<std::optional<double>> interd;
  std::vector<std::optional<double>> innerd;
  std::vector<std::size_t> diversity_users;
  std::vector<std::size_t> diversity_excluded;
  /// Users the algorithm cannot score (UTO users without tags).
  std::size_t unscored_users = 0;
};

struct RealizationResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  /// Test entries whose user or object is absent from the training graph.
  std::size_t skipped_test_entries = 0;
  std::vector<AlgorithmRealization> algorithms;  // config order
};

/// One realization on an already purified dataset, seeded by
/// child_seed(cfg.seed, index). Throws RealizationError if the training
/// half is empty.
RealizationResult run_realization(const Dataset& purified,
                                  const ExperimentConfig& cfg,
                                  std::size_t index);

/// Mean and sample standard deviation over the realizations where a value
/// is defined (stddev is 0 for a single value).
struct Aggregate {
  std::optional<double> mean;
  std::optional<double> stddev;
  std::size_t realizations = 0;
};

Aggregate aggregate(std::span<const std::optional<double>> values);

struct AlgorithmReport {
  Algorithm algorithm = Algorithm::kUserObject;
  Aggregate rs;
  Aggregate rs_low;
  Aggregate rs_high;
  /// y = mean over realizations of each realization's mean rs at k_o;
  /// counts = outcomes pooled over realizations.
  MetricCurve rs_by_degree;
  std::vector<Aggregate> interd;  // parallel to lengths
  std::vector<Aggregate> innerd;
  std::vector<std::size_t> diversity_users;     // summed over realizations
  std::vector<std::size_t> diversity_excluded;  // summed over realizations
  std::size_t unscored_users = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t input_assignments = 0;
  DatasetStats stats;  // purified dataset
  std::vector<std::string> filter_log;
  std::vector<AlgorithmReport> algorithms;
  MetricCurve overlap_tags;
  MetricCurve overlap_objects;
  MetricCurve entropy_users;
  MetricCurve entropy_objects;
  std::vector<std::pair<DegreeKind, DegreeDistribution>> degree_distributions;
  std::vector<RealizationResult> realizations;  // successful ones, by index
  std::vector<std::pair<std::size_t, std::string>> failed_realizations;
  std::size_t skipped_test_entries = 0;  // summed over realizations
};

/// Loads and purifies cfg.dataset, then runs the experiment. Throws
/// ExperimentError if purification leaves nothing.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Runs cfg.realizations realizations on `purified` and aggregates them.
/// Throws ExperimentError if every realization fails.
ExperimentReport run_experiment(const Dataset& purified,
                                const ExperimentConfig& cfg);

/// Writes stats.csv, accuracy.csv, rs_vs_degree.csv, interd_vs_L.csv,
/// innerd_vs_L.csv, or_vs_g.csv, entropy_vs_degree.csv, degree_dist.csv and
/// manifest.txt into `dir`. Returns the written paths. Throws IoError.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& dir);

/// Tab-separated accuracy table for terminals.
void print_accuracy(const ExperimentReport& report, std::ostream& out);

}  // namespace tagrec
