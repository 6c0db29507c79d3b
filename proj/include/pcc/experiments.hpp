#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcc/evaluation.hpp"
#include "pcc/report_io.hpp"

namespace pcc {

/// A length group: lines with at least `min_words` words.
struct GroupSpec {
  std::string name;
  std::size_t min_words = 1;
};

struct Exp1Config {
  std::vector<GroupSpec> groups = {{"A", 1}, {"B", 3}, {"C", 5}};
  std::vector<Code> classes = experiment_classes();
  std::size_t n_per_class = 190;
  std::size_t resamples = 4;
  std::size_t k = 10;
  std::uint64_t seed = 42;

  /// Throws ConfigError.
  void validate() const;
  Echo echo() const;
  const GroupSpec& group(const std::string& name) const;
};

struct Exp2Config {
  Exp1Config base;
  std::string source_group = "C";
  std::vector<std::string> target_groups = {"A", "B"};

  void validate() const;
  Echo echo() const;
};

struct Exp3Config {
  std::vector<Code> classes = experiment_codes();
  std::size_t min_words = 5;
  std::size_t n_per_class = 190;
  std::size_t resamples = 4;
  std::size_t k = 10;
  std::uint64_t seed = 42;

  void validate() const;
  Echo echo() const;
};

/// Shared inputs of every experiment run.
struct ExperimentContext {
  const PreparedPool* pool = nullptr;
  std::vector<Learner> learners;
  FeatureConfig features;
  Echo echo;  ///< extra knobs to record (corpus, preprocessing, classifier params)
  Exec exec = Exec::Parallel;
  /// Called once per finished cell. May be called from several threads.
  std::function<void(const std::string&)> log;
};

struct Cell {
  std::string condition;  ///< group name, or variant name for exp3
  std::string algorithm;
  std::size_t resample = 0;
  EvalReport report;
  /// Exp2 only: tracked instances and how many were again correct.
  std::size_t tracked = 0;
  std::size_t tracked_correct = 0;

  std::string name() const;
  std::optional<double> tracked_rate() const;
};

struct Aggregate {
  std::string condition;
  std::string algorithm;
  double mean = 0.0, min = 0.0, max = 0.0;
  double macro_f1_mean = 0.0;
  std::optional<double> tracked_mean;  ///< over cells with a tracked rate
};

struct ExperimentReport {
  std::string name;  ///< exp1, exp2, exp3
  std::vector<Cell> cells;  ///< condition-major, then algorithm, then resample
  Echo echo;
  std::vector<std::string> notes;

  std::vector<Aggregate> aggregates() const;
  Aggregate aggregate(const std::string& condition, const std::string& algorithm) const;
};

ExperimentReport run_exp1(const ExperimentContext& ctx, const Exp1Config& config);

/// Re-runs the source-group cells of exp1 with the same seeds, then rebuilds
/// each target group's dataset around the correctly classified instances.
ExperimentReport run_exp2(const ExperimentContext& ctx, const Exp2Config& config);

/// Same lines and fold plans for both variants.
ExperimentReport run_exp3(const ExperimentContext& ctx, const Exp3Config& config);

/// with_context minus single mean accuracy for one algorithm.
double context_delta(const ExperimentReport& exp3, const std::string& algorithm);

/// dir/<name>/summary.md, grid.csv and cells/<cell>/...
void write_experiment(const std::filesystem::path& dir, const ExperimentReport& report);

}  // namespace pcc
