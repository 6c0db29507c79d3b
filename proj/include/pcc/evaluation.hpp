#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pcc/classifiers.hpp"
#include "pcc/corpus.hpp"
#include "pcc/features.hpp"
#include "pcc/parallel.hpp"
#include "pcc/preprocess.hpp"

namespace pcc {

/// (case, line, code): identifies a coded line independent of variant.
struct LineCodeKey {
  LineKey line;
  Code code = Code::NotCoded;

  auto operator<=>(const LineCodeKey&) const = default;
};

/// A coded line with both preprocessed variants cached.
struct PreparedLine {
  LineCodeKey key;
  Instance single;
  Instance with_context;

  const Instance& variant(Variant v) const { return v == Variant::Single ? single : with_context; }
};

/// Preprocessed instance pool; buckets keep the canonical pool order.
class PreparedPool {
 public:
  const std::vector<PreparedLine>& bucket(Code c) const { return buckets_[code_index(c)]; }
  const PreprocessConfig& config() const { return config_; }

  /// Lines of `c` that are usable and have at least `min_words` words
  /// (counted per config().count_mode), in canonical order.
  std::vector<const PreparedLine*> eligible(Code c, std::size_t min_words) const;

  friend PreparedPool prepare_pool(const InstancePool&, const PreprocessConfig&, Exec);

 private:
  std::array<std::vector<PreparedLine>, kCodeCount> buckets_;
  PreprocessConfig config_;
};

/// Preprocesses every coded line (both variants). Lines are independent, so
/// the parallel path matches the serial one exactly.
PreparedPool prepare_pool(const InstancePool& pool, const PreprocessConfig& config,
                          Exec exec = Exec::Parallel);

/// Draws exactly n_per_class eligible lines per class without replacement.
/// Lines in `exclude` are never drawn. Output is grouped by class in the
/// order given, each group in canonical order. Throws DataError naming the
/// first class that cannot supply enough lines.
std::vector<PreparedLine> balanced_sample(const PreparedPool& pool, const std::vector<Code>& classes,
                                          std::size_t n_per_class, std::size_t min_words,
                                          std::uint64_t seed,
                                          const std::set<LineCodeKey>* exclude = nullptr);

std::vector<Instance> instances_of(const std::vector<PreparedLine>& lines, Variant variant);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> folds;  ///< dataset positions, ascending
  std::vector<std::size_t> fold_of;             ///< position -> fold
};

/// Per class (declaration order), shuffles positions with a class-specific
/// stream and deals them round-robin, continuing where the previous class
/// stopped. Throws std::invalid_argument if k < 2 or k > labels.size().
FoldPlan stratified_folds(const std::vector<Code>& labels, std::size_t k, std::uint64_t seed);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct Metrics {
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassScores> per_class;
};

/// Square confusion matrix [true][predicted]. 0/0 counts as 0. Throws
/// std::invalid_argument for an empty, non-square or all-zero matrix.
Metrics metrics(const std::vector<std::vector<long>>& confusion);

struct PredictionRecord {
  std::string id;
  Code truth = Code::NotCoded;
  Code predicted = Code::NotCoded;
  std::size_t fold = 0;
};

struct EvalReport {
  std::vector<Code> classes;
  std::vector<std::vector<long>> confusion;
  Metrics scores;
  std::vector<PredictionRecord> records;  ///< dataset order
  std::vector<std::pair<std::string, std::string>> echo;

  double accuracy() const { return scores.accuracy; }
};

struct FoldFeatures {
  Vocabulary vocabulary;
  FeatureSet features;
};

/// Vocabulary and feature selection from every fold except `fold`.
FoldFeatures fold_features(const std::vector<Instance>& instances, const FoldPlan& plan,
                           std::size_t fold, const FeatureConfig& config, Exec exec = Exec::Parallel);

/// Runs k-fold cross-validation: per fold, features and model come from the
/// training folds only and predictions are collected for the held-out fold.
/// Folds run in parallel under Exec::Parallel with identical results.
EvalReport cross_validate(const Learner& learner, const std::vector<Instance>& instances,
                          const FoldPlan& plan, const FeatureConfig& features, std::uint64_t seed,
                          Exec exec = Exec::Parallel);

/// As above with stratified_folds(labels, k, seed).
EvalReport cross_validate(const Learner& learner, const std::vector<Instance>& instances,
                          std::size_t k, const FeatureConfig& features, std::uint64_t seed,
                          Exec exec = Exec::Parallel);

}  // namespace pcc
