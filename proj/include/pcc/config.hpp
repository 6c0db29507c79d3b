#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pcc/classifiers.hpp"
#include "pcc/corpus.hpp"
#include "pcc/experiments.hpp"
#include "pcc/features.hpp"
#include "pcc/preprocess.hpp"
#include "pcc/report_io.hpp"
#include "pcc/synth.hpp"

namespace pcc {

/// Everything a CLI run can be configured with.
///
/// Text form is one `key = value` per line; `#` starts a comment line.
/// Keys carry their section as a prefix (`exp1.n_per_class`). Unknown keys
/// and malformed values are rejected with ConfigError.
struct RunConfig {
  std::uint64_t seed = 42;

  std::string data_dir = "data";
  std::string out_dir = "out";
  std::string transcripts = "transcripts.tsv";
  std::string annotations = "annotations.tsv";
  std::string coders = "coders.tsv";

  Scope scope = Scope::PhysicianOnly;
  bool majority_filter = false;
  ContextMode context_mode = ContextMode::SameSpeaker;

  PreprocessConfig preprocess;
  FeatureConfig features;
  TrainParams train;
  std::vector<Algorithm> algorithms = {Algorithm::NaiveBayes, Algorithm::RandomForest,
                                       Algorithm::Svm};
  std::size_t eval_k = 10;

  Exp1Config exp1;
  Exp2Config exp2;  ///< exp2.base mirrors exp1
  Exp3Config exp3;
  GenConfig gen = GenConfig::defaults();

  /// Applies one setting. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  /// Reads settings on top of the current values.
  void read(std::istream& in, const std::string& source);
  void read_file(const std::filesystem::path& path);

  /// Pushes the master seed and exp1 settings into the nested configs.
  /// Call after the last set().
  void finalize();

  /// Every knob in settable form; read(write()) reproduces the config.
  Echo entries() const;
  void write(std::ostream& out) const;
};

}  // namespace pcc
