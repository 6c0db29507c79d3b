#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pcc/dataset.hpp"
#include "pcc/linear_svm.hpp"
#include "pcc/naive_bayes.hpp"
#include "pcc/parallel.hpp"
#include "pcc/random_forest.hpp"

namespace pcc {

enum class Algorithm { NaiveBayes, RandomForest, Svm };

/// "NB", "RF", "SVM"
std::string_view algorithm_name(Algorithm a);
/// Case-insensitive nb / rf / svm.
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct TrainParams {
  NaiveBayesParams nb;
  ForestParams rf;
  SvmParams svm;

  std::vector<std::pair<std::string, std::string>> echo() const;
};

struct Model {
  Algorithm algorithm = Algorithm::NaiveBayes;
  TrainParams params;
  std::variant<NaiveBayesModel, ForestModel, SvmModel> impl;

  std::size_t dim() const;
  const std::vector<Code>& classes() const;
};

/// Throws std::invalid_argument for an empty or single-class dataset and
/// for non-finite weights.
Model train(Algorithm algorithm, const Dataset& data, const TrainParams& params,
            Exec exec = Exec::Parallel);

/// Exactly one class; ties go to the earlier class in declaration order.
Code predict(const Model& model, const SparseVector& x);

std::vector<std::pair<std::string, Code>> predict_batch(const Model& model, const Dataset& data);

/// Human-readable model tables. Not a stable format.
void dump_model(std::ostream& out, const Model& model);

/// A trained classifier as seen by the evaluation harness.
using Predictor = std::function<Code(const Example&)>;

/// Something the harness can train per fold. `fit` receives the fold's
/// training set and a seed derived from the run seed and fold index.
struct Learner {
  std::string name;
  std::function<Predictor(const Dataset&, std::uint64_t seed)> fit;
};

Learner make_learner(Algorithm algorithm, const TrainParams& params, Exec exec = Exec::Parallel);

}  // namespace pcc
