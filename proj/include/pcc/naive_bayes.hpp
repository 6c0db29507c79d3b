#pragma once

#include <vector>

#include "pcc/dataset.hpp"

namespace pcc {

struct NaiveBayesParams {
  double alpha = 1.0;  ///< additive smoothing
};

/// Multinomial event model over non-negative feature weights; fractional
/// "counts" such as tf-idf weights are accepted as-is.
class NaiveBayesModel {
 public:
  static NaiveBayesModel train(const Dataset& data, const NaiveBayesParams& params);

  Code predict(const SparseVector& x) const;

  /// log prior + sum_f x_f * log P(f | class), per class slot.
  std::vector<double> log_joint(const SparseVector& x) const;
  /// Normalized class posterior, per class slot.
  std::vector<double> posterior(const SparseVector& x) const;

  const std::vector<Code>& classes() const { return classes_; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& log_prior() const { return log_prior_; }
  const std::vector<std::vector<double>>& log_likelihood() const { return log_likelihood_; }

 private:
  std::vector<Code> classes_;
  std::size_t dim_ = 0;
  std::vector<double> log_prior_;
  std::vector<std::vector<double>> log_likelihood_;  // [class][feature]
};

}  // namespace pcc
