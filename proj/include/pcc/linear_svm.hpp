#pragma once

#include <cstdint>
#include <vector>

#include "pcc/dataset.hpp"
#include "pcc/parallel.hpp"

namespace pcc {

struct SvmParams {
  double c = 1.0;
  int max_epochs = 1000;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
};

/// One binary soft-margin classifier for the class pair (positive, negative),
/// positive being the earlier class. decision(x) >= 0 votes positive.
struct PairwiseSvm {
  std::size_t positive = 0;  ///< class slot
  std::size_t negative = 0;  ///< class slot
  std::vector<double> w;
  double bias = 0.0;
  int epochs = 0;
  bool converged = false;
  /// Dual objective 0.5*|w|^2 + 0.5*b^2 - sum(alpha); entry 0 is the start
  /// (alpha = 0), then one entry per epoch.
  std::vector<double> objective;

  double decision(const SparseVector& x) const;
};

/// Trains one pair by dual coordinate descent on the L1-loss (hinge) SVM
/// with the bias folded in as a constant feature. Examples are visited in a
/// fresh seeded permutation each epoch; training stops once the projected
/// gradient spread drops to `tolerance` or after max_epochs.
PairwiseSvm train_pair(const Dataset& data, std::size_t positive, std::size_t negative,
                       const SvmParams& params, std::uint64_t seed);

/// One-vs-one linear SVM with majority voting.
class SvmModel {
 public:
  static SvmModel train(const Dataset& data, const SvmParams& params, Exec exec = Exec::Parallel);

  Code predict(const SparseVector& x) const;
  std::vector<int> votes(const SparseVector& x) const;

  const std::vector<Code>& classes() const { return classes_; }
  std::size_t dim() const { return dim_; }
  const std::vector<PairwiseSvm>& pairs() const { return pairs_; }

 private:
  std::vector<Code> classes_;
  std::size_t dim_ = 0;
  std::vector<PairwiseSvm> pairs_;
};

}  // namespace pcc
