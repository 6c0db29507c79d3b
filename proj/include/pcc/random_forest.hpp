#pragma once

#include <cstdint>
#include <vector>

#include "pcc/dataset.hpp"
#include "pcc/parallel.hpp"

namespace pcc {

struct ForestParams {
  int n_trees = 100;
  int features_per_split = 0;  ///< 0 means ceil(sqrt(F))
  bool bootstrap = true;
  int max_depth = 0;           ///< 0 means unlimited
  int min_leaf = 1;
  std::uint64_t seed = 0;
};

/// Internal nodes have feature >= 0 and route x[feature] <= threshold left.
/// Leaves keep the (bootstrap-weighted) class counts, indexed by class slot.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<long> counts;

  bool is_leaf() const { return feature < 0; }
};

class DecisionTree {
 public:
  /// Grows a CART tree with Gini impurity. `weights[i]` is the multiplicity
  /// of example i (0 leaves it out). At each node candidate features are
  /// drawn without replacement from `rng`; drawing continues past
  /// `features_per_split` until a valid split turns up or features run out.
  /// Among evaluated candidates the best Gini split wins, ties going to the
  /// lower feature index and then the lower threshold.
  static DecisionTree grow(const Dataset& data, const std::vector<long>& weights,
                           std::size_t features_per_split, int max_depth, int min_leaf,
                           std::uint64_t seed);

  /// Leaf class slot for a dense feature vector.
  std::size_t predict_slot(const std::vector<double>& dense) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
};

class ForestModel {
 public:
  /// Trees are independent; tree t draws from derive_seed(seed, {t}), so the
  /// parallel and serial paths build identical forests.
  static ForestModel train(const Dataset& data, const ForestParams& params,
                           Exec exec = Exec::Parallel);

  Code predict(const SparseVector& x) const;
  /// Trees voting for each class slot.
  std::vector<int> votes(const SparseVector& x) const;

  const std::vector<Code>& classes() const { return classes_; }
  std::size_t dim() const { return dim_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

 private:
  std::vector<Code> classes_;
  std::size_t dim_ = 0;
  std::vector<DecisionTree> trees_;
};

}  // namespace pcc
