#include "pcc/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pcc/random.hpp"

namespace pcc {

namespace {

struct Cell {
  double value;
  std::uint32_t example;
};

// Score is sum_squares(left)/n_left + sum_squares(right)/n_right, kept as an
// exact fraction so equal splits compare equal.
struct Split {
  bool found = false;
  long long num = 0;
  long long den = 1;
  int feature = -1;
  double threshold = 0.0;
};

bool better(const Split& cand, const Split& best) {
  if (!best.found) return true;
  const __int128 a = static_cast<__int128>(cand.num) * best.den;
  const __int128 b = static_cast<__int128>(best.num) * cand.den;
  if (a != b) return a > b;
  if (cand.feature != best.feature) return cand.feature < best.feature;
  return cand.threshold < best.threshold;
}

long long sum_squares(const std::vector<long>& counts) {
  long long s = 0;
  for (long c : counts) s += static_cast<long long>(c) * c;
  return s;
}

// Shared state for growing one tree.
class Grower {
 public:
  Grower(const Dataset& data, const std::vector<long>& weights, std::size_t mtry, int max_depth,
         int min_leaf, std::uint64_t seed)
      : data_(data),
        weights_(weights),
        mtry_(mtry),
        max_depth_(max_depth),
        min_leaf_(min_leaf),
        rng_(seed),
        k_(data.classes.size()),
        buckets_(data.dim),
        perm_(data.dim),
        label_slot_(data.size()) {
    std::iota(perm_.begin(), perm_.end(), 0u);
    for (std::size_t i = 0; i < data.size(); ++i) label_slot_[i] = data.class_slot(data.examples[i].label);
  }

  std::vector<TreeNode> run() {
    std::vector<std::uint32_t> root;
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (weights_[i] > 0) root.push_back(static_cast<std::uint32_t>(i));
    }
    build(std::move(root), 0);
    return std::move(nodes_);
  }

 private:
  int build(std::vector<std::uint32_t> members, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    std::vector<long> counts(k_, 0);
    long total = 0;
    for (auto i : members) {
      counts[label_slot_[i]] += weights_[i];
      total += weights_[i];
    }
    const auto nonzero = std::count_if(counts.begin(), counts.end(), [](long c) { return c > 0; });
    const bool stop = nonzero <= 1 || total < 2L * min_leaf_ || (max_depth_ > 0 && depth >= max_depth_);
    Split split;
    if (!stop) split = find_split(members, counts, total);
    if (!split.found) {
      nodes_[static_cast<std::size_t>(id)].counts = std::move(counts);
      return id;
    }

    std::vector<std::uint32_t> left, right;
    for (auto i : members) {
      const double v = data_.examples[i].x.at(static_cast<std::uint32_t>(split.feature));
      (v <= split.threshold ? left : right).push_back(i);
    }
    members.clear();
    members.shrink_to_fit();
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  Split find_split(const std::vector<std::uint32_t>& members, const std::vector<long>& counts,
                   long total) {
    std::vector<std::uint32_t> touched;
    for (auto i : members) {
      for (const auto& e : data_.examples[i].x.entries) {
        if (e.weight == 0.0) continue;
        auto& b = buckets_[e.index];
        if (b.empty()) touched.push_back(e.index);
        b.push_back(Cell{e.weight, i});
      }
    }

    Split best;
    const std::size_t f_total = perm_.size();
    std::size_t drawn = 0;
    for (std::size_t pos = 0; pos < f_total; ++pos) {
      std::swap(perm_[pos], perm_[pos + rng_.below(f_total - pos)]);
      const std::uint32_t f = perm_[pos];
      ++drawn;
      if (!buckets_[f].empty()) evaluate(f, counts, total, best);
      if (drawn >= mtry_ && best.found) break;
    }

    for (auto f : touched) buckets_[f].clear();
    return best;
  }

  void evaluate(std::uint32_t f, const std::vector<long>& counts, long total, Split& best) {
    auto& cells = buckets_[f];
    // examples without an entry for f sit at value 0
    std::vector<long> zero_counts = counts;
    long zero_total = total;
    for (const auto& c : cells) {
      zero_counts[label_slot_[c.example]] -= weights_[c.example];
      zero_total -= weights_[c.example];
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
      if (a.value != b.value) return a.value < b.value;
      return a.example < b.example;
    });

    std::vector<long> left(k_, 0);
    long left_total = 0;
    bool zero_added = zero_total == 0;
    std::size_t i = 0;
    auto add_zero = [&] {
      for (std::size_t c = 0; c < k_; ++c) left[c] += zero_counts[c];
      left_total += zero_total;
      zero_added = true;
    };
    auto consider = [&](double lo, double hi) {
      const long right_total = total - left_total;
      if (left_total < min_leaf_ || right_total < min_leaf_ || left_total == 0 || right_total == 0) return;
      std::vector<long> right(k_);
      for (std::size_t c = 0; c < k_; ++c) right[c] = counts[c] - left[c];
      Split cand;
      cand.found = true;
      cand.num = sum_squares(left) * right_total + sum_squares(right) * left_total;
      cand.den = static_cast<long long>(left_total) * right_total;
      cand.feature = static_cast<int>(f);
      cand.threshold = (lo + hi) / 2.0;
      if (better(cand, best)) best = cand;
    };

    // Sweep distinct values in ascending order, the implicit zero included.
    double prev = 0.0;
    bool have_prev = false;
    while (i < cells.size() || !zero_added) {
      double v;
      if (!zero_added && (i >= cells.size() || 0.0 < cells[i].value)) {
        v = 0.0;
        if (have_prev) consider(prev, v);
        add_zero();
      } else {
        v = cells[i].value;
        if (have_prev && v != prev) consider(prev, v);
        while (i < cells.size() && cells[i].value == v) {
          left[label_slot_[cells[i].example]] += weights_[cells[i].example];
          left_total += weights_[cells[i].example];
          ++i;
        }
        if (!zero_added && v == 0.0) add_zero();
      }
      prev = v;
      have_prev = true;
    }
  }

  const Dataset& data_;
  const std::vector<long>& weights_;
  std::size_t mtry_;
  int max_depth_;
  int min_leaf_;
  Rng rng_;
  std::size_t k_;
  std::vector<std::vector<Cell>> buckets_;
  std::vector<std::uint32_t> perm_;
  std::vector<std::size_t> label_slot_;
  std::vector<TreeNode> nodes_;
};

std::size_t argmax_first(const std::vector<long>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

DecisionTree DecisionTree::grow(const Dataset& data, const std::vector<long>& weights,
                                std::size_t features_per_split, int max_depth, int min_leaf,
                                std::uint64_t seed) {
  if (weights.size() != data.size()) throw std::invalid_argument("decision tree: weight count mismatch");
  if (min_leaf < 1) throw std::invalid_argument("decision tree: min_leaf must be >= 1");
  Grower g(data, weights, std::max<std::size_t>(1, features_per_split), max_depth, min_leaf, seed);
  DecisionTree t;
  t.nodes_ = g.run();
  return t;
}

std::size_t DecisionTree::predict_slot(const std::vector<double>& dense) const {
  std::size_t n = 0;
  while (!nodes_[n].is_leaf()) {
    const auto& node = nodes_[n];
    n = static_cast<std::size_t>(dense[static_cast<std::size_t>(node.feature)] <= node.threshold
                                     ? node.left
                                     : node.right);
  }
  return argmax_first(nodes_[n].counts);
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

ForestModel ForestModel::train(const Dataset& data, const ForestParams& params, Exec exec) {
  data.validate_for_training();
  if (params.n_trees < 1) throw std::invalid_argument("random forest: n_trees must be >= 1");
  if (params.min_leaf < 1) throw std::invalid_argument("random forest: min_leaf must be >= 1");
  if (params.max_depth < 0 || params.features_per_split < 0) {
    throw std::invalid_argument("random forest: negative parameter");
  }

  ForestModel m;
  m.classes_ = data.classes;
  m.dim_ = data.dim;
  std::size_t mtry = params.features_per_split > 0
                         ? static_cast<std::size_t>(params.features_per_split)
                         : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(data.dim))));
  mtry = std::clamp<std::size_t>(mtry, 1, std::max<std::size_t>(1, data.dim));

  m.trees_.resize(static_cast<std::size_t>(params.n_trees));
  for_each_index(exec, m.trees_.size(), [&](std::size_t t) {
    const std::uint64_t tree_seed = derive_seed(params.seed, {t});
    std::vector<long> weights(data.size(), 1);
    if (params.bootstrap) {
      Rng rng(derive_seed(tree_seed, {hash_tag("bootstrap")}));
      std::fill(weights.begin(), weights.end(), 0);
      for (std::size_t i = 0; i < data.size(); ++i) ++weights[rng.below(data.size())];
    }
    m.trees_[t] = DecisionTree::grow(data, weights, mtry, params.max_depth, params.min_leaf,
                                     derive_seed(tree_seed, {hash_tag("features")}));
  });
  return m;
}

std::vector<int> ForestModel::votes(const SparseVector& x) const {
  if (x.dim != dim_) throw std::invalid_argument("random forest: dimension mismatch");
  std::vector<double> dense(dim_, 0.0);
  for (const auto& e : x.entries) {
    if (e.index >= dim_) throw std::invalid_argument("random forest: feature index out of range");
    dense[e.index] = e.weight;
  }
  std::vector<int> v(classes_.size(), 0);
  for (const auto& t : trees_) ++v[t.predict_slot(dense)];
  return v;
}

Code ForestModel::predict(const SparseVector& x) const {
  const auto v = votes(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < v.size(); ++c) {
    if (v[c] > v[best]) best = c;
  }
  return classes_[best];
}

}  // namespace pcc
