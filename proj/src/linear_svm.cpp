#include "pcc/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pcc/random.hpp"

namespace pcc {

namespace {

double dot(const std::vector<double>& w, const SparseVector& x) {
  double s = 0.0;
  for (const auto& e : x.entries) s += w[e.index] * e.weight;
  return s;
}

double dual_objective(const std::vector<double>& w, double bias, const std::vector<double>& alpha) {
  double ww = bias * bias;
  for (double v : w) ww += v * v;
  double sa = 0.0;
  for (double a : alpha) sa += a;
  return 0.5 * ww - sa;
}

}  // namespace

double PairwiseSvm::decision(const SparseVector& x) const { return dot(w, x) + bias; }

PairwiseSvm train_pair(const Dataset& data, std::size_t positive, std::size_t negative,
                       const SvmParams& params, std::uint64_t seed) {
  PairwiseSvm m;
  m.positive = positive;
  m.negative = negative;
  m.w.assign(data.dim, 0.0);

  std::vector<const SparseVector*> xs;
  std::vector<double> ys;
  for (const auto& ex : data.examples) {
    const std::size_t slot = data.class_slot(ex.label);
    if (slot == positive) {
      xs.push_back(&ex.x);
      ys.push_back(1.0);
    } else if (slot == negative) {
      xs.push_back(&ex.x);
      ys.push_back(-1.0);
    }
  }
  const std::size_t n = xs.size();
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 1.0;  // bias feature
    for (const auto& e : xs[i]->entries) s += e.weight * e.weight;
    qii[i] = s;
  }

  const double c = params.c;
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  m.objective.push_back(dual_objective(m.w, m.bias, alpha));

  for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
    rng.shuffle(order);
    double pg_max = -INFINITY, pg_min = INFINITY;
    for (std::size_t i : order) {
      const double g = ys[i] * (dot(m.w, *xs[i]) + m.bias) - 1.0;
      double pg = g;
      if (alpha[i] == 0.0) pg = std::min(g, 0.0);
      else if (alpha[i] == c) pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qii[i], 0.0, c);
      const double delta = (alpha[i] - old) * ys[i];
      if (delta == 0.0) continue;
      for (const auto& e : xs[i]->entries) m.w[e.index] += delta * e.weight;
      m.bias += delta;
    }
    m.epochs = epoch + 1;
    m.objective.push_back(dual_objective(m.w, m.bias, alpha));
    if (pg_max - pg_min <= params.tolerance) {
      m.converged = true;
      break;
    }
  }
  return m;
}

SvmModel SvmModel::train(const Dataset& data, const SvmParams& params, Exec exec) {
  data.validate_for_training();
  if (!(params.c > 0.0) || params.max_epochs < 1 || !(params.tolerance > 0.0)) {
    throw std::invalid_argument("svm: C, max_epochs and tolerance must be positive");
  }
  SvmModel m;
  m.classes_ = data.classes;
  m.dim_ = data.dim;
  const std::size_t k = m.classes_.size();
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) jobs.emplace_back(a, b);
  }
  m.pairs_.resize(jobs.size());
  for_each_index(exec, jobs.size(), [&](std::size_t j) {
    const auto [a, b] = jobs[j];
    m.pairs_[j] = train_pair(data, a, b, params,
                             derive_seed(params.seed, {code_index(m.classes_[a]),
                                                       code_index(m.classes_[b])}));
  });
  return m;
}

std::vector<int> SvmModel::votes(const SparseVector& x) const {
  if (x.dim != dim_) throw std::invalid_argument("svm: dimension mismatch");
  for (const auto& e : x.entries) {
    if (e.index >= dim_) throw std::invalid_argument("svm: feature index out of range");
  }
  std::vector<int> v(classes_.size(), 0);
  for (const auto& p : pairs_) ++v[p.decision(x) >= 0.0 ? p.positive : p.negative];
  return v;
}

Code SvmModel::predict(const SparseVector& x) const {
  const auto v = votes(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < v.size(); ++c) {
    if (v[c] > v[best]) best = c;
  }
  return classes_[best];
}

}  // namespace pcc
