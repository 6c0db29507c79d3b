#include "pcc/naive_bayes.hpp"

#include <cmath>
#include <stdexcept>

namespace pcc {

NaiveBayesModel NaiveBayesModel::train(const Dataset& data, const NaiveBayesParams& params) {
  data.validate_for_training();
  if (!(params.alpha > 0.0)) throw std::invalid_argument("naive bayes: alpha must be positive");

  NaiveBayesModel m;
  m.classes_ = data.classes;
  m.dim_ = data.dim;
  const std::size_t k = m.classes_.size();

  std::vector<double> class_count(k, 0.0);
  std::vector<std::vector<double>> mass(k, std::vector<double>(m.dim_, 0.0));
  for (const auto& ex : data.examples) {
    const std::size_t c = data.class_slot(ex.label);
    class_count[c] += 1.0;
    for (const auto& e : ex.x.entries) mass[c][e.index] += e.weight;
  }

  const double n = static_cast<double>(data.size());
  const double smoothing_total = params.alpha * static_cast<double>(m.dim_);
  m.log_prior_.resize(k);
  m.log_likelihood_.assign(k, std::vector<double>(m.dim_, 0.0));
  for (std::size_t c = 0; c < k; ++c) {
    m.log_prior_[c] = std::log(class_count[c] / n);
    double total = 0.0;
    for (double v : mass[c]) total += v;
    const double denom = std::log(total + smoothing_total);
    for (std::size_t f = 0; f < m.dim_; ++f) {
      m.log_likelihood_[c][f] = std::log(mass[c][f] + params.alpha) - denom;
    }
  }
  return m;
}

std::vector<double> NaiveBayesModel::log_joint(const SparseVector& x) const {
  if (x.dim != dim_) throw std::invalid_argument("naive bayes: dimension mismatch");
  std::vector<double> out = log_prior_;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    for (const auto& e : x.entries) {
      if (e.index >= dim_) throw std::invalid_argument("naive bayes: feature index out of range");
      out[c] += e.weight * log_likelihood_[c][e.index];
    }
  }
  return out;
}

std::vector<double> NaiveBayesModel::posterior(const SparseVector& x) const {
  auto lj = log_joint(x);
  double mx = lj[0];
  for (double v : lj) mx = std::max(mx, v);
  double z = 0.0;
  for (double& v : lj) {
    v = std::exp(v - mx);
    z += v;
  }
  for (double& v : lj) v /= z;
  return lj;
}

Code NaiveBayesModel::predict(const SparseVector& x) const {
  const auto lj = log_joint(x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < lj.size(); ++c) {
    if (lj[c] > lj[best]) best = c;
  }
  return classes_[best];
}

}  // namespace pcc
