#include "pcc/classifiers.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>

#include "pcc/random.hpp"

namespace pcc {

Dataset Dataset::from(std::vector<Example> examples, std::size_t dim) {
  Dataset d;
  std::vector<Code> labels;
  labels.reserve(examples.size());
  for (const auto& e : examples) labels.push_back(e.label);
  d.classes = canonical_classes(std::move(labels));
  d.examples = std::move(examples);
  d.dim = dim;
  return d;
}

std::size_t Dataset::class_slot(Code c) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == c) return i;
  }
  throw std::invalid_argument("dataset: label " + std::string(code_name(c)) + " not in class set");
}

void Dataset::validate_for_training() const {
  if (examples.empty()) throw std::invalid_argument("training set is empty");
  if (classes.size() < 2) throw std::invalid_argument("training set has fewer than two classes");
  std::vector<std::size_t> per_class(classes.size(), 0);
  std::set<std::string_view> ids;
  for (const auto& ex : examples) {
    ++per_class[class_slot(ex.label)];
    if (!ex.id.empty() && !ids.insert(ex.id).second) {
      throw std::invalid_argument("duplicate example id " + ex.id);
    }
    if (ex.x.dim != dim) throw std::invalid_argument("example " + ex.id + " has wrong dimension");
    for (const auto& e : ex.x.entries) {
      if (e.index >= dim) throw std::invalid_argument("example " + ex.id + " indexes past dimension");
      if (!std::isfinite(e.weight)) throw std::invalid_argument("example " + ex.id + " has a non-finite weight");
    }
  }
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (per_class[c] == 0) {
      throw std::invalid_argument("class " + std::string(code_name(classes[c])) + " has no instances");
    }
  }
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::NaiveBayes: return "NB";
    case Algorithm::RandomForest: return "RF";
    case Algorithm::Svm: return "SVM";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  std::string lower(s);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "nb") return Algorithm::NaiveBayes;
  if (lower == "rf") return Algorithm::RandomForest;
  if (lower == "svm") return Algorithm::Svm;
  return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> TrainParams::echo() const {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };
  return {
      {"nb.alpha", num(nb.alpha)},
      {"rf.n_trees", std::to_string(rf.n_trees)},
      {"rf.features_per_split", rf.features_per_split == 0 ? "ceil(sqrt(F))" : std::to_string(rf.features_per_split)},
      {"rf.bootstrap", rf.bootstrap ? "true" : "false"},
      {"rf.max_depth", rf.max_depth == 0 ? "unlimited" : std::to_string(rf.max_depth)},
      {"rf.min_leaf", std::to_string(rf.min_leaf)},
      {"svm.c", num(svm.c)},
      {"svm.max_epochs", std::to_string(svm.max_epochs)},
      {"svm.tolerance", num(svm.tolerance)},
      {"svm.multiclass", "one-vs-one"},
  };
}

std::size_t Model::dim() const {
  return std::visit([](const auto& m) { return m.dim(); }, impl);
}

const std::vector<Code>& Model::classes() const {
  return std::visit([](const auto& m) -> const std::vector<Code>& { return m.classes(); }, impl);
}

Model train(Algorithm algorithm, const Dataset& data, const TrainParams& params, Exec exec) {
  Model m{algorithm, params, NaiveBayesModel{}};
  switch (algorithm) {
    case Algorithm::NaiveBayes:
      m.impl = NaiveBayesModel::train(data, params.nb);
      break;
    case Algorithm::RandomForest:
      m.impl = ForestModel::train(data, params.rf, exec);
      break;
    case Algorithm::Svm:
      m.impl = SvmModel::train(data, params.svm, exec);
      break;
  }
  return m;
}

Code predict(const Model& model, const SparseVector& x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, model.impl);
}

std::vector<std::pair<std::string, Code>> predict_batch(const Model& model, const Dataset& data) {
  std::vector<std::pair<std::string, Code>> out;
  out.reserve(data.size());
  for (const auto& ex : data.examples) out.emplace_back(ex.id, predict(model, ex.x));
  return out;
}

namespace {

void dump(std::ostream& out, const NaiveBayesModel& m) {
  char buf[64];
  for (std::size_t c = 0; c < m.classes().size(); ++c) {
    std::snprintf(buf, sizeof buf, "%.9g", m.log_prior()[c]);
    out << "class " << code_name(m.classes()[c]) << " log_prior " << buf << '\n';
    for (std::size_t f = 0; f < m.dim(); ++f) {
      std::snprintf(buf, sizeof buf, "%.9g", m.log_likelihood()[c][f]);
      out << "  f" << f << ' ' << buf << '\n';
    }
  }
}

void dump(std::ostream& out, const ForestModel& m) {
  char buf[64];
  for (std::size_t t = 0; t < m.trees().size(); ++t) {
    out << "tree " << t << '\n';
    const auto& nodes = m.trees()[t].nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      out << "  node " << i;
      if (n.is_leaf()) {
        out << " leaf";
        for (long c : n.counts) out << ' ' << c;
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", n.threshold);
        out << " f" << n.feature << " <= " << buf << " ? " << n.left << " : " << n.right;
      }
      out << '\n';
    }
  }
}

void dump(std::ostream& out, const SvmModel& m) {
  char buf[64];
  for (const auto& p : m.pairs()) {
    std::snprintf(buf, sizeof buf, "%.9g", p.bias);
    out << "pair " << code_name(m.classes()[p.positive]) << " vs "
        << code_name(m.classes()[p.negative]) << " epochs " << p.epochs << " bias " << buf << '\n';
    for (std::size_t f = 0; f < p.w.size(); ++f) {
      if (p.w[f] == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.9g", p.w[f]);
      out << "  f" << f << ' ' << buf << '\n';
    }
  }
}

}  // namespace

void dump_model(std::ostream& out, const Model& model) {
  out << "# model " << algorithm_name(model.algorithm) << " dim " << model.dim() << '\n';
  std::visit([&](const auto& m) { dump(out, m); }, model.impl);
}

Learner make_learner(Algorithm algorithm, const TrainParams& params, Exec exec) {
  Learner l;
  l.name = std::string(algorithm_name(algorithm));
  l.fit = [algorithm, params, exec](const Dataset& data, std::uint64_t seed) -> Predictor {
    TrainParams p = params;
    p.rf.seed = derive_seed(params.rf.seed, {seed});
    p.svm.seed = derive_seed(params.svm.seed, {seed});
    auto model = std::make_shared<Model>(train(algorithm, data, p, exec));
    return [model](const Example& ex) { return predict(*model, ex.x); };
  };
  return l;
}

}  // namespace pcc
