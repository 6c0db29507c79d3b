#include "pcc/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "pcc/error.hpp"
#include "pcc/random.hpp"

namespace pcc {

std::vector<const PreparedLine*> PreparedPool::eligible(Code c, std::size_t min_words) const {
  std::vector<const PreparedLine*> out;
  for (const auto& line : bucket(c)) {
    if (line.single.usable() && line.single.group_count(config_.count_mode) >= min_words) {
      out.push_back(&line);
    }
  }
  return out;
}

PreparedPool prepare_pool(const InstancePool& pool, const PreprocessConfig& config, Exec exec) {
  PreparedPool out;
  out.config_ = config;
  for (Code c : kAllCodes) {
    const auto& src = pool.bucket(c);
    auto& dst = out.buckets_[code_index(c)];
    dst.resize(src.size());
    for_each_index(exec, src.size(), [&](std::size_t i) {
      const auto& line = src[i];
      dst[i].key = LineCodeKey{line.utterance.key(), line.code};
      dst[i].single = preprocess_line(line, Variant::Single, config);
      dst[i].with_context = preprocess_line(line, Variant::WithContext, config);
    });
  }
  return out;
}

std::vector<PreparedLine> balanced_sample(const PreparedPool& pool, const std::vector<Code>& classes,
                                          std::size_t n_per_class, std::size_t min_words,
                                          std::uint64_t seed, const std::set<LineCodeKey>* exclude) {
  std::vector<PreparedLine> out;
  out.reserve(classes.size() * n_per_class);
  for (Code c : classes) {
    auto candidates = pool.eligible(c, min_words);
    if (exclude) {
      std::erase_if(candidates, [&](const PreparedLine* p) { return exclude->contains(p->key); });
    }
    if (candidates.size() < n_per_class) {
      throw DataError("insufficient instances for class " + std::string(code_name(c)) + ": " +
                      std::to_string(candidates.size()) + " available with >= " +
                      std::to_string(min_words) + " words, " + std::to_string(n_per_class) +
                      " requested");
    }
    std::vector<std::size_t> idx(candidates.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, {code_index(c)}));
    for (std::size_t i = 0; i < n_per_class; ++i) {
      std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    }
    idx.resize(n_per_class);
    std::sort(idx.begin(), idx.end());
    for (auto i : idx) out.push_back(*candidates[i]);
  }
  return out;
}

std::vector<Instance> instances_of(const std::vector<PreparedLine>& lines, Variant variant) {
  std::vector<Instance> out;
  out.reserve(lines.size());
  for (const auto& l : lines) out.push_back(l.variant(variant));
  return out;
}

FoldPlan stratified_folds(const std::vector<Code>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_folds: k must be at least 2");
  if (k > labels.size()) throw std::invalid_argument("stratified_folds: k exceeds dataset size");
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.folds.assign(k, {});
  plan.fold_of.assign(labels.size(), 0);
  std::size_t next = 0;
  for (Code c : canonical_classes(labels)) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    Rng rng(derive_seed(seed, {code_index(c)}));
    rng.shuffle(members);
    for (auto i : members) {
      plan.fold_of[i] = next;
      plan.folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : plan.folds) std::sort(f.begin(), f.end());
  return plan;
}

Metrics metrics(const std::vector<std::vector<long>>& confusion) {
  const std::size_t k = confusion.size();
  if (k == 0) throw std::invalid_argument("metrics: empty confusion matrix");
  long total = 0, trace = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (confusion[i].size() != k) throw std::invalid_argument("metrics: matrix is not square");
    for (std::size_t j = 0; j < k; ++j) {
      if (confusion[i][j] < 0) throw std::invalid_argument("metrics: negative count");
      total += confusion[i][j];
    }
    trace += confusion[i][i];
  }
  if (total == 0) throw std::invalid_argument("metrics: confusion matrix has no predictions");

  auto ratio = [](long num, long den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  Metrics m;
  m.accuracy = ratio(trace, total);
  long tp_sum = 0, fp_sum = 0, fn_sum = 0;
  double f1_sum = 0.0;
  m.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const long tp = confusion[c][c];
    long predicted = 0, actual = 0;
    for (std::size_t i = 0; i < k; ++i) {
      predicted += confusion[i][c];
      actual += confusion[c][i];
    }
    const long fp = predicted - tp;
    const long fn = actual - tp;
    auto& s = m.per_class[c];
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, actual);
    s.f1 = ratio(2 * tp, 2 * tp + fp + fn);
    f1_sum += s.f1;
    tp_sum += tp;
    fp_sum += fp;
    fn_sum += fn;
  }
  m.micro_f1 = ratio(2 * tp_sum, 2 * tp_sum + fp_sum + fn_sum);
  m.macro_f1 = f1_sum / static_cast<double>(k);
  return m;
}

namespace {

void check_plan(const std::vector<Instance>& instances, const FoldPlan& plan) {
  if (plan.fold_of.size() != instances.size()) {
    throw std::invalid_argument("fold plan does not match the dataset size");
  }
}

}  // namespace

FoldFeatures fold_features(const std::vector<Instance>& instances, const FoldPlan& plan,
                           std::size_t fold, const FeatureConfig& config, Exec exec) {
  check_plan(instances, plan);
  std::vector<Instance> training;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (plan.fold_of[i] != fold) training.push_back(instances[i]);
  }
  FoldFeatures ff{build_vocabulary(training), {}};
  ff.features = select_features(training, ff.vocabulary, config.k_per_class, exec);
  return ff;
}

EvalReport cross_validate(const Learner& learner, const std::vector<Instance>& instances,
                          const FoldPlan& plan, const FeatureConfig& features, std::uint64_t seed,
                          Exec exec) {
  check_plan(instances, plan);
  EvalReport report;
  {
    std::vector<Code> labels;
    for (const auto& inst : instances) labels.push_back(inst.label);
    report.classes = canonical_classes(std::move(labels));
  }
  std::vector<Code> predicted(instances.size(), Code::NotCoded);

  for_each_index(exec, plan.k, [&](std::size_t fold) {
    auto ff = fold_features(instances, plan, fold, features, exec);
    std::vector<Example> train_ex;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (plan.fold_of[i] == fold) continue;
      train_ex.push_back(Example{vectorize(instances[i], ff.vocabulary, ff.features),
                                 instances[i].label, instances[i].id.str()});
    }
    const Dataset train = Dataset::from(std::move(train_ex), ff.features.dim());
    const Predictor predictor = learner.fit(train, derive_seed(seed, {fold}));
    for (auto i : plan.folds[fold]) {
      Example ex{vectorize(instances[i], ff.vocabulary, ff.features), instances[i].label,
                 instances[i].id.str()};
      predicted[i] = predictor(ex);
    }
  });

  const std::size_t k = report.classes.size();
  report.confusion.assign(k, std::vector<long>(k, 0));
  auto slot = [&](Code c) {
    auto it = std::find(report.classes.begin(), report.classes.end(), c);
    if (it == report.classes.end()) {
      throw std::logic_error("predicted class " + std::string(code_name(c)) + " is not in the dataset");
    }
    return static_cast<std::size_t>(it - report.classes.begin());
  };
  report.records.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    ++report.confusion[slot(instances[i].label)][slot(predicted[i])];
    report.records.push_back(
        PredictionRecord{instances[i].id.str(), instances[i].label, predicted[i], plan.fold_of[i]});
  }
  report.scores = metrics(report.confusion);
  report.echo = {{"eval.learner", learner.name},
                 {"eval.k", std::to_string(plan.k)},
                 {"eval.fold_seed", std::to_string(plan.seed)},
                 {"eval.seed", std::to_string(seed)}};
  for (auto& kv : features.echo()) report.echo.push_back(std::move(kv));
  return report;
}

EvalReport cross_validate(const Learner& learner, const std::vector<Instance>& instances,
                          std::size_t k, const FeatureConfig& features, std::uint64_t seed,
                          Exec exec) {
  std::vector<Code> labels;
  for (const auto& inst : instances) labels.push_back(inst.label);
  const auto plan = stratified_folds(labels, k, derive_seed(seed, {hash_tag("folds")}));
  return cross_validate(learner, instances, plan, features, seed, exec);
}

}  // namespace pcc
