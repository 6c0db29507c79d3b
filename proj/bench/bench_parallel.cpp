// Serial reference vs OpenMP path for the hot kernels.

#include <benchmark/benchmark.h>

#include <sstream>

#include "pcc/classifiers.hpp"
#include "pcc/evaluation.hpp"
#include "pcc/synth.hpp"

using namespace pcc;

namespace {

struct Fixture {
  std::vector<Instance> instances;
  Dataset data;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    GenConfig cfg = GenConfig::defaults();
    cfg.n_cases = 150;
    for (auto& [code, n] : cfg.per_code_target) n = n > 100 ? 250 : 10;
    const auto corpus = generate(cfg);
    std::istringstream t(corpus.transcripts), a(corpus.annotations);
    const auto utts = parse_transcripts(t);
    const auto pool = attach_context(merge_and_dedup(utts, parse_annotations(a)), utts);
    const auto prepared = prepare_pool(pool, PreprocessConfig{}, Exec::Serial);
    Fixture out;
    const auto lines = balanced_sample(prepared, experiment_classes(), 100, 1, 1);
    out.instances = instances_of(lines, Variant::Single);
    const auto vocab = build_vocabulary(out.instances);
    const auto fs = select_features(out.instances, vocab, 100, Exec::Serial);
    std::vector<Example> ex;
    for (const auto& i : out.instances) ex.push_back({vectorize(i, vocab, fs), i.label, i.id.str()});
    out.data = Dataset::from(std::move(ex), fs.dim());
    return out;
  }();
  return f;
}

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_ChiSquare(benchmark::State& state) {
  const auto& f = fixture();
  const auto vocab = build_vocabulary(f.instances);
  for (auto _ : state) benchmark::DoNotOptimize(select_features(f.instances, vocab, 100, exec_of(state)));
}

void BM_ForestTrain(benchmark::State& state) {
  const auto& f = fixture();
  ForestParams p;
  p.n_trees = 50;
  for (auto _ : state) benchmark::DoNotOptimize(ForestModel::train(f.data, p, exec_of(state)));
}

void BM_SvmTrain(benchmark::State& state) {
  const auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(SvmModel::train(f.data, SvmParams{}, exec_of(state)));
}

void BM_CrossValidate(benchmark::State& state) {
  const auto& f = fixture();
  const auto learner = make_learner(Algorithm::NaiveBayes, TrainParams{}, exec_of(state));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cross_validate(learner, f.instances, 10, FeatureConfig{}, 7, exec_of(state)));
  }
}

}  // namespace

BENCHMARK(BM_ChiSquare)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ForestTrain)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SvmTrain)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossValidate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
