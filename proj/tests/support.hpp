#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "pcc/evaluation.hpp"
#include "pcc/synth.hpp"

namespace pcc::test {

inline std::vector<Utterance> transcripts(const std::string& rows) {
  std::istringstream in(std::string(kTranscriptsHeader) + "\n" + rows);
  return parse_transcripts(in);
}

inline std::vector<Annotation> annotations(const std::string& rows) {
  std::istringstream in(std::string(kAnnotationsHeader) + "\n" + rows);
  return parse_annotations(in);
}

inline Instance instance(const std::string& case_id, int line, Code label,
                         std::vector<std::string> terms) {
  Instance i;
  i.id = InstanceId{case_id, line, label, Variant::Single};
  i.label = label;
  i.token_count = terms.size();
  i.terms = std::move(terms);
  return i;
}

inline SparseVector sparse(std::size_t dim, std::vector<SparseEntry> entries) {
  return SparseVector{dim, std::move(entries)};
}

inline Example example(std::size_t dim, std::vector<SparseEntry> entries, Code label,
                       const std::string& id) {
  return Example{sparse(dim, std::move(entries)), label, id};
}

struct Ingested {
  std::vector<Utterance> utterances;
  InstancePool pool;
  PreparedPool prepared;
};

inline Ingested ingest(const GeneratedCorpus& corpus, Exec exec = Exec::Parallel) {
  Ingested out;
  std::istringstream t(corpus.transcripts), a(corpus.annotations);
  out.utterances = parse_transcripts(t);
  out.pool = attach_context(merge_and_dedup(out.utterances, parse_annotations(a)), out.utterances);
  out.prepared = prepare_pool(out.pool, PreprocessConfig{}, exec);
  return out;
}

/// A reduced generator config that still supports 40 lines per class in
/// every group.
inline GenConfig small_config(std::uint64_t seed = 11) {
  GenConfig cfg = GenConfig::defaults();
  cfg.seed = seed;
  cfg.n_cases = 80;
  for (auto& [code, n] : cfg.per_code_target) n = n > 100 ? 150 : 8;
  return cfg;
}

inline const Ingested& small_corpus() {
  static const Ingested data = ingest(generate(small_config()));
  return data;
}

}  // namespace pcc::test

namespace pcc::test {

/// The default generator output (seed 42), ingested once per process.
inline const Ingested& default_corpus() {
  static const Ingested data = ingest(generate(GenConfig::defaults()));
  return data;
}

/// Learners for harness plumbing tests.
inline Learner oracle_learner() {
  return Learner{"oracle", [](const Dataset&, std::uint64_t) -> Predictor {
                   return [](const Example& e) { return e.label; };
                 }};
}

inline Learner constant_learner(Code c) {
  return Learner{"constant", [c](const Dataset&, std::uint64_t) -> Predictor {
                   return [c](const Example&) { return c; };
                 }};
}

}  // namespace pcc::test
