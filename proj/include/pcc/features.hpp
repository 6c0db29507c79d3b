#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcc/code.hpp"
#include "pcc/parallel.hpp"
#include "pcc/preprocess.hpp"

namespace pcc {

struct SparseEntry {
  std::uint32_t index = 0;
  double weight = 0.0;

  bool operator==(const SparseEntry&) const = default;
};

/// Non-zero entries sorted by index.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<SparseEntry> entries;

  double at(std::uint32_t index) const;
  double norm() const;
  bool empty() const { return entries.empty(); }
  bool operator==(const SparseVector&) const = default;
};

/// Training-set terms in lexicographic order with document frequencies.
class Vocabulary {
 public:
  std::size_t size() const { return terms_.size(); }
  std::size_t documents() const { return documents_; }
  const std::string& term(std::size_t i) const { return terms_[i]; }
  std::size_t df(std::size_t i) const { return df_[i]; }
  std::optional<std::uint32_t> index_of(std::string_view term) const;

  /// ln((N+1)/(df+1)) + 1
  double idf(std::size_t i) const;

  friend Vocabulary build_vocabulary(const std::vector<Instance>& training);

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::size_t documents_ = 0;
};

/// Throws std::invalid_argument on an empty training set.
Vocabulary build_vocabulary(const std::vector<Instance>& training);

/// N(AD-BC)^2 / ((A+B)(C+D)(A+C)(B+D)); 0 when any marginal is 0.
///   a: in class, has term      b: other class, has term
///   c: in class, lacks term    d: other class, lacks term
double chi_square(long long a, long long b, long long c, long long d);

/// Document-presence chi-square of one term against one class.
double chi_square(std::string_view term, Code cls, const std::vector<Instance>& training);

struct FeatureConfig {
  std::size_t k_per_class = 100;

  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Union over classes of each class's top-k terms by chi-square.
struct FeatureSet {
  std::vector<Code> classes;                  ///< classes present in training
  std::vector<std::vector<double>> scores;    ///< [class][vocabulary index]
  std::vector<std::uint32_t> selected;        ///< vocabulary indices, ascending
  std::size_t k_per_class = 0;

  std::size_t dim() const { return selected.size(); }
  /// Feature position of a vocabulary index, if selected.
  std::optional<std::uint32_t> position_of(std::uint32_t vocab_index) const;

  bool operator==(const FeatureSet&) const = default;
};

/// Scores every (class, term) pair. Ties in the ranking go to the
/// lexicographically smaller term. Requires k_per_class >= 1.
FeatureSet select_features(const std::vector<Instance>& training, const Vocabulary& vocabulary,
                           std::size_t k_per_class, Exec exec = Exec::Parallel);

/// tf * idf over selected terms, L2-normalized. Unknown terms are ignored.
SparseVector vectorize(const Instance& instance, const Vocabulary& vocabulary,
                       const FeatureSet& features);

/// `class,term,chi2,selected` rows for every (class, term) pair.
void write_feature_report(std::ostream& out, const Vocabulary& vocabulary,
                          const FeatureSet& features);

}  // namespace pcc
