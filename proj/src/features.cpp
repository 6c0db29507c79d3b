#include "pcc/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace pcc {

double SparseVector::at(std::uint32_t index) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), index,
                             [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
  return (it != entries.end() && it->index == index) ? it->weight : 0.0;
}

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.weight * e.weight;
  return std::sqrt(s);
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) return std::nullopt;
  return static_cast<std::uint32_t>(it - terms_.begin());
}

double Vocabulary::idf(std::size_t i) const {
  return std::log(static_cast<double>(documents_ + 1) / static_cast<double>(df_[i] + 1)) + 1.0;
}

Vocabulary build_vocabulary(const std::vector<Instance>& training) {
  if (training.empty()) throw std::invalid_argument("build_vocabulary: empty training set");
  std::map<std::string, std::size_t, std::less<>> df;
  for (const auto& inst : training) {
    std::vector<std::string_view> seen(inst.terms.begin(), inst.terms.end());
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto t : seen) {
      auto it = df.find(t);
      if (it == df.end()) df.emplace(std::string(t), 1);
      else ++it->second;
    }
  }
  Vocabulary v;
  v.documents_ = training.size();
  v.terms_.reserve(df.size());
  v.df_.reserve(df.size());
  for (auto& [term, count] : df) {
    v.terms_.push_back(term);
    v.df_.push_back(count);
  }
  return v;
}

double chi_square(long long a, long long b, long long c, long long d) {
  const long long n = a + b + c + d;
  const double ab = static_cast<double>(a + b);
  const double cd = static_cast<double>(c + d);
  const double ac = static_cast<double>(a + c);
  const double bd = static_cast<double>(b + d);
  if (ab == 0.0 || cd == 0.0 || ac == 0.0 || bd == 0.0) return 0.0;
  const double diff = static_cast<double>(a * d - b * c);
  return static_cast<double>(n) * diff * diff / (ab * cd * ac * bd);
}

double chi_square(std::string_view term, Code cls, const std::vector<Instance>& training) {
  long long a = 0, b = 0, c = 0, d = 0;
  for (const auto& inst : training) {
    const bool has = std::find(inst.terms.begin(), inst.terms.end(), term) != inst.terms.end();
    const bool in = inst.label == cls;
    if (in && has) ++a;
    else if (!in && has) ++b;
    else if (in) ++c;
    else ++d;
  }
  return chi_square(a, b, c, d);
}

std::vector<std::pair<std::string, std::string>> FeatureConfig::echo() const {
  return {
      {"features.k_per_class", std::to_string(k_per_class)},
      {"features.selection", "chi2-per-class-topk-union"},
      {"features.tf", "raw-count"},
      {"features.idf", "ln((N+1)/(df+1))+1"},
      {"features.norm", "l2"},
  };
}

std::optional<std::uint32_t> FeatureSet::position_of(std::uint32_t vocab_index) const {
  auto it = std::lower_bound(selected.begin(), selected.end(), vocab_index);
  if (it == selected.end() || *it != vocab_index) return std::nullopt;
  return static_cast<std::uint32_t>(it - selected.begin());
}

FeatureSet select_features(const std::vector<Instance>& training, const Vocabulary& vocabulary,
                           std::size_t k_per_class, Exec exec) {
  if (k_per_class < 1) throw std::invalid_argument("select_features: k_per_class must be >= 1");

  FeatureSet fs;
  fs.k_per_class = k_per_class;
  std::vector<Code> labels;
  for (const auto& inst : training) labels.push_back(inst.label);
  fs.classes = canonical_classes(labels);

  std::array<int, kCodeCount> class_slot{};
  class_slot.fill(-1);
  for (std::size_t c = 0; c < fs.classes.size(); ++c) class_slot[code_index(fs.classes[c])] = static_cast<int>(c);

  // postings: term -> documents containing it
  const std::size_t v = vocabulary.size();
  std::vector<std::vector<std::uint32_t>> postings(v);
  std::vector<long long> class_docs(fs.classes.size(), 0);
  for (std::size_t doc = 0; doc < training.size(); ++doc) {
    const auto& inst = training[doc];
    ++class_docs[static_cast<std::size_t>(class_slot[code_index(inst.label)])];
    std::vector<std::uint32_t> ids;
    for (const auto& t : inst.terms) {
      if (auto i = vocabulary.index_of(t)) ids.push_back(*i);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto i : ids) postings[i].push_back(static_cast<std::uint32_t>(doc));
  }

  const long long n = static_cast<long long>(training.size());
  fs.scores.assign(fs.classes.size(), std::vector<double>(v, 0.0));
  for_each_index(exec, v, [&](std::size_t t) {
    std::vector<long long> in_class(fs.classes.size(), 0);
    for (auto doc : postings[t]) {
      ++in_class[static_cast<std::size_t>(class_slot[code_index(training[doc].label)])];
    }
    const long long df = static_cast<long long>(postings[t].size());
    for (std::size_t c = 0; c < fs.classes.size(); ++c) {
      const long long a = in_class[c];
      const long long b = df - a;
      const long long cc = class_docs[c] - a;
      const long long d = n - class_docs[c] - b;
      fs.scores[c][t] = chi_square(a, b, cc, d);
    }
  });

  std::vector<std::uint32_t> chosen;
  for (std::size_t c = 0; c < fs.classes.size(); ++c) {
    std::vector<std::uint32_t> order(v);
    std::iota(order.begin(), order.end(), 0u);
    const auto& s = fs.scores[c];
    const std::size_t take = std::min(k_per_class, v);
    // vocabulary indices are lexicographic, so index order breaks ties
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::uint32_t x, std::uint32_t y) {
                        if (s[x] != s[y]) return s[x] > s[y];
                        return x < y;
                      });
    chosen.insert(chosen.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  fs.selected = std::move(chosen);
  return fs;
}

SparseVector vectorize(const Instance& instance, const Vocabulary& vocabulary,
                       const FeatureSet& features) {
  std::map<std::uint32_t, double> tf;
  for (const auto& t : instance.terms) {
    auto vi = vocabulary.index_of(t);
    if (!vi) continue;
    if (!features.position_of(*vi)) continue;
    tf[*vi] += 1.0;
  }
  SparseVector out;
  out.dim = features.dim();
  for (const auto& [vi, count] : tf) {
    out.entries.push_back(SparseEntry{*features.position_of(vi), count * vocabulary.idf(vi)});
  }
  const double norm = out.norm();
  if (norm > 0.0) {
    for (auto& e : out.entries) e.weight /= norm;
  }
  return out;
}

void write_feature_report(std::ostream& out, const Vocabulary& vocabulary,
                          const FeatureSet& features) {
  out << "class,term,chi2,selected\n";
  char buf[64];
  for (std::size_t c = 0; c < features.classes.size(); ++c) {
    for (std::size_t t = 0; t < vocabulary.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.9g", features.scores[c][t]);
      const bool sel = features.position_of(static_cast<std::uint32_t>(t)).has_value();
      out << code_name(features.classes[c]) << ',' << vocabulary.term(t) << ',' << buf << ','
          << (sel ? 1 : 0) << '\n';
    }
  }
}

}  // namespace pcc
