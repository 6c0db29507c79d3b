#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pcc/code.hpp"
#include "pcc/corpus.hpp"
#include "pcc/evaluation.hpp"

namespace pcc {

/// Parameters of the synthetic transcript generator.
struct GenConfig {
  int n_cases = 492;
  std::pair<int, int> lines_per_case{50, 80};
  std::pair<int, int> coders_per_case{2, 4};
  /// Doctor lines to plant per code. Codes absent from the map get none.
  std::map<Code, int> per_code_target;
  /// Probability that a planted line also gets a different code from
  /// another coder.
  double disagreement_rate = 0.1;
  /// Probability that a planted doctor line is preceded by 1-3 doctor
  /// lead-in lines drawn from the code's context vocabulary.
  double context_signal_rate = 0.6;
  /// Share of a planted line's content words taken from its code's signal
  /// terms; the rest is shared filler.
  double signal_rate = 0.2;
  /// Share of a lead-in's content words taken from the code's context terms.
  double context_term_rate = 0.35;
  /// Probability that a planted line's opener is another doctor line, which
  /// gives it an unplanned filler context.
  double adjacency_rate = 0.15;
  /// Extra patient-side lines per planted doctor line, for codes that apply
  /// to both speakers.
  double patient_code_rate = 0.03;
  /// Distribution of content-word counts per line: (count, weight).
  std::vector<std::pair<int, double>> length_mixture;
  std::uint64_t seed = 42;

  static GenConfig defaults();

  /// Throws ConfigError on out-of-range values.
  void validate() const;
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Vocabulary planted for one code. Every term survives preprocessing as
/// exactly one stem.
struct CodeLexicon {
  Code code;
  std::vector<std::string> signal_terms;
  std::vector<std::string> context_terms;
};

const std::vector<CodeLexicon>& code_lexicons();
const CodeLexicon& lexicon_for(Code c);
/// Shared content words used by every class and by uncoded lines.
const std::vector<std::string>& filler_terms();
/// Function words mixed into generated sentences; all are stoplisted.
const std::vector<std::string>& function_words();

struct GeneratedCorpus {
  std::string transcripts;
  std::string annotations;
  std::string coders;
};

/// Deterministic in (config): identical config gives byte-identical output.
/// Throws ConfigError when the planted lines cannot fit in the cases.
GeneratedCorpus generate(const GenConfig& config);

/// What the experiments need from a pool.
struct AuditSpec {
  std::vector<Code> classes = experiment_classes();
  std::vector<std::pair<std::string, std::size_t>> groups = {{"A", 1}, {"B", 3}, {"C", 5}};
  std::size_t n_per_class = 190;
};

struct AuditRow {
  Code code;
  std::size_t total = 0;
  std::size_t usable = 0;
  std::vector<std::size_t> group_counts;  ///< per AuditSpec::groups
  std::size_t with_context = 0;           ///< lines with a non-empty context
};

struct AuditReport {
  std::vector<AuditRow> rows;  ///< every code with a non-empty bucket or in spec.classes
  std::vector<std::string> group_names;
  double context_availability = 0.0;  ///< over coded lines of the six experiment codes
  bool passed = false;
  std::vector<std::string> failures;

  void write(std::ostream& out) const;
};

/// Counts classes and length groups. Fails when any requested class has
/// fewer than n_per_class lines in any group.
AuditReport audit(const PreparedPool& prepared, const InstancePool& pool, const AuditSpec& spec = {});

}  // namespace pcc
