#pragma once

#include <array>
#include <compare>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pcc/code.hpp"

namespace pcc {

enum class Speaker : std::uint8_t { Doctor, Patient };

char speaker_token(Speaker s);

/// (case_id, line_no) identifies a transcript line. Ordering is canonical:
/// case_id lexicographic, then line number.
struct LineKey {
  std::string case_id;
  int line_no = 0;

  auto operator<=>(const LineKey&) const = default;
};

struct Utterance {
  std::string case_id;
  int line_no = 0;
  Speaker speaker = Speaker::Doctor;
  std::string text;

  LineKey key() const { return {case_id, line_no}; }
  bool operator==(const Utterance&) const = default;
};

struct Annotation {
  std::string case_id;
  int line_no = 0;
  std::string coder_id;
  Code code = Code::NotCoded;

  bool operator==(const Annotation&) const = default;
};

/// A line with exactly one label. `context` holds the preceding run of
/// lines used by the with-context variant, oldest first.
struct CodedLine {
  Utterance utterance;
  Code code = Code::NotCoded;
  std::vector<Utterance> context;

  bool operator==(const CodedLine&) const = default;
};

enum class Scope { PhysicianOnly, All };

/// Which preceding lines count as context for a coded line.
enum class ContextMode {
  SameSpeaker,   ///< run of consecutive lines by the same speaker
  OtherSpeaker,  ///< run of consecutive lines by the other participant
};

/// Per-code buckets of coded lines, each in canonical (case, line) order.
class InstancePool {
 public:
  InstancePool() = default;

  const std::vector<CodedLine>& bucket(Code c) const { return buckets_[code_index(c)]; }
  std::size_t size(Code c) const { return bucket(c).size(); }
  std::size_t total() const;
  Scope scope() const { return scope_; }
  bool has_context() const { return has_context_; }

  friend InstancePool merge_and_dedup(const std::vector<Utterance>&,
                                      const std::vector<Annotation>&, Scope);
  friend InstancePool attach_context(const InstancePool&, const std::vector<Utterance>&,
                                     ContextMode);

 private:
  std::array<std::vector<CodedLine>, kCodeCount> buckets_;
  Scope scope_ = Scope::PhysicianOnly;
  bool has_context_ = false;
};

inline constexpr std::string_view kTranscriptsHeader = "case_id\tline_no\tspeaker\ttext";
inline constexpr std::string_view kAnnotationsHeader = "case_id\tline_no\tcoder_id\tcode";
inline constexpr std::string_view kCodersHeader = "case_id\tn_coders";

/// Reads transcripts.tsv. Throws ParseError naming the offending row.
std::vector<Utterance> parse_transcripts(std::istream& in,
                                         const std::string& source = "transcripts.tsv");

/// Reads annotations.tsv. Utterance references are checked later, by
/// merge_and_dedup.
std::vector<Annotation> parse_annotations(std::istream& in,
                                          const std::string& source = "annotations.tsv");

/// Reads coders.tsv into case_id -> number of coders assigned to the case.
std::map<std::string, int> parse_coders(std::istream& in,
                                        const std::string& source = "coders.tsv");

/// Builds per-code buckets. A line gets one CodedLine per distinct code any
/// coder gave it; unannotated lines go to NotCoded. PhysicianOnly drops
/// patient lines entirely. Throws DataError on a dangling annotation.
InstancePool merge_and_dedup(const std::vector<Utterance>& utterances,
                             const std::vector<Annotation>& annotations,
                             Scope scope = Scope::PhysicianOnly);

/// Keeps annotations whose (case, line, code) was assigned by a strict
/// majority of the case's coders. Throws DataError for a case missing from
/// coders_per_case.
std::vector<Annotation> majority_filter(const std::vector<Annotation>& annotations,
                                        const std::map<std::string, int>& coders_per_case);

/// Fills every CodedLine's context with the maximal run of immediately
/// preceding, consecutively numbered lines in the same case matching `mode`.
InstancePool attach_context(const InstancePool& pool, const std::vector<Utterance>& utterances,
                            ContextMode mode = ContextMode::SameSpeaker);

}  // namespace pcc
