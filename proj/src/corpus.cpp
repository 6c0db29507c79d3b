#include "pcc/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <set>
#include <tuple>

#include "pcc/error.hpp"

namespace pcc {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool read_row(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

int parse_positive(std::string_view field, const std::string& source, std::size_t row,
                   std::string_view what) {
  int value = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end || value <= 0) {
    throw ParseError(source, row,
                     std::string(what) + " must be a positive integer, got '" +
                         std::string(field) + "'");
  }
  return value;
}

/// Iterates data rows of a headered TSV file, checking the header and the
/// column count. Blank lines are skipped.
template <class F>
void for_each_row(std::istream& in, const std::string& source, std::string_view header,
                  std::size_t columns, F&& on_row) {
  std::string line;
  if (!read_row(in, line)) throw ParseError(source, 1, "missing header");
  if (line != header) {
    throw ParseError(source, 1, "expected header '" + std::string(header) + "'");
  }
  std::size_t row = 1;
  while (read_row(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != columns) {
      throw ParseError(source, row,
                       "expected " + std::to_string(columns) + " columns, got " +
                           std::to_string(fields.size()));
    }
    on_row(row, fields);
  }
}

}  // namespace

char speaker_token(Speaker s) { return s == Speaker::Doctor ? 'D' : 'P'; }

std::size_t InstancePool::total() const {
  std::size_t n = 0;
  for (const auto& b : buckets_) n += b.size();
  return n;
}

std::vector<Utterance> parse_transcripts(std::istream& in, const std::string& source) {
  std::vector<Utterance> out;
  std::set<LineKey> seen;
  std::map<std::string, int, std::less<>> last_line;

  for_each_row(in, source, kTranscriptsHeader, 4,
               [&](std::size_t row, const std::vector<std::string_view>& f) {
                 Utterance u;
                 u.case_id = std::string(f[0]);
                 if (u.case_id.empty()) throw ParseError(source, row, "empty case_id");
                 u.line_no = parse_positive(f[1], source, row, "line_no");
                 if (f[2] == "D") {
                   u.speaker = Speaker::Doctor;
                 } else if (f[2] == "P") {
                   u.speaker = Speaker::Patient;
                 } else {
                   throw ParseError(source, row,
                                    "unknown speaker '" + std::string(f[2]) + "' (expected D or P)");
                 }
                 if (f[3].empty()) throw ParseError(source, row, "empty text");
                 u.text = std::string(f[3]);

                 if (!seen.insert(u.key()).second) {
                   throw ParseError(source, row,
                                    "duplicate line " + u.case_id + ":" + std::to_string(u.line_no));
                 }
                 auto it = last_line.find(u.case_id);
                 if (it != last_line.end() && u.line_no <= it->second) {
                   throw ParseError(source, row,
                                    "line_no " + std::to_string(u.line_no) +
                                        " does not increase within case " + u.case_id);
                 }
                 last_line[u.case_id] = u.line_no;
                 out.push_back(std::move(u));
               });
  return out;
}

std::vector<Annotation> parse_annotations(std::istream& in, const std::string& source) {
  std::vector<Annotation> out;
  for_each_row(in, source, kAnnotationsHeader, 4,
               [&](std::size_t row, const std::vector<std::string_view>& f) {
                 Annotation a;
                 a.case_id = std::string(f[0]);
                 if (a.case_id.empty()) throw ParseError(source, row, "empty case_id");
                 a.line_no = parse_positive(f[1], source, row, "line_no");
                 a.coder_id = std::string(f[2]);
                 if (a.coder_id.empty()) throw ParseError(source, row, "empty coder_id");
                 auto code = parse_manual_code(f[3]);
                 if (!code) {
                   throw ParseError(source, row, "unknown code '" + std::string(f[3]) + "'");
                 }
                 a.code = *code;
                 out.push_back(std::move(a));
               });
  return out;
}

std::map<std::string, int> parse_coders(std::istream& in, const std::string& source) {
  std::map<std::string, int> out;
  for_each_row(in, source, kCodersHeader, 2,
               [&](std::size_t row, const std::vector<std::string_view>& f) {
                 std::string case_id(f[0]);
                 if (case_id.empty()) throw ParseError(source, row, "empty case_id");
                 const int n = parse_positive(f[1], source, row, "n_coders");
                 if (!out.emplace(case_id, n).second) {
                   throw ParseError(source, row, "duplicate case " + case_id);
                 }
               });
  return out;
}

InstancePool merge_and_dedup(const std::vector<Utterance>& utterances,
                             const std::vector<Annotation>& annotations, Scope scope) {
  std::map<LineKey, const Utterance*> by_key;
  for (const auto& u : utterances) by_key.emplace(u.key(), &u);

  std::map<LineKey, std::set<Code>> codes;
  for (const auto& a : annotations) {
    LineKey key{a.case_id, a.line_no};
    if (!by_key.contains(key)) {
      throw DataError("annotation by " + a.coder_id + " references missing line " + a.case_id +
                      ":" + std::to_string(a.line_no));
    }
    codes[key].insert(a.code);
  }

  InstancePool pool;
  pool.scope_ = scope;
  // by_key iterates in canonical order, so every bucket comes out sorted.
  for (const auto& [key, u] : by_key) {
    if (scope == Scope::PhysicianOnly && u->speaker != Speaker::Doctor) continue;
    auto it = codes.find(key);
    if (it == codes.end()) {
      pool.buckets_[code_index(Code::NotCoded)].push_back(CodedLine{*u, Code::NotCoded, {}});
      continue;
    }
    for (Code c : it->second) pool.buckets_[code_index(c)].push_back(CodedLine{*u, c, {}});
  }
  return pool;
}

std::vector<Annotation> majority_filter(const std::vector<Annotation>& annotations,
                                        const std::map<std::string, int>& coders_per_case) {
  using Triple = std::tuple<std::string, int, Code>;
  std::map<Triple, std::set<std::string>> coders;
  for (const auto& a : annotations) {
    if (!coders_per_case.contains(a.case_id)) {
      throw DataError("case " + a.case_id + " has annotations but no coder count");
    }
    coders[{a.case_id, a.line_no, a.code}].insert(a.coder_id);
  }
  std::vector<Annotation> out;
  for (const auto& a : annotations) {
    const int n = coders_per_case.at(a.case_id);
    const auto agreeing = static_cast<long>(coders.at({a.case_id, a.line_no, a.code}).size());
    if (agreeing * 2 > n) out.push_back(a);
  }
  return out;
}

InstancePool attach_context(const InstancePool& pool, const std::vector<Utterance>& utterances,
                            ContextMode mode) {
  std::map<std::string, std::vector<const Utterance*>> cases;
  for (const auto& u : utterances) cases[u.case_id].push_back(&u);
  for (auto& [id, lines] : cases) {
    std::sort(lines.begin(), lines.end(),
              [](const Utterance* a, const Utterance* b) { return a->line_no < b->line_no; });
  }

  InstancePool out = pool;
  out.has_context_ = true;
  for (auto& bucket : out.buckets_) {
    for (auto& line : bucket) {
      line.context.clear();
      const auto& target = line.utterance;
      auto cit = cases.find(target.case_id);
      if (cit == cases.end()) continue;
      const auto& seq = cit->second;
      auto pos = std::lower_bound(seq.begin(), seq.end(), target.line_no,
                                  [](const Utterance* u, int n) { return u->line_no < n; });
      if (pos == seq.end() || (*pos)->line_no != target.line_no) continue;

      std::size_t i = static_cast<std::size_t>(pos - seq.begin());
      int expected = target.line_no - 1;
      std::vector<Utterance> run;
      while (i > 0) {
        const Utterance& prev = *seq[i - 1];
        const bool same = prev.speaker == target.speaker;
        const bool wanted = mode == ContextMode::SameSpeaker ? same : !same;
        if (!wanted || prev.line_no != expected) break;
        run.push_back(prev);
        --expected;
        --i;
      }
      std::reverse(run.begin(), run.end());
      line.context = std::move(run);
    }
  }
  return out;
}

}  // namespace pcc
