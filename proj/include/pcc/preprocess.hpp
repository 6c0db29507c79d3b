#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pcc/code.hpp"
#include "pcc/corpus.hpp"

namespace pcc {

enum class Pos : std::uint8_t { Noun, Verb, Adjective, Adverb, Other };

std::string_view pos_name(Pos p);

struct Token {
  std::string surface;
  Pos pos = Pos::Other;

  bool operator==(const Token&) const = default;
};

/// A surviving token: its surface form and its stem.
struct Term {
  std::string surface;
  std::string stem;
};

enum class Tagger { Lexicon, None };

/// How group thresholds (#words >= n) count words.
enum class CountMode {
  Terms,   ///< stems left after the whole pipeline
  Tokens,  ///< raw tokens before tagging, stemming and stopword removal
};

struct PreprocessConfig {
  bool pos_filter = true;
  Tagger tagger = Tagger::Lexicon;
  std::string stopword_list = "nltk-english";
  bool drop_numeric = true;
  CountMode count_mode = CountMode::Terms;

  std::vector<std::pair<std::string, std::string>> echo() const;
};

enum class Variant { Single, WithContext };

std::string_view variant_name(Variant v);

struct InstanceId {
  std::string case_id;
  int line_no = 0;
  Code code = Code::NotCoded;
  Variant variant = Variant::Single;

  std::string str() const;
  auto operator<=>(const InstanceId&) const = default;
};

/// Preprocessed form of one coded line.
struct Instance {
  InstanceId id;
  Code label = Code::NotCoded;
  std::vector<std::string> terms;  ///< multiset, in text order
  std::size_t token_count = 0;     ///< raw tokens before filtering

  std::size_t word_count() const { return terms.size(); }
  bool usable() const { return !terms.empty(); }
  std::size_t group_count(CountMode mode) const {
    return mode == CountMode::Terms ? terms.size() : token_count;
  }
};

/// Whitespace split, edge punctuation stripped, lowercased. Tokens without
/// any letter are dropped when drop_numeric is set.
std::vector<Token> tokenize(std::string_view text, bool drop_numeric = true);

/// Closed-class lexicon first, then suffix rules, then Noun.
Pos tag_word(std::string_view word);
std::vector<Token> pos_tag(std::vector<Token> tokens);

/// Keeps nouns, verbs, adjectives and adverbs. Identity when disabled.
std::vector<Token> content_filter(std::vector<Token> tokens, bool enabled = true);

/// The embedded English stopword list.
class Stoplist {
 public:
  /// Only "nltk-english" is embedded. Throws ConfigError otherwise.
  static const Stoplist& get(std::string_view id = "nltk-english");

  const std::vector<std::string>& words() const { return words_; }
  bool contains_surface(std::string_view w) const;
  bool contains_stem(std::string_view s) const;

 private:
  explicit Stoplist(std::vector<std::string> words);
  std::vector<std::string> words_;         // sorted
  std::vector<std::string> stems_;         // sorted, stems of words_
};

/// Drops terms whose surface or stem is stoplisted.
std::vector<Term> remove_stopwords(std::vector<Term> terms, const Stoplist& stoplist);

/// Convenience for already-stemmed strings: each string acts as both
/// surface and stem.
std::vector<std::string> remove_stopwords(std::vector<std::string> terms,
                                          const Stoplist& stoplist);

/// Full pipeline on raw text.
std::vector<std::string> preprocess_text(std::string_view text, const PreprocessConfig& config,
                                         std::size_t* token_count = nullptr);

/// with_context prepends the context lines' text in dialogue order.
Instance preprocess_line(const CodedLine& line, Variant variant, const PreprocessConfig& config);

/// One line per instance: `id<TAB>label<TAB>term term ...`.
void write_instance_dump(std::ostream& out, const std::vector<Instance>& instances);

}  // namespace pcc
