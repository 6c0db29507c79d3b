#include "pcc/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <ostream>
#include <unordered_set>

#include "pcc/error.hpp"
#include "pcc/porter.hpp"

namespace pcc {

namespace {

// NLTK's English stopword list (179 entries), verbatim.
const std::vector<std::string>& nltk_english() {
  static const std::vector<std::string> words = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
      "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his",
      "himself", "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself",
      "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this",
      "that", "that'll", "these", "those", "am", "is", "are", "was", "were", "be", "been",
      "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an", "the",
      "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for",
      "with", "about", "against", "between", "into", "through", "during", "before", "after",
      "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under",
      "again", "further", "then", "once", "here", "there", "when", "where", "why", "how", "all",
      "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
      "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just",
      "don", "don't", "should", "should've", "now", "d", "ll", "m", "o", "re", "ve", "y",
      "ain", "aren", "aren't", "couldn", "couldn't", "didn", "didn't", "doesn", "doesn't",
      "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma", "mightn",
      "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't", "shouldn",
      "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
  };
  return words;
}

// Pronouns, determiners, prepositions, conjunctions, auxiliaries and modals,
// including common contractions.
const std::unordered_set<std::string_view>& closed_class() {
  static const std::unordered_set<std::string_view> words = {
      // pronouns
      "i", "me", "my", "mine", "myself", "you", "your", "yours", "yourself", "yourselves", "he",
      "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself", "we", "us",
      "our", "ours", "ourselves", "they", "them", "their", "theirs", "themselves", "who", "whom",
      "whose", "which", "what", "that", "this", "these", "those", "whatever", "whoever",
      "anyone", "anybody", "anything", "someone", "somebody", "something", "everyone",
      "everybody", "everything", "nobody", "nothing", "none",
      // contractions
      "i'm", "i've", "i'll", "i'd", "you're", "you've", "you'll", "you'd", "he's", "she's",
      "it's", "we're", "we've", "we'll", "we'd", "they're", "they've", "they'll", "they'd",
      "that's", "there's", "here's", "what's", "let's", "who's", "that'll",
      // determiners
      "a", "an", "the", "some", "any", "each", "every", "either", "neither", "no", "all", "both",
      "few", "many", "much", "several", "another", "such",
      // prepositions
      "about", "above", "across", "after", "against", "along", "among", "around", "at",
      "before", "behind", "below", "beneath", "beside", "between", "beyond", "by", "down",
      "during", "except", "for", "from", "in", "inside", "into", "like", "near", "of", "off",
      "on", "onto", "out", "outside", "over", "past", "since", "through", "throughout", "till",
      "to", "toward", "towards", "under", "until", "up", "upon", "with", "within", "without",
      // conjunctions
      "and", "but", "or", "nor", "so", "yet", "because", "although", "though", "if", "unless",
      "whether", "while", "whereas", "than", "as", "not",
      // auxiliaries and modals
      "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having",
      "do", "does", "did", "doing", "can", "could", "may", "might", "must", "shall", "should",
      "will", "would", "ought", "can't", "cannot", "couldn't", "won't", "wouldn't", "don't",
      "doesn't", "didn't", "isn't", "aren't", "wasn't", "weren't", "haven't", "hasn't",
      "hadn't", "shouldn't", "mustn't",
  };
  return words;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

// suffix rule applies only when something besides the suffix is left
bool has_suffix(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() + 1 && ends_with(w, suffix);
}

bool is_ascii_punct(unsigned char c) {
  return c < 0x80 && !std::isalnum(c) && !std::isspace(c);
}

bool is_letter_byte(unsigned char c) { return c >= 0x80 || std::isalpha(c); }

// Maps typographic quotes and dashes to ASCII so edge stripping and
// contraction lookup see plain apostrophes and hyphens.
std::string normalize_typography(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c0 = static_cast<unsigned char>(text[i]);
    if (c0 == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80) {
      const auto c2 = static_cast<unsigned char>(text[i + 2]);
      char repl = 0;
      if (c2 == 0x98 || c2 == 0x99) repl = '\'';
      else if (c2 == 0x9C || c2 == 0x9D) repl = '"';
      else if (c2 == 0x93 || c2 == 0x94) repl = '-';
      if (repl) {
        out.push_back(repl);
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

}  // namespace

std::string_view pos_name(Pos p) {
  switch (p) {
    case Pos::Noun: return "Noun";
    case Pos::Verb: return "Verb";
    case Pos::Adjective: return "Adjective";
    case Pos::Adverb: return "Adverb";
    case Pos::Other: return "Other";
  }
  return "Other";
}

std::string_view variant_name(Variant v) {
  return v == Variant::Single ? "single" : "with_context";
}

std::string InstanceId::str() const {
  return case_id + ":" + std::to_string(line_no) + ":" + std::string(code_name(code)) + ":" +
         std::string(variant_name(variant));
}

std::vector<std::pair<std::string, std::string>> PreprocessConfig::echo() const {
  return {
      {"preprocess.pos_filter", pos_filter ? "true" : "false"},
      {"preprocess.tagger", tagger == Tagger::Lexicon ? "lexicon" : "none"},
      {"preprocess.stopwords", stopword_list},
      {"preprocess.drop_numeric", drop_numeric ? "true" : "false"},
      {"preprocess.count_mode", count_mode == CountMode::Terms ? "terms" : "tokens"},
  };
}

std::vector<Token> tokenize(std::string_view raw, bool drop_numeric) {
  const std::string text = normalize_typography(raw);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t b = i, e = j;
    while (b < e && is_ascii_punct(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && is_ascii_punct(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) {
      std::string w = text.substr(b, e - b);
      for (auto& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      const bool has_letter = std::any_of(w.begin(), w.end(), [](char ch) {
        return is_letter_byte(static_cast<unsigned char>(ch));
      });
      if (has_letter || !drop_numeric) out.push_back(Token{std::move(w), Pos::Other});
    }
    i = j;
  }
  return out;
}

Pos tag_word(std::string_view w) {
  if (closed_class().contains(w)) return Pos::Other;
  if (has_suffix(w, "ly")) return Pos::Adverb;
  for (auto s : {"ous", "ful", "ive", "able"}) {
    if (has_suffix(w, s)) return Pos::Adjective;
  }
  for (auto s : {"ize", "ed", "ing"}) {
    if (has_suffix(w, s)) return Pos::Verb;
  }
  return Pos::Noun;
}

std::vector<Token> pos_tag(std::vector<Token> tokens) {
  for (auto& t : tokens) t.pos = tag_word(t.surface);
  return tokens;
}

std::vector<Token> content_filter(std::vector<Token> tokens, bool enabled) {
  if (!enabled) return tokens;
  std::erase_if(tokens, [](const Token& t) { return t.pos == Pos::Other; });
  return tokens;
}

Stoplist::Stoplist(std::vector<std::string> words) : words_(std::move(words)) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
  for (const auto& w : words_) stems_.push_back(porter_stem(w));
  std::sort(stems_.begin(), stems_.end());
  stems_.erase(std::unique(stems_.begin(), stems_.end()), stems_.end());
}

const Stoplist& Stoplist::get(std::string_view id) {
  static const Stoplist english(nltk_english());
  if (id != "nltk-english") throw ConfigError("unknown stopword list '" + std::string(id) + "'");
  return english;
}

bool Stoplist::contains_surface(std::string_view w) const {
  return std::binary_search(words_.begin(), words_.end(), w);
}

bool Stoplist::contains_stem(std::string_view s) const {
  return std::binary_search(stems_.begin(), stems_.end(), s);
}

std::vector<Term> remove_stopwords(std::vector<Term> terms, const Stoplist& stoplist) {
  std::erase_if(terms, [&](const Term& t) {
    return t.stem.empty() || stoplist.contains_surface(t.surface) ||
           stoplist.contains_stem(t.stem);
  });
  return terms;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> terms,
                                          const Stoplist& stoplist) {
  std::erase_if(terms, [&](const std::string& t) {
    return t.empty() || stoplist.contains_surface(t) || stoplist.contains_stem(t);
  });
  return terms;
}

std::vector<std::string> preprocess_text(std::string_view text, const PreprocessConfig& config,
                                         std::size_t* token_count) {
  auto tokens = tokenize(text, config.drop_numeric);
  if (token_count) *token_count = tokens.size();
  if (config.tagger == Tagger::Lexicon) {
    tokens = content_filter(pos_tag(std::move(tokens)), config.pos_filter);
  }
  std::vector<Term> terms;
  terms.reserve(tokens.size());
  for (auto& t : tokens) {
    std::string stem = porter_stem(t.surface);
    terms.push_back(Term{std::move(t.surface), std::move(stem)});
  }
  terms = remove_stopwords(std::move(terms), Stoplist::get(config.stopword_list));
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (auto& t : terms) out.push_back(std::move(t.stem));
  return out;
}

Instance preprocess_line(const CodedLine& line, Variant variant, const PreprocessConfig& config) {
  Instance inst;
  inst.id = InstanceId{line.utterance.case_id, line.utterance.line_no, line.code, variant};
  inst.label = line.code;
  std::string text;
  if (variant == Variant::WithContext) {
    for (const auto& u : line.context) {
      text += u.text;
      text += '\n';
    }
  }
  text += line.utterance.text;
  inst.terms = preprocess_text(text, config, &inst.token_count);
  return inst;
}

void write_instance_dump(std::ostream& out, const std::vector<Instance>& instances) {
  for (const auto& inst : instances) {
    out << inst.id.str() << '\t' << code_name(inst.label) << '\t';
    for (std::size_t i = 0; i < inst.terms.size(); ++i) {
      if (i) out << ' ';
      out << inst.terms[i];
    }
    out << '\n';
  }
}

}  // namespace pcc
