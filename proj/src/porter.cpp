#include "pcc/porter.hpp"

#include <algorithm>

namespace pcc {

namespace {

// Working state for one word. `end` is one past the last letter still in
// the word; `stem_end` marks where the suffix matched by ends() begins.
class PorterWord {
 public:
  explicit PorterWord(std::string_view w) : b_(w), end_(b_.size()) {}

  std::string result() const { return b_.substr(0, end_); }
  std::size_t size() const { return end_; }

  bool step1a() {
    if (ends("sses")) return set_to("ss");
    if (ends("ies")) return set_to("i");
    if (ends("ss")) return false;
    if (ends("s")) return set_to("");
    return false;
  }

  void step1b() {
    if (ends("eed")) {
      if (measure() > 0) --end_;
      return;
    }
    if (!((ends("ed") || ends("ing")) && vowel_in_stem())) return;
    end_ = stem_end_;
    if (ends("at")) {
      set_to("ate");
    } else if (ends("bl")) {
      set_to("ble");
    } else if (ends("iz")) {
      set_to("ize");
    } else if (double_consonant(end_ - 1)) {
      const char last = b_[end_ - 1];
      if (last != 'l' && last != 's' && last != 'z') --end_;
    } else {
      stem_end_ = end_;
      if (measure() == 1 && cvc(end_ - 1)) set_to_at_end("e");
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[end_ - 1] = 'i';
  }

  void step2() {
    static constexpr std::pair<std::string_view, std::string_view> rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    };
    replace_longest(rules, 0);
  }

  void step3() {
    static constexpr std::pair<std::string_view, std::string_view> rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    replace_longest(rules, 0);
  }

  void step4() {
    static constexpr std::string_view suffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
    };
    std::string_view best;
    for (auto s : suffixes) {
      if (s.size() > best.size() && ends(s)) best = s;
    }
    if (best.empty()) return;
    ends(best);
    if (best == "ion") {
      if (stem_end_ == 0) return;
      const char before = b_[stem_end_ - 1];
      if (before != 's' && before != 't') return;
    }
    if (measure() > 1) end_ = stem_end_;
  }

  void step5() {
    stem_end_ = end_;
    if (end_ > 0 && b_[end_ - 1] == 'e') {
      stem_end_ = end_ - 1;
      const int m = measure();
      if (m > 1 || (m == 1 && !cvc(end_ - 2))) --end_;
    }
    stem_end_ = end_;
    if (end_ > 1 && b_[end_ - 1] == 'l' && double_consonant(end_ - 1) && measure() > 1) --end_;
  }

 private:
  bool consonant(std::size_t i) const {
    switch (b_[i]) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 || !consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b_[0, stem_end_).
  int measure() const {
    int n = 0;
    std::size_t i = 0;
    const std::size_t j = stem_end_;
    while (i < j && consonant(i)) ++i;
    while (i < j) {
      while (i < j && !consonant(i)) ++i;
      if (i >= j) break;
      while (i < j && consonant(i)) ++i;
      ++n;
    }
    return n;
  }

  bool vowel_in_stem() const {
    for (std::size_t i = 0; i < stem_end_; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(std::size_t i) const {
    return i >= 1 && b_[i] == b_[i - 1] && consonant(i);
  }

  // consonant-vowel-consonant ending at i, final consonant not w, x or y
  bool cvc(std::size_t i) const {
    if (i < 2 || !consonant(i) || consonant(i - 1) || !consonant(i - 2)) return false;
    const char c = b_[i];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) {
    if (s.size() > end_) return false;
    if (std::string_view(b_).substr(end_ - s.size(), s.size()) != s) return false;
    stem_end_ = end_ - s.size();
    return true;
  }

  // Replaces the suffix matched by the last ends() call.
  bool set_to(std::string_view s) {
    b_.replace(stem_end_, end_ - stem_end_, s);
    end_ = stem_end_ + s.size();
    b_.resize(end_);
    return true;
  }

  void set_to_at_end(std::string_view s) {
    b_.resize(end_);
    b_.append(s);
    end_ = b_.size();
  }

  template <std::size_t N>
  void replace_longest(const std::pair<std::string_view, std::string_view> (&rules)[N],
                       int min_measure) {
    const std::pair<std::string_view, std::string_view>* best = nullptr;
    for (const auto& r : rules) {
      if ((!best || r.first.size() > best->first.size()) && ends(r.first)) best = &r;
    }
    if (!best) return;
    ends(best->first);
    if (measure() > min_measure) set_to(best->second);
  }

  std::string b_;
  std::size_t end_;
  std::size_t stem_end_ = 0;
};

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.empty()) return {};
  if (!std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
    return std::string(word);
  }
  PorterWord w(word);
  w.step1a();
  w.step1b();
  w.step1c();
  w.step2();
  w.step3();
  w.step4();
  w.step5();
  return w.result();
}

}  // namespace pcc
