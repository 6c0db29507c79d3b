#include "pcc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

#include "pcc/error.hpp"

namespace pcc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
  throw ConfigError("bad value '" + std::string(value) + "' for " + std::string(key) + ": expected " +
                    std::string(expected));
}

template <class T>
T parse_int(std::string_view key, std::string_view v, T min_value) {
  T out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || out < min_value) {
    bad(key, v, "an integer >= " + std::to_string(min_value));
  }
  return out;
}

double parse_double(std::string_view key, std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d)) bad(key, v, "a number");
  return d;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "true or false");
}

std::vector<Code> parse_classes(std::string_view key, std::string_view v) {
  std::vector<Code> out;
  for (auto part : split(v, ',')) {
    auto c = parse_code(part);
    if (!c) bad(key, part, "a code name");
    out.push_back(*c);
  }
  return out;
}

std::pair<int, int> parse_range(std::string_view key, std::string_view v) {
  const auto dots = v.find("..");
  if (dots == std::string_view::npos) bad(key, v, "lo..hi");
  return {parse_int<int>(key, trim(v.substr(0, dots)), 0),
          parse_int<int>(key, trim(v.substr(dots + 2)), 0)};
}

// Shortest decimal that reads back to the same double.
std::string num(double v) {
  char buf[40];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string classes_str(const std::vector<Code>& cs) {
  std::string s;
  for (Code c : cs) s += (s.empty() ? "" : ",") + std::string(code_name(c));
  return s;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view v) {
  using Setter = std::function<void(std::string_view)>;
  const std::string k(key);
  const std::map<std::string, Setter> table = {
      {"seed", [&](auto x) { seed = parse_int<std::uint64_t>(key, x, 0); }},
      {"data.dir", [&](auto x) { data_dir = x; }},
      {"data.transcripts", [&](auto x) { transcripts = x; }},
      {"data.annotations", [&](auto x) { annotations = x; }},
      {"data.coders", [&](auto x) { coders = x; }},
      {"out.dir", [&](auto x) { out_dir = x; }},
      {"corpus.scope",
       [&](auto x) {
         if (x == "physician") scope = Scope::PhysicianOnly;
         else if (x == "all") scope = Scope::All;
         else bad(key, x, "physician or all");
       }},
      {"corpus.majority_filter", [&](auto x) { majority_filter = parse_bool(key, x); }},
      {"context.mode",
       [&](auto x) {
         if (x == "same_speaker") context_mode = ContextMode::SameSpeaker;
         else if (x == "other_speaker") context_mode = ContextMode::OtherSpeaker;
         else bad(key, x, "same_speaker or other_speaker");
       }},
      {"preprocess.pos_filter", [&](auto x) { preprocess.pos_filter = parse_bool(key, x); }},
      {"preprocess.tagger",
       [&](auto x) {
         if (x == "lexicon") preprocess.tagger = Tagger::Lexicon;
         else if (x == "none") preprocess.tagger = Tagger::None;
         else bad(key, x, "lexicon or none");
       }},
      {"preprocess.stopwords",
       [&](auto x) {
         Stoplist::get(x);
         preprocess.stopword_list = x;
       }},
      {"preprocess.drop_numeric", [&](auto x) { preprocess.drop_numeric = parse_bool(key, x); }},
      {"preprocess.count_mode",
       [&](auto x) {
         if (x == "terms") preprocess.count_mode = CountMode::Terms;
         else if (x == "tokens") preprocess.count_mode = CountMode::Tokens;
         else bad(key, x, "terms or tokens");
       }},
      {"features.k_per_class", [&](auto x) { features.k_per_class = parse_int<std::size_t>(key, x, 1); }},
      {"nb.alpha",
       [&](auto x) {
         train.nb.alpha = parse_double(key, x);
         if (!(train.nb.alpha > 0)) bad(key, x, "a positive number");
       }},
      {"rf.n_trees", [&](auto x) { train.rf.n_trees = parse_int<int>(key, x, 1); }},
      {"rf.features_per_split", [&](auto x) { train.rf.features_per_split = parse_int<int>(key, x, 0); }},
      {"rf.bootstrap", [&](auto x) { train.rf.bootstrap = parse_bool(key, x); }},
      {"rf.max_depth", [&](auto x) { train.rf.max_depth = parse_int<int>(key, x, 0); }},
      {"rf.min_leaf", [&](auto x) { train.rf.min_leaf = parse_int<int>(key, x, 1); }},
      {"rf.seed", [&](auto x) { train.rf.seed = parse_int<std::uint64_t>(key, x, 0); }},
      {"svm.c",
       [&](auto x) {
         train.svm.c = parse_double(key, x);
         if (!(train.svm.c > 0)) bad(key, x, "a positive number");
       }},
      {"svm.max_epochs", [&](auto x) { train.svm.max_epochs = parse_int<int>(key, x, 1); }},
      {"svm.tolerance",
       [&](auto x) {
         train.svm.tolerance = parse_double(key, x);
         if (!(train.svm.tolerance > 0)) bad(key, x, "a positive number");
       }},
      {"svm.seed", [&](auto x) { train.svm.seed = parse_int<std::uint64_t>(key, x, 0); }},
      {"experiments.algorithms",
       [&](auto x) {
         algorithms.clear();
         for (auto part : split(x, ',')) {
           auto a = parse_algorithm(part);
           if (!a) bad(key, part, "NB, RF or SVM");
           algorithms.push_back(*a);
         }
       }},
      {"eval.k", [&](auto x) { eval_k = parse_int<std::size_t>(key, x, 2); }},
      {"exp1.groups",
       [&](auto x) {
         exp1.groups.clear();
         for (auto part : split(x, ',')) {
           const auto colon = part.find(':');
           if (colon == std::string_view::npos || colon == 0) bad(key, part, "name:min_words");
           exp1.groups.push_back(GroupSpec{std::string(trim(part.substr(0, colon))),
                                           parse_int<std::size_t>(key, trim(part.substr(colon + 1)), 1)});
         }
       }},
      {"exp1.classes", [&](auto x) { exp1.classes = parse_classes(key, x); }},
      {"exp1.n_per_class", [&](auto x) { exp1.n_per_class = parse_int<std::size_t>(key, x, 1); }},
      {"exp1.resamples", [&](auto x) { exp1.resamples = parse_int<std::size_t>(key, x, 1); }},
      {"exp1.k", [&](auto x) { exp1.k = parse_int<std::size_t>(key, x, 2); }},
      {"exp2.source_group", [&](auto x) { exp2.source_group = x; }},
      {"exp2.target_groups",
       [&](auto x) {
         exp2.target_groups.clear();
         for (auto part : split(x, ',')) exp2.target_groups.emplace_back(part);
       }},
      {"exp3.classes", [&](auto x) { exp3.classes = parse_classes(key, x); }},
      {"exp3.min_words", [&](auto x) { exp3.min_words = parse_int<std::size_t>(key, x, 1); }},
      {"exp3.n_per_class", [&](auto x) { exp3.n_per_class = parse_int<std::size_t>(key, x, 1); }},
      {"exp3.resamples", [&](auto x) { exp3.resamples = parse_int<std::size_t>(key, x, 1); }},
      {"exp3.k", [&](auto x) { exp3.k = parse_int<std::size_t>(key, x, 2); }},
      {"gen.n_cases", [&](auto x) { gen.n_cases = parse_int<int>(key, x, 1); }},
      {"gen.lines_per_case", [&](auto x) { gen.lines_per_case = parse_range(key, x); }},
      {"gen.coders_per_case", [&](auto x) { gen.coders_per_case = parse_range(key, x); }},
      {"gen.disagreement_rate", [&](auto x) { gen.disagreement_rate = parse_double(key, x); }},
      {"gen.context_signal_rate", [&](auto x) { gen.context_signal_rate = parse_double(key, x); }},
      {"gen.signal_rate", [&](auto x) { gen.signal_rate = parse_double(key, x); }},
      {"gen.context_term_rate", [&](auto x) { gen.context_term_rate = parse_double(key, x); }},
      {"gen.adjacency_rate", [&](auto x) { gen.adjacency_rate = parse_double(key, x); }},
      {"gen.patient_code_rate", [&](auto x) { gen.patient_code_rate = parse_double(key, x); }},
      {"gen.length_mixture",
       [&](auto x) {
         gen.length_mixture.clear();
         for (auto part : split(x, ',')) {
           const auto colon = part.find(':');
           if (colon == std::string_view::npos) bad(key, part, "words:weight");
           gen.length_mixture.emplace_back(parse_int<int>(key, trim(part.substr(0, colon)), 1),
                                           parse_double(key, trim(part.substr(colon + 1))));
         }
       }},
  };

  if (const auto it = table.find(k); it != table.end()) {
    it->second(v);
    return;
  }
  if (key.starts_with("gen.target.")) {
    const auto code = parse_code(key.substr(11));
    if (!code || *code == Code::NotCoded) throw ConfigError("unknown key '" + k + "'");
    gen.per_code_target[*code] = parse_int<int>(key, v, 0);
    return;
  }
  throw ConfigError("unknown key '" + k + "'");
}

void RunConfig::read(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(source + ":" + std::to_string(row) + ": expected 'key = value'");
    }
    try {
      set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(row) + ": " + e.what());
    }
  }
}

void RunConfig::read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  read(in, path.string());
}

void RunConfig::finalize() {
  exp1.seed = seed;
  exp3.seed = seed;
  gen.seed = seed;
  exp2.base = exp1;
}

Echo RunConfig::entries() const {
  std::string algs, groups, targets, mixture;
  for (auto a : algorithms) algs += (algs.empty() ? "" : ",") + std::string(algorithm_name(a));
  for (const auto& g : exp1.groups) groups += (groups.empty() ? "" : ",") + g.name + ":" + std::to_string(g.min_words);
  for (const auto& t : exp2.target_groups) targets += (targets.empty() ? "" : ",") + t;
  for (const auto& [n, w] : gen.length_mixture) mixture += (mixture.empty() ? "" : ",") + std::to_string(n) + ":" + num(w);
  Echo e = {
      {"seed", std::to_string(seed)},
      {"data.dir", data_dir},
      {"data.transcripts", transcripts},
      {"data.annotations", annotations},
      {"data.coders", coders},
      {"out.dir", out_dir},
      {"corpus.scope", scope == Scope::PhysicianOnly ? "physician" : "all"},
      {"corpus.majority_filter", bool_str(majority_filter)},
      {"context.mode", context_mode == ContextMode::SameSpeaker ? "same_speaker" : "other_speaker"},
      {"preprocess.pos_filter", bool_str(preprocess.pos_filter)},
      {"preprocess.tagger", preprocess.tagger == Tagger::Lexicon ? "lexicon" : "none"},
      {"preprocess.stopwords", preprocess.stopword_list},
      {"preprocess.drop_numeric", bool_str(preprocess.drop_numeric)},
      {"preprocess.count_mode", preprocess.count_mode == CountMode::Terms ? "terms" : "tokens"},
      {"features.k_per_class", std::to_string(features.k_per_class)},
      {"nb.alpha", num(train.nb.alpha)},
      {"rf.n_trees", std::to_string(train.rf.n_trees)},
      {"rf.features_per_split", std::to_string(train.rf.features_per_split)},
      {"rf.bootstrap", bool_str(train.rf.bootstrap)},
      {"rf.max_depth", std::to_string(train.rf.max_depth)},
      {"rf.min_leaf", std::to_string(train.rf.min_leaf)},
      {"rf.seed", std::to_string(train.rf.seed)},
      {"svm.c", num(train.svm.c)},
      {"svm.max_epochs", std::to_string(train.svm.max_epochs)},
      {"svm.tolerance", num(train.svm.tolerance)},
      {"svm.seed", std::to_string(train.svm.seed)},
      {"experiments.algorithms", algs},
      {"eval.k", std::to_string(eval_k)},
      {"exp1.groups", groups},
      {"exp1.classes", classes_str(exp1.classes)},
      {"exp1.n_per_class", std::to_string(exp1.n_per_class)},
      {"exp1.resamples", std::to_string(exp1.resamples)},
      {"exp1.k", std::to_string(exp1.k)},
      {"exp2.source_group", exp2.source_group},
      {"exp2.target_groups", targets},
      {"exp3.classes", classes_str(exp3.classes)},
      {"exp3.min_words", std::to_string(exp3.min_words)},
      {"exp3.n_per_class", std::to_string(exp3.n_per_class)},
      {"exp3.resamples", std::to_string(exp3.resamples)},
      {"exp3.k", std::to_string(exp3.k)},
      {"gen.n_cases", std::to_string(gen.n_cases)},
      {"gen.lines_per_case", std::to_string(gen.lines_per_case.first) + ".." + std::to_string(gen.lines_per_case.second)},
      {"gen.coders_per_case", std::to_string(gen.coders_per_case.first) + ".." + std::to_string(gen.coders_per_case.second)},
      {"gen.disagreement_rate", num(gen.disagreement_rate)},
      {"gen.context_signal_rate", num(gen.context_signal_rate)},
      {"gen.signal_rate", num(gen.signal_rate)},
      {"gen.context_term_rate", num(gen.context_term_rate)},
      {"gen.adjacency_rate", num(gen.adjacency_rate)},
      {"gen.patient_code_rate", num(gen.patient_code_rate)},
      {"gen.length_mixture", mixture},
  };
  for (const auto& [code, n] : gen.per_code_target) {
    e.emplace_back("gen.target." + std::string(code_name(code)), std::to_string(n));
  }
  return e;
}

void RunConfig::write(std::ostream& out) const {
  for (const auto& [k, v] : entries()) out << k << " = " << v << '\n';
}

}  // namespace pcc
