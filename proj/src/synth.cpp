#include "pcc/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "pcc/error.hpp"
#include "pcc/random.hpp"

namespace pcc {

namespace {

// Signal terms grow out of the coding manual's example sentences; context
// terms are the kind of talk that leads up to such a line.
const std::vector<CodeLexicon>& lexicon_table() {
  static const std::vector<CodeLexicon> table = {
      {Code::CancKnowl,
       {"tell", "understand", "cancer", "knowledge", "aware", "diagnosis", "stage", "explain",
        "biopsy", "located", "tumour", "malignant"},
       {"referral", "pathology", "oncologist", "records", "history", "surgeon"}},
      {Code::OpenDoor,
       {"future", "holds", "prognosis", "wondering", "curious", "information", "questions",
        "details", "prefer", "discuss", "outlook", "openly"},
       {"sometimes", "people", "common", "worry", "ask", "wonder"}},
      {Code::UnderSProg,
       {"prognosis", "understanding", "expect", "sense", "picture", "told", "understood",
        "grasp", "comprehend", "impression", "meaning", "situation"},
       {"earlier", "mentioned", "conversation", "visit", "previous", "recall"}},
      {Code::ChgforWorse,
       {"progressing", "disease", "worse", "growing", "elevated", "markers", "spreading",
        "bigger", "failing", "declining", "lesions", "advanced", "metastases", "trajectory"},
       {"orders", "inkling", "radiology", "imaging", "ct", "findings", "compared", "baseline",
        "measurements", "reviewed"}},
      {Code::FurQol,
       {"road", "energy", "socialize", "tired", "activities", "weaker", "independence",
        "hobbies", "enjoy", "strength", "mobility", "fatigue", "everyday", "likely"},
       {"garden", "grandchildren", "travel", "walking", "friends", "church", "cooking",
        "fishing", "golf", "knitting"}},
      {Code::PallCare,
       {"comfort", "palliative", "hospice", "stopping", "focusing", "relief", "gentle",
        "peaceful", "considering", "quality", "symptom", "nursing", "caregivers", "easing"},
       {"exhausted", "rough", "tough", "burden", "struggle", "hard", "difficult", "enough",
        "overwhelmed", "suffering"}},
      {Code::AdvDirect,
       {"attorney", "directives", "resuscitate", "ventilator", "wishes", "proxy", "document",
        "lifesupport", "intubation", "healthcare", "legal", "decisions", "forms", "signed"},
       {"lawyer", "estate", "papers", "sister", "brother", "son", "relatives", "planning",
        "notary", "sign"}},
      {Code::Curability,
       {"cure", "curable", "rid", "completely", "remission", "eliminate", "permanently",
        "control", "controllable", "treatable", "eradicate", "cured", "gone", "chronic"},
       {"chemotherapy", "regimen", "cycles", "response", "surgery", "goal", "option",
        "radiation", "targeted", "immunotherapy"}},
      {Code::SurvTime,
       {"christmas", "months", "weeks", "survival", "expectancy", "estimate", "birthday",
        "summer", "year", "timeframe", "remaining", "longer", "spring", "holidays"},
       {"calendar", "wedding", "graduation", "anniversary", "reunion", "vacation", "celebration",
        "thanksgiving", "trip", "event"}},
      {Code::BestWorstCase,
       {"best", "worst", "scenario", "case", "range", "survive", "middle", "typical",
        "possibly", "outcomes"},
       {"numbers", "average", "median", "curve", "data", "figures"}},
      {Code::DoubFram,
       {"research", "percent", "relapse", "chance", "odds", "statistics", "likelihood",
        "probability", "shows", "studies"},
       {"published", "journal", "trials", "patients", "evidence", "literature"}},
  };
  return table;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct Item {
  Code code;
  bool patient = false;
  int leadins = 0;
  bool adjacency = false;

  int cost() const { return 2 + leadins + (adjacency ? 1 : 0); }
};

struct Line {
  Speaker speaker;
  std::string text;
  Code code = Code::NotCoded;  // NotCoded: nobody codes this line
};

class CaseWriter {
 public:
  CaseWriter(const GenConfig& cfg, Rng& rng) : cfg_(cfg), rng_(rng) {}

  int draw_length() {
    std::vector<double> w;
    for (const auto& [n, weight] : cfg_.length_mixture) w.push_back(weight);
    return cfg_.length_mixture[rng_.weighted(w)].first;
  }

  // Sentence with `n` content words, each from `own` with probability
  // `own_rate` and from the shared filler otherwise.
  std::string sentence(const std::vector<std::string>* own, double own_rate, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) {
      const int fillers = static_cast<int>(rng_.below(3));
      for (int f = 0; f < fillers; ++f) append(s, rng_.pick(function_words()));
      if (rng_.bernoulli(0.04)) append(s, rng_.pick(numbers()));
      const bool from_own = own && rng_.bernoulli(own_rate);
      append(s, from_own ? rng_.pick(*own) : rng_.pick(filler_terms()));
      if (i + 1 < n && rng_.bernoulli(0.1)) s += ',';
    }
    if (rng_.bernoulli(0.3)) append(s, rng_.pick(function_words()));
    s += rng_.bernoulli(0.2) ? '?' : '.';
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
  }

  Line filler(Speaker who) { return {who, sentence(nullptr, 0.0, draw_length()), Code::NotCoded}; }

  std::vector<Line> segment(const Item& item) {
    std::vector<Line> out;
    const auto& lex = lexicon_for(item.code);
    if (item.patient) {
      out.push_back(filler(Speaker::Doctor));
      out.push_back({Speaker::Patient, sentence(&lex.signal_terms, cfg_.signal_rate, draw_length()),
                     item.code});
      return out;
    }
    out.push_back(filler(Speaker::Patient));
    if (item.adjacency) out.push_back(filler(Speaker::Doctor));
    for (int i = 0; i < item.leadins; ++i) {
      out.push_back({Speaker::Doctor,
                     sentence(&lex.context_terms, cfg_.context_term_rate, draw_length()),
                     Code::NotCoded});
    }
    out.push_back({Speaker::Doctor, sentence(&lex.signal_terms, cfg_.signal_rate, draw_length()),
                   item.code});
    return out;
  }

  std::vector<Line> filler_segment() {
    std::vector<Line> out{filler(Speaker::Patient), filler(Speaker::Doctor)};
    if (rng_.bernoulli(cfg_.adjacency_rate)) out.push_back(filler(Speaker::Doctor));
    return out;
  }

 private:
  static void append(std::string& s, const std::string& w) {
    if (!s.empty()) s += ' ';
    s += w;
  }

  static const std::vector<std::string>& numbers() {
    static const std::vector<std::string> n = {"2", "3", "6-12", "10", "70%", "2-3", "30"};
    return n;
  }

  const GenConfig& cfg_;
  Rng& rng_;
};

}  // namespace

const std::vector<CodeLexicon>& code_lexicons() { return lexicon_table(); }

const CodeLexicon& lexicon_for(Code c) {
  for (const auto& l : lexicon_table()) {
    if (l.code == c) return l;
  }
  throw std::invalid_argument("no lexicon for " + std::string(code_name(c)));
}

const std::vector<std::string>& filler_terms() {
  static const std::vector<std::string> words = {
      "okay",      "appointment", "morning",   "weekend",  "blood",     "pressure",
      "test",      "result",      "doctor",    "hallway",  "clinic",    "medicine",
      "pain",      "sleep",       "appetite",  "weight",   "scan",      "sandwich",
      "question",  "family",      "daughter",  "husband",  "wife",      "drive",
      "insurance", "pharmacy",    "dose",      "pill",     "infusion",  "port",
      "nausea",    "number",      "count",     "platelet", "kidney",    "liver",
      "lung",      "bone",        "breath",    "cough",    "fever",     "infection",
      "antibiotic", "schedule",   "today",     "report",   "office",    "phone",
      "call",      "parking",     "lunch",     "water",    "feel",      "think",
      "see",       "look",        "go",        "get",      "start",     "right",
      "good",      "yeah",        "well",      "thing",    "lot",       "work",
      "home",      "day",         "night",     "house",    "car",       "dog",
      "weather",   "coffee",      "glad",      "thanks",   "tomorrow",  "bed",
      "eat",       "food",        "stomach",   "arm",      "leg",       "back",
      "headache",  "prescription", "refill",   "labs",     "chart",     "exam",
  };
  return words;
}

const std::vector<std::string>& function_words() {
  static const std::vector<std::string> words = {
      "the", "a", "and", "of", "your", "we", "it", "is", "that", "to", "with", "about",
      "you", "i", "so", "this", "can", "will", "be", "for", "have", "do", "what", "my",
      "are", "was", "there", "just", "if", "but", "on", "in", "at", "our", "they",
  };
  return words;
}

GenConfig GenConfig::defaults() {
  GenConfig c;
  for (Code code : experiment_codes()) c.per_code_target[code] = 700;
  for (Code code : {Code::CancKnowl, Code::OpenDoor, Code::UnderSProg, Code::BestWorstCase,
                    Code::DoubFram}) {
    c.per_code_target[code] = 40;
  }
  c.length_mixture = {{1, 0.20}, {2, 0.15}, {3, 0.12}, {4, 0.12},
                      {5, 0.12}, {6, 0.11}, {7, 0.10}, {8, 0.08}};
  return c;
}

void GenConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string("gen.") + name + " must lie in [0, 1]");
  };
  if (n_cases < 1) throw ConfigError("gen.n_cases must be positive");
  if (lines_per_case.first < 3 || lines_per_case.second < lines_per_case.first) {
    throw ConfigError("gen.lines_per_case must satisfy 3 <= min <= max");
  }
  if (coders_per_case.first < 1 || coders_per_case.second < coders_per_case.first) {
    throw ConfigError("gen.coders_per_case must satisfy 1 <= min <= max");
  }
  for (const auto& [code, n] : per_code_target) {
    if (code == Code::NotCoded) throw ConfigError("gen.target.NotCoded cannot be planted");
    if (n < 0) throw ConfigError("gen.target." + std::string(code_name(code)) + " must be >= 0");
  }
  prob(disagreement_rate, "disagreement_rate");
  prob(context_signal_rate, "context_signal_rate");
  prob(signal_rate, "signal_rate");
  prob(context_term_rate, "context_term_rate");
  prob(adjacency_rate, "adjacency_rate");
  prob(patient_code_rate, "patient_code_rate");
  if (length_mixture.empty()) throw ConfigError("gen.length_mixture is empty");
  double total = 0.0;
  for (const auto& [n, w] : length_mixture) {
    if (n < 1 || w < 0.0) throw ConfigError("gen.length_mixture needs counts >= 1 and weights >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("gen.length_mixture weights sum to zero");
}

std::vector<std::pair<std::string, std::string>> GenConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e = {
      {"gen.seed", std::to_string(seed)},
      {"gen.n_cases", std::to_string(n_cases)},
      {"gen.lines_per_case", std::to_string(lines_per_case.first) + ".." + std::to_string(lines_per_case.second)},
      {"gen.coders_per_case", std::to_string(coders_per_case.first) + ".." + std::to_string(coders_per_case.second)},
      {"gen.disagreement_rate", format_double(disagreement_rate)},
      {"gen.context_signal_rate", format_double(context_signal_rate)},
      {"gen.signal_rate", format_double(signal_rate)},
      {"gen.context_term_rate", format_double(context_term_rate)},
      {"gen.adjacency_rate", format_double(adjacency_rate)},
      {"gen.patient_code_rate", format_double(patient_code_rate)},
  };
  std::string mix;
  for (const auto& [n, w] : length_mixture) {
    if (!mix.empty()) mix += ',';
    mix += std::to_string(n) + ":" + format_double(w);
  }
  e.emplace_back("gen.length_mixture", mix);
  for (const auto& [code, n] : per_code_target) {
    e.emplace_back("gen.target." + std::string(code_name(code)), std::to_string(n));
  }
  return e;
}

GeneratedCorpus generate(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  std::vector<Item> items;
  for (const auto& [code, target] : cfg.per_code_target) {
    for (int i = 0; i < target; ++i) {
      Item it{code};
      if (rng.bernoulli(cfg.context_signal_rate)) it.leadins = rng.between(1, 3);
      it.adjacency = rng.bernoulli(cfg.adjacency_rate);
      items.push_back(it);
    }
    if (!physician_only(code)) {
      const int extra = static_cast<int>(target * cfg.patient_code_rate + 0.5);
      for (int i = 0; i < extra; ++i) items.push_back(Item{code, true});
    }
  }
  rng.shuffle(items);

  const auto n_cases = static_cast<std::size_t>(cfg.n_cases);
  std::vector<int> budget(n_cases);
  std::vector<int> coders(n_cases);
  for (std::size_t c = 0; c < n_cases; ++c) {
    budget[c] = rng.between(cfg.lines_per_case.first, cfg.lines_per_case.second) - 1;  // greeting
    coders[c] = rng.between(cfg.coders_per_case.first, cfg.coders_per_case.second);
  }

  std::vector<std::vector<Item>> assigned(n_cases);
  for (std::size_t j = 0; j < items.size(); ++j) {
    bool placed = false;
    for (std::size_t step = 0; step < n_cases && !placed; ++step) {
      const std::size_t c = (j + step) % n_cases;
      if (budget[c] >= items[j].cost()) {
        budget[c] -= items[j].cost();
        assigned[c].push_back(items[j]);
        placed = true;
      }
    }
    if (!placed) {
      throw ConfigError("infeasible generator config: " + std::to_string(items.size()) +
                        " planted lines do not fit in " + std::to_string(cfg.n_cases) +
                        " cases of at most " + std::to_string(cfg.lines_per_case.second) + " lines");
    }
  }

  std::ostringstream tr, an, co;
  tr << kTranscriptsHeader << '\n';
  an << kAnnotationsHeader << '\n';
  co << kCodersHeader << '\n';
  CaseWriter writer(cfg, rng);
  const auto exp_codes = experiment_codes();

  for (std::size_t c = 0; c < n_cases; ++c) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof id_buf, "case%04zu", c + 1);
    const std::string case_id = id_buf;
    co << case_id << '\t' << coders[c] << '\n';

    std::vector<std::vector<Line>> segments;
    for (const auto& it : assigned[c]) segments.push_back(writer.segment(it));
    while (budget[c] >= 2) {
      auto seg = writer.filler_segment();
      if (static_cast<int>(seg.size()) > budget[c]) seg.resize(2);
      budget[c] -= static_cast<int>(seg.size());
      segments.push_back(std::move(seg));
    }
    rng.shuffle(segments);

    std::vector<Line> lines{writer.filler(Speaker::Doctor)};
    for (auto& seg : segments) {
      for (auto& l : seg) lines.push_back(std::move(l));
    }

    for (std::size_t i = 0; i < lines.size(); ++i) {
      const int line_no = static_cast<int>(i) + 1;
      tr << case_id << '\t' << line_no << '\t' << speaker_token(lines[i].speaker) << '\t'
         << lines[i].text << '\n';
      if (lines[i].code == Code::NotCoded) continue;

      const int n = coders[c];
      std::vector<std::pair<int, Code>> rows;
      std::vector<bool> chose(static_cast<std::size_t>(n), false);
      for (int k = 0; k < n; ++k) chose[static_cast<std::size_t>(k)] = rng.bernoulli(0.6);
      if (std::none_of(chose.begin(), chose.end(), [](bool b) { return b; })) {
        chose[rng.below(static_cast<std::size_t>(n))] = true;
      }
      for (int k = 0; k < n; ++k) {
        if (chose[static_cast<std::size_t>(k)]) rows.emplace_back(k, lines[i].code);
      }
      if (rng.bernoulli(cfg.disagreement_rate)) {
        std::vector<Code> alternatives;
        for (Code e : exp_codes) {
          if (e != lines[i].code) alternatives.push_back(e);
        }
        std::vector<int> others;
        for (int k = 0; k < n; ++k) {
          if (!chose[static_cast<std::size_t>(k)]) others.push_back(k);
        }
        const int coder = others.empty() ? static_cast<int>(rng.below(static_cast<std::size_t>(n)))
                                         : rng.pick(others);
        rows.emplace_back(coder, rng.pick(alternatives));
      }
      std::sort(rows.begin(), rows.end());
      for (const auto& [k, code] : rows) {
        an << case_id << '\t' << line_no << "\tcoder" << (k + 1) << '\t' << code_name(code) << '\n';
      }
    }
  }
  return GeneratedCorpus{tr.str(), an.str(), co.str()};
}

void AuditReport::write(std::ostream& out) const {
  out << "class\ttotal\tusable";
  for (const auto& g : group_names) out << "\tgroup_" << g;
  out << "\twith_context\n";
  for (const auto& r : rows) {
    out << code_name(r.code) << '\t' << r.total << '\t' << r.usable;
    for (auto n : r.group_counts) out << '\t' << n;
    out << '\t' << r.with_context << '\n';
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", context_availability);
  out << "context_availability\t" << buf << '\n';
  out << "status\t" << (passed ? "PASS" : "FAIL") << '\n';
  for (const auto& f : failures) out << "failure\t" << f << '\n';
}

AuditReport audit(const PreparedPool& prepared, const InstancePool& pool, const AuditSpec& spec) {
  AuditReport rep;
  for (const auto& [name, n] : spec.groups) rep.group_names.push_back(name);
  std::size_t planted = 0, planted_with_context = 0;
  const auto exp_codes = experiment_codes();

  for (Code c : kAllCodes) {
    const bool requested = std::find(spec.classes.begin(), spec.classes.end(), c) != spec.classes.end();
    if (pool.size(c) == 0 && !requested) continue;
    AuditRow row;
    row.code = c;
    row.total = pool.size(c);
    for (const auto& line : prepared.bucket(c)) row.usable += line.single.usable() ? 1 : 0;
    for (const auto& [name, min_words] : spec.groups) {
      row.group_counts.push_back(prepared.eligible(c, min_words).size());
    }
    for (const auto& line : pool.bucket(c)) row.with_context += line.context.empty() ? 0 : 1;
    if (std::find(exp_codes.begin(), exp_codes.end(), c) != exp_codes.end()) {
      planted += row.total;
      planted_with_context += row.with_context;
    }
    if (requested) {
      for (std::size_t g = 0; g < spec.groups.size(); ++g) {
        if (row.group_counts[g] < spec.n_per_class) {
          rep.failures.push_back(std::string(code_name(c)) + " has " +
                                 std::to_string(row.group_counts[g]) + " instances in group " +
                                 spec.groups[g].first + ", needs " + std::to_string(spec.n_per_class));
        }
      }
    }
    rep.rows.push_back(std::move(row));
  }
  rep.context_availability =
      planted == 0 ? 0.0 : static_cast<double>(planted_with_context) / static_cast<double>(planted);
  if (!pool.has_context()) rep.failures.push_back("pool has no context attached");
  rep.passed = rep.failures.empty();
  return rep;
}

}  // namespace pcc
