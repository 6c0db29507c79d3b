#include "pcc/code.hpp"

#include <algorithm>

namespace pcc {

namespace {

constexpr std::array<std::string_view, kCodeCount> kNames = {
    "CancKnowl", "OpenDoor",   "UnderSProg", "ChgforWorse",
    "FurQol",    "PallCare",   "AdvDirect",  "Curability",
    "SurvTime",  "BestWorstCase", "DoubFram", "NotCoded",
};

}  // namespace

std::string_view code_name(Code c) { return kNames[code_index(c)]; }

std::optional<Code> parse_code(std::string_view name) {
  for (Code c : kAllCodes) {
    if (kNames[code_index(c)] == name) return c;
  }
  return std::nullopt;
}

std::optional<Code> parse_manual_code(std::string_view name) {
  auto c = parse_code(name);
  if (c && *c == Code::NotCoded) return std::nullopt;
  return c;
}

std::vector<Code> experiment_codes() {
  return {Code::ChgforWorse, Code::FurQol,     Code::PallCare,
          Code::AdvDirect,   Code::Curability, Code::SurvTime};
}

std::vector<Code> experiment_classes() {
  auto v = experiment_codes();
  v.push_back(Code::NotCoded);
  return v;
}

std::vector<Code> canonical_classes(std::vector<Code> classes) {
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

}  // namespace pcc
