#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace pcc {

/// Prognosis communication codes plus the derived NotCoded sentinel.
///
/// Declaration order is significant: every classifier breaks ties by it.
enum class Code : std::uint8_t {
  CancKnowl,
  OpenDoor,
  UnderSProg,
  ChgforWorse,
  FurQol,
  PallCare,
  AdvDirect,
  Curability,
  SurvTime,
  BestWorstCase,
  DoubFram,
  NotCoded,
};

inline constexpr std::size_t kCodeCount = 12;

inline constexpr std::array<Code, kCodeCount> kAllCodes = {
    Code::CancKnowl,  Code::OpenDoor, Code::UnderSProg,    Code::ChgforWorse,
    Code::FurQol,     Code::PallCare, Code::AdvDirect,     Code::Curability,
    Code::SurvTime,   Code::BestWorstCase, Code::DoubFram, Code::NotCoded,
};

constexpr std::size_t code_index(Code c) { return static_cast<std::size_t>(c); }

std::string_view code_name(Code c);

/// Case-sensitive; accepts all twelve names including NotCoded.
std::optional<Code> parse_code(std::string_view name);

/// Case-sensitive; accepts only the eleven manual codes (never NotCoded).
std::optional<Code> parse_manual_code(std::string_view name);

/// True for codes that only apply to the physician's side of the dialogue.
constexpr bool physician_only(Code c) {
  return c == Code::CancKnowl || c == Code::OpenDoor || c == Code::UnderSProg;
}

/// The six codes frequent enough to classify.
std::vector<Code> experiment_codes();

/// experiment_codes() plus NotCoded.
std::vector<Code> experiment_classes();

/// Sorts and deduplicates by declaration order.
std::vector<Code> canonical_classes(std::vector<Code> classes);

}  // namespace pcc
