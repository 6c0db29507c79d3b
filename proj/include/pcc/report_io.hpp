#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pcc/evaluation.hpp"

namespace pcc {

using Echo = std::vector<std::pair<std::string, std::string>>;

/// Fixed-point with `digits` decimals, locale independent.
std::string fixed(double value, int digits = 4);

/// `# key = value` lines.
void write_echo_comments(std::ostream& out, const Echo& echo);
/// Markdown table of the echo.
void write_echo_table(std::ostream& out, const Echo& echo);

/// `true\pred,<classes...>` header, one row per true class.
void write_confusion_csv(std::ostream& out, const EvalReport& report);
/// `id<TAB>true<TAB>pred<TAB>fold`, dataset order.
void write_predictions_tsv(std::ostream& out, const EvalReport& report);
void write_eval_summary(std::ostream& out, const EvalReport& report, const std::string& title);

/// confusion.csv, predictions.tsv and summary.md under `dir` (created).
void write_eval_report(const std::filesystem::path& dir, const EvalReport& report,
                       const std::string& title);

/// Writes `content` to `path`, creating parent directories. Throws
/// std::runtime_error when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace pcc
