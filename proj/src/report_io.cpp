#include "pcc/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pcc {

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

void write_echo_comments(std::ostream& out, const Echo& echo) {
  for (const auto& [k, v] : echo) out << "# " << k << " = " << v << '\n';
}

void write_echo_table(std::ostream& out, const Echo& echo) {
  out << "| key | value |\n|---|---|\n";
  for (const auto& [k, v] : echo) out << "| " << k << " | " << v << " |\n";
}

void write_confusion_csv(std::ostream& out, const EvalReport& report) {
  out << "true\\pred";
  for (Code c : report.classes) out << ',' << code_name(c);
  out << '\n';
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    out << code_name(report.classes[i]);
    for (long n : report.confusion[i]) out << ',' << n;
    out << '\n';
  }
}

void write_predictions_tsv(std::ostream& out, const EvalReport& report) {
  out << "id\ttrue\tpred\tfold\n";
  for (const auto& r : report.records) {
    out << r.id << '\t' << code_name(r.truth) << '\t' << code_name(r.predicted) << '\t' << r.fold
        << '\n';
  }
}

void write_eval_summary(std::ostream& out, const EvalReport& report, const std::string& title) {
  out << "# " << title << "\n\n";
  out << "instances: " << report.records.size() << "\n\n";
  out << "| metric | value |\n|---|---|\n";
  out << "| accuracy | " << fixed(report.scores.accuracy) << " |\n";
  out << "| micro_f1 | " << fixed(report.scores.micro_f1) << " |\n";
  out << "| macro_f1 | " << fixed(report.scores.macro_f1) << " |\n\n";
  out << "| class | precision | recall | f1 |\n|---|---|---|---|\n";
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto& s = report.scores.per_class[i];
    out << "| " << code_name(report.classes[i]) << " | " << fixed(s.precision) << " | "
        << fixed(s.recall) << " | " << fixed(s.f1) << " |\n";
  }
  out << "\n## Configuration\n\n";
  write_echo_table(out, report.echo);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

void write_eval_report(const std::filesystem::path& dir, const EvalReport& report,
                       const std::string& title) {
  std::ostringstream confusion, predictions, summary;
  write_confusion_csv(confusion, report);
  write_predictions_tsv(predictions, report);
  write_eval_summary(summary, report, title);
  write_file(dir / "confusion.csv", confusion.str());
  write_file(dir / "predictions.tsv", predictions.str());
  write_file(dir / "summary.md", summary.str());
}

}  // namespace pcc
