#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pcc/error.hpp"
#include "pcc/experiments.hpp"
#include "support.hpp"

using namespace pcc;
using namespace pcc::test;
namespace fs = std::filesystem;

namespace {

Exp1Config small_exp1() {
  Exp1Config c;
  c.n_per_class = 20;
  c.resamples = 2;
  c.k = 5;
  c.seed = 3;
  return c;
}

ExperimentContext context(std::vector<Learner> learners, Exec exec = Exec::Parallel) {
  ExperimentContext ctx;
  ctx.pool = &small_corpus().prepared;
  ctx.learners = std::move(learners);
  ctx.features = FeatureConfig{30};
  ctx.exec = exec;
  return ctx;
}

std::string strip_variant(const std::string& id) { return id.substr(0, id.rfind(':')); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

Learner never_right() {
  return Learner{"wrong", [](const Dataset& d, std::uint64_t) -> Predictor {
                   const auto classes = d.classes;
                   return [classes](const Example& e) {
                     return e.label == classes[0] ? classes[1] : classes[0];
                   };
                 }};
}

}  // namespace

TEST_CASE("exp1 grid shape") {
  const auto cfg = small_exp1();
  const auto rep = run_exp1(context({make_learner(Algorithm::NaiveBayes, {}), oracle_learner()}), cfg);
  CHECK(rep.cells.size() == 3 * 2 * 2);
  for (const auto& c : rep.cells) {
    CHECK(c.report.records.size() == 140);
    CHECK(c.report.accuracy() >= 0.0);
    CHECK(c.report.accuracy() <= 1.0);
    CHECK(c.report.scores.micro_f1 == c.report.accuracy());
  }
  CHECK(rep.cells[0].name() == "A_NB_r1");
  CHECK(rep.cells.back().name() == "C_oracle_r2");
  for (const auto& a : rep.aggregates()) {
    CHECK(a.min <= a.mean + 1e-15);
    CHECK(a.mean <= a.max + 1e-15);
  }
  CHECK(rep.aggregate("B", "oracle").mean == 1.0);
}

TEST_CASE("exp1 shares samples across algorithms") {
  const auto rep = run_exp1(context({oracle_learner(), constant_learner(Code::NotCoded)}), small_exp1());
  // cells: group-major, then learner, then resample
  for (std::size_t g = 0; g < 3; ++g) {
    for (std::size_t r = 0; r < 2; ++r) {
      const auto& a = rep.cells[g * 4 + r].report.records;
      const auto& b = rep.cells[g * 4 + 2 + r].report.records;
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].fold == b[i].fold);
      }
    }
  }
}

TEST_CASE("exp1 config validation") {
  auto c = small_exp1();
  c.groups = {{"A", 3}, {"B", 3}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_exp1();
  c.classes.push_back(Code::DoubFram);
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_exp1();
  c.k = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  Exp3Config e3;
  e3.classes = experiment_classes();
  CHECK_THROWS_AS(e3.validate(), ConfigError);
}

TEST_CASE("exp1 reports starvation") {
  auto c = small_exp1();
  c.n_per_class = 100000;
  CHECK_THROWS_AS(run_exp1(context({oracle_learner()}), c), DataError);
}

TEST_CASE("exp2 with an always-correct learner tracks everything") {
  Exp2Config cfg;
  cfg.base = small_exp1();
  const auto rep = run_exp2(context({oracle_learner()}), cfg);
  CHECK(rep.cells.size() == 2 * 1 * 2);
  for (const auto& c : rep.cells) {
    CHECK(c.tracked == 140);  // capped at n_per_class for every class
    REQUIRE(c.tracked_rate());
    CHECK(*c.tracked_rate() == 1.0);
  }
  CHECK(rep.notes.empty());
}

TEST_CASE("exp2 datasets hold exactly n distinct lines per class") {
  Exp2Config cfg;
  cfg.base = small_exp1();
  const auto rep = run_exp2(context({make_learner(Algorithm::NaiveBayes, {})}), cfg);
  for (const auto& c : rep.cells) {
    std::set<std::string> ids;
    std::map<Code, int> per;
    for (const auto& r : c.report.records) {
      ids.insert(r.id);
      ++per[r.truth];
    }
    CHECK(ids.size() == 140);
    for (Code k : experiment_classes()) CHECK(per[k] == 20);
    CHECK(c.tracked > 0);
    CHECK(c.tracked <= 140);
  }
}

TEST_CASE("exp2 with nothing correct omits the tracked rate") {
  Exp2Config cfg;
  cfg.base = small_exp1();
  const auto rep = run_exp2(context({never_right()}), cfg);
  for (const auto& c : rep.cells) CHECK_FALSE(c.tracked_rate());
  CHECK(rep.notes.size() == rep.cells.size());
  for (const auto& a : rep.aggregates()) CHECK_FALSE(a.tracked_mean);
}

TEST_CASE("exp3 pairs the two variants") {
  Exp3Config cfg;
  cfg.n_per_class = 20;
  cfg.resamples = 2;
  cfg.k = 5;
  const auto rep = run_exp3(context({make_learner(Algorithm::NaiveBayes, {})}), cfg);
  REQUIRE(rep.cells.size() == 4);
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& s = rep.cells[r];
    const auto& w = rep.cells[2 + r];
    CHECK(s.condition == "single");
    CHECK(w.condition == "with_context");
    REQUIRE(s.report.records.size() == 120);
    REQUIRE(w.report.records.size() == 120);
    for (std::size_t i = 0; i < 120; ++i) {
      CHECK(strip_variant(s.report.records[i].id) == strip_variant(w.report.records[i].id));
      CHECK(s.report.records[i].fold == w.report.records[i].fold);
    }
  }
  const double d = context_delta(rep, "NB");
  CHECK(d == doctest::Approx(rep.aggregate("with_context", "NB").mean - rep.aggregate("single", "NB").mean));
}

TEST_CASE("experiment output is byte-identical across schedules") {
  const fs::path root = fs::temp_directory_path() / "pcc_exp_test";
  fs::remove_all(root);
  Exp2Config cfg;
  cfg.base = small_exp1();
  const std::vector<Learner> learners{make_learner(Algorithm::NaiveBayes, {}),
                                      make_learner(Algorithm::RandomForest, {})};
  write_experiment(root / "serial", run_exp2(context(learners, Exec::Serial), cfg));
  write_experiment(root / "parallel", run_exp2(context(learners, Exec::Parallel), cfg));
  const auto a = tree(root / "serial"), b = tree(root / "parallel");
  CHECK(a.size() == 2 + 8 * 3);  // grid, summary, three files per cell
  CHECK(a == b);
  CHECK(a.at("exp2/grid.csv").rfind("# experiment = exp2\n", 0) == 0);
  CHECK(a.count("exp2/cells/A_NB_r1/predictions.tsv") == 1);
  fs::remove_all(root);
}
