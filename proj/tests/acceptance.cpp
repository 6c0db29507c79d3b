// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "pcc/config.hpp"
#include "pcc/porter.hpp"
#include "pcc/random.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace pcc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << " first failure: " << what << ';';
      pass = false;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %2d %s (%.1fs)%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.detail.str().c_str());
  std::fflush(stdout);
}

std::string f3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Every report produced during the run, for the micro-F1 identity.
std::vector<const EvalReport*> all_reports;

void collect(const ExperimentReport& r) {
  for (const auto& c : r.cells) all_reports.push_back(&c.report);
}

ExperimentContext context_for(const PreparedPool& pool) {
  RunConfig cfg;
  cfg.finalize();
  ExperimentContext ctx;
  ctx.pool = &pool;
  for (auto a : cfg.algorithms) ctx.learners.push_back(make_learner(a, cfg.train));
  ctx.features = cfg.features;
  return ctx;
}

const std::vector<std::string> kAlgs = {"NB", "RF", "SVM"};

// ---------------------------------------------------------------------------
// Reference CART on dense data: exhaustive search, exact Gini comparison.

struct RefNode {
  int feature = -1;
  double threshold = 0.0;
  std::unique_ptr<RefNode> left, right;
  std::size_t label = 0;
};

using Dense = std::vector<std::vector<double>>;

std::unique_ptr<RefNode> ref_cart(const Dense& x, const std::vector<std::size_t>& y,
                                  const std::vector<std::size_t>& rows, std::size_t k) {
  auto node = std::make_unique<RefNode>();
  std::vector<long long> counts(k, 0);
  for (auto r : rows) ++counts[y[r]];
  node->label = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  if (std::count_if(counts.begin(), counts.end(), [](long long c) { return c > 0; }) <= 1) return node;

  // Minimize weighted Gini n_l*G_l + n_r*G_r, i.e. maximize
  // sum(l^2)/n_l + sum(r^2)/n_r, compared as fractions.
  bool found = false;
  long long best_num = 0, best_den = 1;
  int best_f = -1;
  double best_t = 0.0;
  for (std::size_t f = 0; f < x[0].size(); ++f) {
    std::vector<double> values;
    for (auto r : rows) values.push_back(x[r][f]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t v = 0; v + 1 < values.size(); ++v) {
      const double t = (values[v] + values[v + 1]) / 2.0;
      std::vector<long long> l(k, 0), rr(k, 0);
      long long nl = 0, nr = 0;
      for (auto r : rows) {
        if (x[r][f] <= t) ++l[y[r]], ++nl;
        else ++rr[y[r]], ++nr;
      }
      long long sl = 0, sr = 0;
      for (std::size_t c = 0; c < k; ++c) sl += l[c] * l[c], sr += rr[c] * rr[c];
      const long long num = sl * nr + sr * nl, den = nl * nr;
      const __int128 a = static_cast<__int128>(num) * best_den, b = static_cast<__int128>(best_num) * den;
      if (!found || a > b) {
        found = true;
        best_num = num, best_den = den, best_f = static_cast<int>(f), best_t = t;
      }
    }
  }
  if (!found) return node;
  std::vector<std::size_t> lrows, rrows;
  for (auto r : rows) (x[r][static_cast<std::size_t>(best_f)] <= best_t ? lrows : rrows).push_back(r);
  node->feature = best_f;
  node->threshold = best_t;
  node->left = ref_cart(x, y, lrows, k);
  node->right = ref_cart(x, y, rrows, k);
  return node;
}

std::size_t ref_predict(const RefNode* n, const std::vector<double>& x) {
  while (n->feature >= 0) n = x[static_cast<std::size_t>(n->feature)] <= n->threshold ? n->left.get() : n->right.get();
  return n->label;
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PCC_CLI) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Relative paths -> contents.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return out;
}

}  // namespace

int main() {
  const auto& corpus = test::default_corpus();
  const auto ctx = context_for(corpus.prepared);

  criterion(1, "uniform-random stub scores 0.143 +- 0.02 under the exp1 harness", [&](Outcome& o) {
    ExperimentContext stub = ctx;
    stub.learners = {Learner{"RANDOM", [](const Dataset& d, std::uint64_t seed) -> Predictor {
                               const auto classes = d.classes;
                               return [classes, seed](const Example& e) {
                                 return classes[derive_seed(seed, {hash_tag(e.id)}) % classes.size()];
                               };
                             }}};
    Exp1Config cfg;
    cfg.groups = {{"C", 5}};
    static ExperimentReport rep;
    rep = run_exp1(stub, cfg);
    collect(rep);
    long correct = 0, total = 0;
    for (const auto& c : rep.cells) {
      for (const auto& r : c.report.records) correct += r.truth == r.predicted, ++total;
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(total);
    o.detail << " pooled accuracy " << f3(acc) << " over " << total << " predictions;";
    o.require(std::abs(acc - 1.0 / 7.0) <= 0.02, "accuracy out of band");
    o.require(total == 7 * 190 * 4, "unexpected prediction count");
  });

  static ExperimentReport exp1, exp2, exp3, exp3_flat;

  criterion(3, "NB/RF/SVM beat random on group C (mean accuracy >= 0.40)", [&](Outcome& o) {
    exp1 = run_exp1(ctx, Exp1Config{});
    collect(exp1);
    for (const auto& a : kAlgs) {
      const double m = exp1.aggregate("C", a).mean;
      o.detail << ' ' << a << '=' << f3(m);
      o.require(m >= 0.40, a + " below 0.40");
    }
    o.detail << ';';
  });

  criterion(4, "exp1 accuracy C > A for every algorithm", [&](Outcome& o) {
    for (const auto& a : kAlgs) {
      const double ga = exp1.aggregate("A", a).mean, gb = exp1.aggregate("B", a).mean,
                   gc = exp1.aggregate("C", a).mean;
      o.detail << ' ' << a << " A=" << f3(ga) << " B=" << f3(gb) << " C=" << f3(gc) << " gap=" << f3(gc - ga);
      o.require(gc > ga, a + ": no positive C-A gap");
    }
    o.detail << ';';
  });

  criterion(5, "exp2 tracked-instance rate exceeds the group accuracy in A and B", [&](Outcome& o) {
    exp2 = run_exp2(ctx, Exp2Config{Exp1Config{}});
    collect(exp2);
    for (const auto& g : {"A", "B"}) {
      for (const auto& a : kAlgs) {
        const auto agg = exp2.aggregate(g, a);
        const double tracked = agg.tracked_mean.value_or(-1.0);
        o.detail << ' ' << g << '/' << a << " tracked=" << f3(tracked) << " overall=" << f3(agg.mean)
                 << " exp1=" << f3(exp1.aggregate(g, a).mean);
        o.require(agg.tracked_mean.has_value(), std::string(g) + "/" + a + ": nothing tracked");
        o.require(tracked > agg.mean, std::string(g) + "/" + a + ": tracked rate not above overall");
      }
    }
    o.detail << ';';
  });

  criterion(6, "exp3 context delta > 0 by default, |delta| <= 0.03 without planted context",
            [&](Outcome& o) {
              exp3 = run_exp3(ctx, Exp3Config{});
              collect(exp3);
              GenConfig flat_cfg = GenConfig::defaults();
              flat_cfg.context_signal_rate = 0.0;
              static const auto flat = test::ingest(generate(flat_cfg));
              exp3_flat = run_exp3(context_for(flat.prepared), Exp3Config{});
              collect(exp3_flat);
              for (const auto& a : kAlgs) {
                const double d = context_delta(exp3, a), z = context_delta(exp3_flat, a);
                o.detail << ' ' << a << " delta=" << f3(d) << " flat=" << f3(z);
                o.require(d > 0.0, a + ": no context gain");
                o.require(std::abs(z) <= 0.03, a + ": flat corpus delta too large");
              }
              o.detail << ';';
            });

  criterion(2, "micro-F1 equals accuracy on every report", [&](Outcome& o) {
    double worst = 0.0;
    for (const auto* r : all_reports) worst = std::max(worst, std::abs(r->scores.micro_f1 - r->scores.accuracy));
    o.detail << ' ' << all_reports.size() << " reports, max |diff| " << worst << ';';
    o.require(!all_reports.empty(), "no reports");
    o.require(worst < 1e-12, "micro-F1 differs from accuracy");
  });

  criterion(7, "Porter stemmer matches the reference vocabulary", [&](Outcome& o) {
    std::ifstream in(std::string(PCC_TEST_DATA) + "/porter_vocabulary.tsv");
    o.require(static_cast<bool>(in), "vocabulary file missing");
    std::size_t n = 0, bad = 0;
    std::string first_bad;
    for (std::string line; std::getline(in, line);) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      ++n;
      const std::string word = line.substr(0, tab), stem = line.substr(tab + 1);
      if (porter_stem(word) != stem) {
        if (bad++ == 0) first_bad = word + " -> " + porter_stem(word) + " (want " + stem + ")";
      }
    }
    o.detail << ' ' << n << " pairs, " << bad << " mismatches;";
    o.require(n >= 20000, "fewer than 20000 pairs");
    o.require(bad == 0, first_bad);
  });

  criterion(8, "chi-square matches direct evaluation on 200 tables", [&](Outcome& o) {
    Rng rng(8);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const long long a = rng.below(60), b = rng.below(60), c = rng.below(60), d = rng.below(60);
      const long double n = a + b + c + d, diff = static_cast<long double>(a) * d - static_cast<long double>(b) * c;
      const long double den = static_cast<long double>(a + b) * (c + d) * (a + c) * (b + d);
      const double want = den == 0 ? 0.0 : static_cast<double>(n * diff * diff / den);
      const double got = chi_square(a, b, c, d);
      if (den == 0) o.require(got == 0.0, "degenerate table not zero");
      worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
    }
    for (auto [a, b, c, d] : std::vector<std::array<long long, 4>>{
             {0, 0, 3, 4}, {3, 4, 0, 0}, {0, 5, 0, 6}, {5, 0, 6, 0}, {0, 0, 0, 0}, {7, 0, 0, 0}}) {
      o.require(chi_square(a, b, c, d) == 0.0, "degenerate marginal not exactly zero");
    }
    o.detail << " max error " << worst << ';';
    o.require(worst <= 1e-9, "chi-square mismatch");
  });

  criterion(9, "naive Bayes posteriors match the hand computation", [&](Outcome& o) {
    // A: (2,1,0) (1,0,0) (0,1,0)  -> P(f|A) = 4/8 3/8 1/8, prior 3/4
    // B: (0,1,3)                  -> P(f|B) = 1/7 2/7 4/7, prior 1/4
    using test::example;
    const auto data = Dataset::from({example(3, {{0, 2}, {1, 1}}, Code::FurQol, "a1"),
                                     example(3, {{0, 1}}, Code::FurQol, "a2"),
                                     example(3, {{1, 1}}, Code::FurQol, "a3"),
                                     example(3, {{1, 1}, {2, 3}}, Code::SurvTime, "b1")},
                                    3);
    const auto nb = NaiveBayesModel::train(data, NaiveBayesParams{1.0});
    struct Case {
      std::vector<SparseEntry> x;
      double p_a;
    };
    const std::vector<Case> cases = {
        {{{0, 1}, {2, 1}}, 147.0 / 211.0},   // 3/64 vs 1/49
        {{{2, 2}}, 147.0 / 1171.0},          // 3/256 vs 4/49
        {{{0, 1}, {1, 1}}, 882.0 / 946.0},   // 9/64 vs 1/98
        {{}, 0.75},
    };
    double worst = 0.0, worst_sum = 0.0;
    for (const auto& c : cases) {
      const auto p = nb.posterior(test::sparse(3, c.x));
      worst = std::max({worst, std::abs(p[0] - c.p_a), std::abs(p[1] - (1.0 - c.p_a))});
      worst_sum = std::max(worst_sum, std::abs(p[0] + p[1] - 1.0));
    }
    o.detail << " max error " << worst << ", max |sum-1| " << worst_sum << ';';
    o.require(worst <= 1e-9, "posterior mismatch");
    o.require(worst_sum <= 1e-9, "posteriors do not sum to 1");
  });

  criterion(10, "single full-feature tree without bootstrap equals reference CART", [&](Outcome& o) {
    Rng rng(10);
    const std::vector<double> levels = {0.0, 0.0, 0.1, 0.25, 0.5, 0.5, 0.9, 1.0};
    std::size_t checked = 0, mismatched = 0;
    for (int t = 0; t < 50; ++t) {
      const std::size_t n = 12 + rng.below(40), dim = 2 + rng.below(6), k = 2 + rng.below(3);
      Dense x(n, std::vector<double>(dim));
      std::vector<std::size_t> y(n);
      std::vector<Example> ex;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = i < k ? i : rng.below(k);
        std::vector<SparseEntry> e;
        for (std::size_t f = 0; f < dim; ++f) {
          x[i][f] = rng.pick(levels);
          if (x[i][f] != 0.0) e.push_back({static_cast<std::uint32_t>(f), x[i][f]});
        }
        ex.push_back(test::example(dim, e, kAllCodes[y[i]], "x" + std::to_string(i)));
      }
      const auto data = Dataset::from(ex, dim);
      ForestParams params;
      params.n_trees = 1;
      params.bootstrap = false;
      params.features_per_split = static_cast<int>(dim);
      params.seed = rng.next();
      const auto forest = ForestModel::train(data, params);
      std::vector<std::size_t> rows(n);
      for (std::size_t i = 0; i < n; ++i) rows[i] = i;
      const auto ref = ref_cart(x, y, rows, k);

      Dense probes = x;
      for (int p = 0; p < 50; ++p) {
        std::vector<double> q(dim);
        for (auto& v : q) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
        probes.push_back(q);
      }
      for (const auto& q : probes) {
        std::vector<SparseEntry> e;
        for (std::size_t f = 0; f < dim; ++f) {
          if (q[f] != 0.0) e.push_back({static_cast<std::uint32_t>(f), q[f]});
        }
        ++checked;
        if (forest.predict(test::sparse(dim, e)) != kAllCodes[ref_predict(ref.get(), q)]) ++mismatched;
      }
    }
    o.detail << ' ' << checked << " predictions, " << mismatched << " mismatches;";
    o.require(mismatched == 0, "prediction mismatch");
  });

  criterion(11, "SVM separates separable data; dual objective never increases", [&](Outcome& o) {
    Rng rng(11);
    std::size_t bad_fit = 0, bad_obj = 0;
    for (int t = 0; t < 20; ++t) {
      const std::size_t dim = 2 + rng.below(8), n = 20 + rng.below(60);
      std::vector<double> w(dim);
      for (auto& v : w) v = rng.uniform() * 2 - 1;
      std::vector<Example> ex;
      while (ex.size() < n) {
        std::vector<SparseEntry> e;
        double s = 0.0;
        for (std::size_t f = 0; f < dim; ++f) {
          const double v = rng.uniform() * 2 - 1;
          e.push_back({static_cast<std::uint32_t>(f), v});
          s += v * w[f];
        }
        if (std::abs(s) < 0.2) continue;  // margin
        ex.push_back(test::example(dim, e, s > 0 ? Code::OpenDoor : Code::PallCare, "s" + std::to_string(ex.size())));
      }
      auto data = Dataset::from(ex, dim);
      if (data.classes.size() < 2) {
        --t;
        continue;
      }
      SvmParams params;
      params.c = 100.0;
      params.seed = rng.next();
      const auto svm = SvmModel::train(data, params);
      for (const auto& e : data.examples) bad_fit += svm.predict(e.x) != e.label;
      const auto& obj = svm.pairs()[0].objective;
      for (std::size_t i = 1; i < obj.size(); ++i) {
        if (obj[i] > obj[i - 1] + 1e-12 * std::max(1.0, std::abs(obj[i - 1]))) ++bad_obj;
      }
    }
    o.detail << ' ' << bad_fit << " training errors, " << bad_obj << " objective increases;";
    o.require(bad_fit == 0, "training error on separable data");
    o.require(bad_obj == 0, "objective increased");
  });

  criterion(12, "folds are stratified and feature selection ignores the held-out fold", [&](Outcome& o) {
    Rng rng(12);
    for (int t = 0; t < 200; ++t) {
      const std::size_t n = 10 + rng.below(300), classes = 1 + rng.below(7);
      std::vector<Code> labels(n);
      for (auto& l : labels) l = kAllCodes[rng.below(classes)];
      const std::size_t k = 2 + rng.below(std::min<std::size_t>(n - 1, 12));
      const auto plan = stratified_folds(labels, k, rng.next());
      std::vector<std::size_t> seen(n, 0);
      for (std::size_t f = 0; f < k; ++f) {
        for (auto p : plan.folds[f]) ++seen[p], o.require(plan.fold_of[p] == f, "fold_of disagrees");
      }
      o.require(std::all_of(seen.begin(), seen.end(), [](std::size_t s) { return s == 1; }), "not a partition");
      for (Code c : kAllCodes) {
        std::vector<long> per(k, 0);
        for (std::size_t f = 0; f < k; ++f) {
          for (auto p : plan.folds[f]) per[f] += labels[p] == c;
        }
        o.require(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) <= 1,
                  "class imbalance above 1");
      }
    }

    const auto instances = instances_of(
        balanced_sample(test::small_corpus().prepared, experiment_classes(), 40, 1, 12), Variant::Single);
    std::vector<Code> labels;
    for (const auto& i : instances) labels.push_back(i.label);
    const auto plan = stratified_folds(labels, 10, 99);
    const FeatureConfig fc{25};
    for (int s = 0; s < 20; ++s) {
      const std::size_t fold = rng.below(10);
      const std::size_t drop = plan.folds[fold][rng.below(plan.folds[fold].size())];
      const auto before = fold_features(instances, plan, fold, fc);

      std::vector<Instance> fewer = instances;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(drop));
      FoldPlan reduced;
      reduced.k = plan.k;
      reduced.seed = plan.seed;
      reduced.folds.resize(plan.k);
      for (std::size_t p = 0; p < instances.size(); ++p) {
        if (p == drop) continue;
        const std::size_t q = p > drop ? p - 1 : p;
        reduced.fold_of.push_back(plan.fold_of[p]);
        reduced.folds[plan.fold_of[p]].push_back(q);
      }
      const auto after = fold_features(fewer, reduced, fold, fc);
      o.require(before.vocabulary == after.vocabulary && before.features == after.features,
                "held-out deletion changed the fold's features");
    }
    o.detail << " 200 plans, 20 leakage spot checks;";
  });

  criterion(13, "exp1+exp2+exp3 output trees are byte-identical across --jobs", [&](Outcome& o) {
    const fs::path root = fs::temp_directory_path() / "pcc_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    const auto data = (root / "data").string();
    o.require(run_cli("--out " + data + " gen-corpus", root / "gen.log") == 0, "gen-corpus failed");
    std::vector<std::map<std::string, std::string>> trees;
    for (int jobs : {1, 4}) {
      const auto out = (root / ("out" + std::to_string(jobs))).string();
      for (const char* cmd : {"exp1", "exp2", "exp3"}) {
        const auto args = "--data " + data + " --out " + out + " --jobs " + std::to_string(jobs) + " " + cmd;
        o.require(run_cli(args, root / (std::string(cmd) + ".log")) == 0, std::string(cmd) + " failed");
      }
      trees.push_back(tree(out));
    }
    std::size_t differ = 0;
    for (const auto& [path, content] : trees[0]) {
      auto it = trees[1].find(path);
      differ += it == trees[1].end() || it->second != content;
    }
    o.detail << ' ' << trees[0].size() << " files, " << differ << " differ;";
    o.require(trees[0].size() > 3 && trees[0].size() == trees[1].size(), "file sets differ");
    o.require(differ == 0, "file contents differ");
    if (o.pass) fs::remove_all(root);
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
