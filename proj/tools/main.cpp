// pcc: generate, ingest, audit and evaluate coded transcript corpora.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pcc/config.hpp"
#include "pcc/error.hpp"
#include "pcc/experiments.hpp"
#include "pcc/random.hpp"
#include "pcc/report_io.hpp"
#include "pcc/synth.hpp"

namespace fs = std::filesystem;
using namespace pcc;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kData = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  std::string data_dir;
  std::string out_dir;
  std::vector<std::string> overrides;
  // subcommand arguments
  std::string audit_dir;
  bool dump = false;
  std::string algorithm = "NB";
  std::string group = "C";
  bool feature_report = false;
  bool model_dump = false;
};

RunConfig load_config(const Options& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg.read_file(o.config_path);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) cfg.seed = *o.seed;
  if (!o.data_dir.empty()) cfg.data_dir = o.data_dir;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  cfg.finalize();
  return cfg;
}

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot open " + p.string());
  return in;
}

struct Loaded {
  std::vector<Utterance> utterances;
  InstancePool pool;
};

Loaded load_pool(const RunConfig& cfg) {
  const fs::path dir = cfg.data_dir;
  Loaded l;
  auto tin = open_input(dir / cfg.transcripts);
  l.utterances = parse_transcripts(tin, (dir / cfg.transcripts).string());
  auto ain = open_input(dir / cfg.annotations);
  auto annotations = parse_annotations(ain, (dir / cfg.annotations).string());
  if (cfg.majority_filter) {
    auto cin = open_input(dir / cfg.coders);
    annotations = majority_filter(annotations, parse_coders(cin, (dir / cfg.coders).string()));
  }
  l.pool = attach_context(merge_and_dedup(l.utterances, annotations, cfg.scope), l.utterances,
                          cfg.context_mode);
  return l;
}

// Knobs recorded in reports. The output directory is left out so that two
// runs into different directories compare equal.
Echo report_echo(const RunConfig& cfg) {
  Echo e;
  for (auto& kv : cfg.entries()) {
    if (kv.first != "out.dir") e.push_back(std::move(kv));
  }
  return e;
}

std::vector<Learner> learners(const RunConfig& cfg) {
  std::vector<Learner> out;
  for (auto a : cfg.algorithms) out.push_back(make_learner(a, cfg.train));
  return out;
}

std::mutex log_mutex;

void log_line(const std::string& s) {
  std::lock_guard lock(log_mutex);
  std::cerr << s << '\n';
}

int cmd_gen_corpus(const RunConfig& cfg) {
  const auto corpus = generate(cfg.gen);
  const fs::path dir = cfg.out_dir;
  write_file(dir / "transcripts.tsv", corpus.transcripts);
  write_file(dir / "annotations.tsv", corpus.annotations);
  write_file(dir / "coders.tsv", corpus.coders);
  std::ostringstream echo;
  write_echo_comments(echo, cfg.gen.echo());
  write_file(dir / "generator.txt", echo.str());
  std::cerr << "wrote corpus to " << dir.string() << '\n';
  return kOk;
}

int cmd_ingest(const RunConfig& cfg, bool dump) {
  const auto loaded = load_pool(cfg);
  std::cout << "code\tlines\twith_context\n";
  for (Code c : kAllCodes) {
    std::size_t ctx = 0;
    for (const auto& l : loaded.pool.bucket(c)) ctx += l.context.empty() ? 0 : 1;
    std::cout << code_name(c) << '\t' << loaded.pool.size(c) << '\t' << ctx << '\n';
  }
  std::cout << "total\t" << loaded.pool.total() << '\n';
  if (dump) {
    const auto prepared = prepare_pool(loaded.pool, cfg.preprocess);
    for (Variant v : {Variant::Single, Variant::WithContext}) {
      std::vector<Instance> all;
      for (Code c : kAllCodes) {
        for (const auto& line : prepared.bucket(c)) all.push_back(line.variant(v));
      }
      std::ostringstream out;
      write_instance_dump(out, all);
      write_file(fs::path(cfg.out_dir) / "ingest" / ("instances_" + std::string(variant_name(v)) + ".tsv"),
                 out.str());
    }
  }
  return kOk;
}

int cmd_audit(RunConfig cfg, const std::string& dir) {
  if (!dir.empty()) cfg.data_dir = dir;
  const auto loaded = load_pool(cfg);
  const auto prepared = prepare_pool(loaded.pool, cfg.preprocess);
  AuditSpec spec;
  spec.classes = cfg.exp1.classes;
  spec.n_per_class = cfg.exp1.n_per_class;
  spec.groups.clear();
  for (const auto& g : cfg.exp1.groups) spec.groups.emplace_back(g.name, g.min_words);
  const auto report = audit(prepared, loaded.pool, spec);
  report.write(std::cout);
  if (!report.passed) {
    for (const auto& f : report.failures) std::cerr << "audit: " << f << '\n';
    return kData;
  }
  return kOk;
}

int cmd_eval(const RunConfig& cfg, const Options& o) {
  const auto alg = parse_algorithm(o.algorithm);
  if (!alg) throw ConfigError("unknown algorithm '" + o.algorithm + "'");
  const auto& group = cfg.exp1.group(o.group);
  const auto loaded = load_pool(cfg);
  const auto prepared = prepare_pool(loaded.pool, cfg.preprocess);
  const auto lines = balanced_sample(prepared, cfg.exp1.classes, cfg.exp1.n_per_class, group.min_words,
                                     derive_seed(cfg.seed, {hash_tag("eval-sample")}));
  const auto instances = instances_of(lines, Variant::Single);
  const auto learner = make_learner(*alg, cfg.train);
  auto report = cross_validate(learner, instances, cfg.eval_k, cfg.features, cfg.seed);
  Echo echo = report_echo(cfg);
  echo.emplace_back("eval.algorithm", std::string(algorithm_name(*alg)));
  echo.emplace_back("eval.group", group.name + ":" + std::to_string(group.min_words));
  echo.insert(echo.end(), report.echo.begin(), report.echo.end());
  report.echo = std::move(echo);

  const fs::path dir = fs::path(cfg.out_dir) / "eval" / (std::string(algorithm_name(*alg)) + "_" + group.name);
  write_eval_report(dir, report, "eval " + std::string(algorithm_name(*alg)) + " group " + group.name);

  if (o.feature_report || o.model_dump) {
    // Whole-sample features and model, for inspection.
    const auto vocab = build_vocabulary(instances);
    const auto features = select_features(instances, vocab, cfg.features.k_per_class);
    if (o.feature_report) {
      std::ostringstream out;
      write_feature_report(out, vocab, features);
      write_file(dir / "features.csv", out.str());
    }
    if (o.model_dump) {
      std::vector<Example> ex;
      for (const auto& inst : instances) ex.push_back(Example{vectorize(inst, vocab, features), inst.label, inst.id.str()});
      TrainParams p = cfg.train;
      p.rf.seed = derive_seed(p.rf.seed, {cfg.seed});
      p.svm.seed = derive_seed(p.svm.seed, {cfg.seed});
      const auto model = train(*alg, Dataset::from(std::move(ex), features.dim()), p);
      std::ostringstream out;
      dump_model(out, model);
      write_file(dir / "model.txt", out.str());
    }
  }
  std::cout << "accuracy\t" << fixed(report.scores.accuracy) << "\nmicro_f1\t"
            << fixed(report.scores.micro_f1) << "\nmacro_f1\t" << fixed(report.scores.macro_f1) << '\n';
  return kOk;
}

int cmd_experiment(const RunConfig& cfg, int which) {
  const auto loaded = load_pool(cfg);
  const auto prepared = prepare_pool(loaded.pool, cfg.preprocess);
  ExperimentContext ctx;
  ctx.pool = &prepared;
  ctx.learners = learners(cfg);
  ctx.features = cfg.features;
  ctx.echo = report_echo(cfg);
  ctx.log = log_line;
  ExperimentReport report;
  if (which == 1) report = run_exp1(ctx, cfg.exp1);
  else if (which == 2) report = run_exp2(ctx, cfg.exp2);
  else report = run_exp3(ctx, cfg.exp3);
  write_experiment(cfg.out_dir, report);
  for (const auto& n : report.notes) std::cerr << "note: " << n << '\n';
  std::ifstream summary(fs::path(cfg.out_dir) / report.name / "summary.md");
  std::cout << summary.rdbuf();
  return kOk;
}

// Collects the mean accuracy table of every experiment found under OUT.
int cmd_report(const RunConfig& cfg) {
  std::ostringstream md;
  md << "# Experiment report\n";
  bool any = false;
  for (const char* name : {"exp1", "exp2", "exp3"}) {
    const fs::path grid = fs::path(cfg.out_dir) / name / "grid.csv";
    std::ifstream in(grid);
    if (!in) continue;
    any = true;
    std::string line;
    std::vector<std::string> header;
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    std::vector<std::pair<std::string, std::string>> order;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line[0] == '#') continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
      if (header.empty()) {
        header = f;
        continue;
      }
      if (f.size() < 5) throw ParseError(grid.string(), row, "expected at least 5 fields");
      const auto key = std::make_pair(f[0], f[1]);
      if (!acc.contains(key)) order.push_back(key);
      auto& [sum, n] = acc[key];
      sum += std::stod(f[4]);
      ++n;
    }
    md << "\n## " << name << "\n\n| condition | algorithm | mean accuracy | cells |\n|---|---|---|---|\n";
    for (const auto& key : order) {
      const auto& [sum, n] = acc[key];
      md << "| " << key.first << " | " << key.second << " | " << fixed(sum / n) << " | " << n << " |\n";
    }
  }
  if (!any) throw DataError("no experiment output under " + cfg.out_dir);
  write_file(fs::path(cfg.out_dir) / "report.md", md.str());
  std::cout << md.str();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automatic coding of physician-patient transcripts"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "key = value config file");
  app.add_option("--seed", o.seed, "master seed (overrides the config file)");
  app.add_option("--jobs", o.jobs, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
  app.add_option("--data", o.data_dir, "corpus directory");
  app.add_option("--out", o.out_dir, "output directory");
  app.add_option("--set", o.overrides, "override one config key (KEY=VALUE)");

  auto* gen = app.add_subcommand("gen-corpus", "write a synthetic corpus to --out");
  auto* ingest = app.add_subcommand("ingest", "parse a corpus and print bucket sizes");
  ingest->add_flag("--dump", o.dump, "write preprocessed instances under --out/ingest");
  auto* aud = app.add_subcommand("audit", "check a corpus against the experiment requirements");
  aud->add_option("dir", o.audit_dir, "corpus directory (default: --data)");
  auto* eval = app.add_subcommand("eval", "cross-validate one algorithm on one group");
  eval->add_option("--algorithm", o.algorithm, "NB, RF or SVM");
  eval->add_option("--group", o.group, "length group");
  eval->add_flag("--features", o.feature_report, "also write the chi-square feature report");
  eval->add_flag("--model", o.model_dump, "also dump a model trained on the whole sample");
  auto* e1 = app.add_subcommand("exp1", "length groups A/B/C");
  auto* e2 = app.add_subcommand("exp2", "tracked instances in reconstructed datasets");
  auto* e3 = app.add_subcommand("exp3", "single lines vs lines with context");
  auto* rep = app.add_subcommand("report", "summarize experiment output under --out");
  for (auto* sub : {gen, ingest, aud, eval, e1, e2, e3, rep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (o.jobs > 0) set_thread_count(o.jobs);
    const RunConfig cfg = load_config(o);
    if (gen->parsed()) return cmd_gen_corpus(cfg);
    if (ingest->parsed()) return cmd_ingest(cfg, o.dump);
    if (aud->parsed()) return cmd_audit(cfg, o.audit_dir);
    if (eval->parsed()) return cmd_eval(cfg, o);
    if (e1->parsed()) return cmd_experiment(cfg, 1);
    if (e2->parsed()) return cmd_experiment(cfg, 2);
    if (e3->parsed()) return cmd_experiment(cfg, 3);
    if (rep->parsed()) return cmd_report(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
