#include "pcc/experiments.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pcc/error.hpp"
#include "pcc/random.hpp"

namespace pcc {

namespace {

std::string class_list(const std::vector<Code>& classes) {
  std::string s;
  for (Code c : classes) {
    if (!s.empty()) s += ',';
    s += code_name(c);
  }
  return s;
}

void check_classes(const std::vector<Code>& classes, const char* key) {
  if (classes.size() < 2) throw ConfigError(std::string(key) + " needs at least two classes");
  std::set<Code> seen(classes.begin(), classes.end());
  if (seen.size() != classes.size()) throw ConfigError(std::string(key) + " lists a class twice");
  const auto allowed = experiment_classes();
  for (Code c : classes) {
    if (std::find(allowed.begin(), allowed.end(), c) == allowed.end()) {
      throw ConfigError(std::string(key) + ": " + std::string(code_name(c)) +
                        " is too rare for the experiments");
    }
  }
}

void check_common(std::size_t n_per_class, std::size_t resamples, std::size_t k, const char* prefix) {
  const std::string p = prefix;
  if (n_per_class < 1) throw ConfigError(p + ".n_per_class must be positive");
  if (resamples < 1) throw ConfigError(p + ".resamples must be positive");
  if (k < 2) throw ConfigError(p + ".k must be at least 2");
}

void check_context(const ExperimentContext& ctx) {
  if (!ctx.pool) throw std::invalid_argument("experiment context has no pool");
  if (ctx.learners.empty()) throw std::invalid_argument("experiment context has no learners");
}

Echo merged_echo(const std::string& name, const Echo& config, const ExperimentContext& ctx) {
  Echo e{{"experiment", name}};
  e.insert(e.end(), config.begin(), config.end());
  std::string learners;
  for (const auto& l : ctx.learners) learners += (learners.empty() ? "" : ",") + l.name;
  e.emplace_back("learners", learners);
  auto add = [&e](const Echo& more) {
    for (const auto& kv : more) {
      const bool known = std::any_of(e.begin(), e.end(), [&](const auto& x) { return x.first == kv.first; });
      if (!known) e.push_back(kv);
    }
  };
  add(ctx.features.echo());
  add(ctx.pool->config().echo());
  add(ctx.echo);
  return e;
}

void log_cell(const ExperimentContext& ctx, const std::string& exp, const Cell& cell) {
  if (!ctx.log) return;
  std::string line = exp + " " + cell.name() + " accuracy=" + fixed(cell.report.accuracy());
  if (auto r = cell.tracked_rate()) line += " tracked=" + fixed(*r);
  ctx.log(line);
}

std::vector<Code> labels_of(const std::vector<Instance>& instances) {
  std::vector<Code> labels;
  labels.reserve(instances.size());
  for (const auto& i : instances) labels.push_back(i.label);
  return labels;
}

// Seeds for one (group, resample) of exp1. exp2 uses the same ones to
// reproduce the source-group cells.
struct Exp1Seeds {
  std::uint64_t sample, folds, cv;
};

Exp1Seeds exp1_seeds(std::uint64_t seed, const std::string& group, std::size_t r) {
  const auto g = hash_tag(group);
  return {derive_seed(seed, {hash_tag("sample"), g, r}), derive_seed(seed, {hash_tag("folds"), g, r}),
          derive_seed(seed, {hash_tag("cv"), g, r})};
}

struct Draw {
  std::vector<PreparedLine> lines;
  std::vector<Instance> instances;
  FoldPlan plan;
  std::uint64_t cv_seed = 0;
};

Draw exp1_draw(const PreparedPool& pool, const Exp1Config& cfg, const GroupSpec& g, std::size_t r) {
  const auto s = exp1_seeds(cfg.seed, g.name, r);
  Draw d;
  d.lines = balanced_sample(pool, cfg.classes, cfg.n_per_class, g.min_words, s.sample);
  d.instances = instances_of(d.lines, Variant::Single);
  d.plan = stratified_folds(labels_of(d.instances), cfg.k, s.folds);
  d.cv_seed = s.cv;
  return d;
}

}  // namespace

void Exp1Config::validate() const {
  if (groups.empty()) throw ConfigError("exp1.groups is empty");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].min_words < 1) throw ConfigError("exp1 group thresholds must be >= 1");
    if (i > 0 && groups[i].min_words <= groups[i - 1].min_words) {
      throw ConfigError("exp1 group thresholds must be strictly increasing");
    }
  }
  check_classes(classes, "exp1.classes");
  check_common(n_per_class, resamples, k, "exp1");
}

Echo Exp1Config::echo() const {
  std::string g;
  for (const auto& grp : groups) g += (g.empty() ? "" : ",") + grp.name + ":" + std::to_string(grp.min_words);
  return {{"exp1.groups", g},
          {"exp1.classes", class_list(classes)},
          {"exp1.n_per_class", std::to_string(n_per_class)},
          {"exp1.resamples", std::to_string(resamples)},
          {"exp1.k", std::to_string(k)},
          {"seed", std::to_string(seed)}};
}

const GroupSpec& Exp1Config::group(const std::string& name) const {
  for (const auto& g : groups) {
    if (g.name == name) return g;
  }
  throw ConfigError("unknown group '" + name + "'");
}

void Exp2Config::validate() const {
  base.validate();
  base.group(source_group);
  if (target_groups.empty()) throw ConfigError("exp2.target_groups is empty");
  for (const auto& t : target_groups) {
    const auto& g = base.group(t);
    if (g.min_words > base.group(source_group).min_words) {
      throw ConfigError("exp2 target group " + t + " is stricter than the source group");
    }
  }
}

Echo Exp2Config::echo() const {
  Echo e = base.echo();
  std::string t;
  for (const auto& g : target_groups) t += (t.empty() ? "" : ",") + g;
  e.emplace_back("exp2.source_group", source_group);
  e.emplace_back("exp2.target_groups", t);
  e.emplace_back("exp2.fill", "random");
  return e;
}

void Exp3Config::validate() const {
  check_classes(classes, "exp3.classes");
  if (std::find(classes.begin(), classes.end(), Code::NotCoded) != classes.end()) {
    throw ConfigError("exp3.classes must not include NotCoded");
  }
  if (min_words < 1) throw ConfigError("exp3.min_words must be >= 1");
  check_common(n_per_class, resamples, k, "exp3");
}

Echo Exp3Config::echo() const {
  return {{"exp3.classes", class_list(classes)},
          {"exp3.min_words", std::to_string(min_words)},
          {"exp3.n_per_class", std::to_string(n_per_class)},
          {"exp3.resamples", std::to_string(resamples)},
          {"exp3.k", std::to_string(k)},
          {"seed", std::to_string(seed)}};
}

std::string Cell::name() const {
  return condition + "_" + algorithm + "_r" + std::to_string(resample + 1);
}

std::optional<double> Cell::tracked_rate() const {
  if (tracked == 0) return std::nullopt;
  return static_cast<double>(tracked_correct) / static_cast<double>(tracked);
}

std::vector<Aggregate> ExperimentReport::aggregates() const {
  std::vector<Aggregate> out;
  std::vector<std::size_t> counts, tracked_counts;
  std::vector<double> tracked_sums;
  for (const auto& c : cells) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Aggregate& a) {
      return a.condition == c.condition && a.algorithm == c.algorithm;
    });
    const double acc = c.report.accuracy();
    if (it == out.end()) {
      out.push_back(Aggregate{c.condition, c.algorithm, 0.0, acc, acc, 0.0, std::nullopt});
      counts.push_back(0);
      tracked_counts.push_back(0);
      tracked_sums.push_back(0.0);
      it = out.end() - 1;
    }
    const auto i = static_cast<std::size_t>(it - out.begin());
    it->mean += acc;
    it->min = std::min(it->min, acc);
    it->max = std::max(it->max, acc);
    it->macro_f1_mean += c.report.scores.macro_f1;
    ++counts[i];
    if (auto r = c.tracked_rate()) {
      tracked_sums[i] += *r;
      ++tracked_counts[i];
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].mean /= static_cast<double>(counts[i]);
    out[i].macro_f1_mean /= static_cast<double>(counts[i]);
    if (tracked_counts[i] > 0) out[i].tracked_mean = tracked_sums[i] / static_cast<double>(tracked_counts[i]);
  }
  return out;
}

Aggregate ExperimentReport::aggregate(const std::string& condition,
                                      const std::string& algorithm) const {
  for (const auto& a : aggregates()) {
    if (a.condition == condition && a.algorithm == algorithm) return a;
  }
  throw std::out_of_range("no cells for " + condition + "/" + algorithm);
}

ExperimentReport run_exp1(const ExperimentContext& ctx, const Exp1Config& cfg) {
  check_context(ctx);
  cfg.validate();
  const auto& pool = *ctx.pool;
  const std::size_t G = cfg.groups.size(), L = ctx.learners.size(), R = cfg.resamples;

  std::vector<Draw> draws(G * R);
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t r = 0; r < R; ++r) draws[g * R + r] = exp1_draw(pool, cfg, cfg.groups[g], r);
  }

  ExperimentReport rep;
  rep.name = "exp1";
  rep.echo = merged_echo("exp1", cfg.echo(), ctx);
  rep.cells.resize(G * L * R);
  for_each_index(ctx.exec, rep.cells.size(), [&](std::size_t i) {
    const std::size_t g = i / (L * R), l = (i / R) % L, r = i % R;
    const auto& d = draws[g * R + r];
    Cell& cell = rep.cells[i];
    cell.condition = cfg.groups[g].name;
    cell.algorithm = ctx.learners[l].name;
    cell.resample = r;
    cell.report = cross_validate(ctx.learners[l], d.instances, d.plan, ctx.features, d.cv_seed, ctx.exec);
    cell.report.echo.emplace_back("cell.min_words", std::to_string(cfg.groups[g].min_words));
    log_cell(ctx, rep.name, cell);
  });
  return rep;
}

ExperimentReport run_exp2(const ExperimentContext& ctx, const Exp2Config& cfg) {
  check_context(ctx);
  cfg.validate();
  const auto& pool = *ctx.pool;
  const auto& base = cfg.base;
  const auto& source = base.group(cfg.source_group);
  const std::size_t L = ctx.learners.size(), R = base.resamples, T = cfg.target_groups.size();

  std::vector<Draw> draws(R);
  for (std::size_t r = 0; r < R; ++r) draws[r] = exp1_draw(pool, base, source, r);

  // Source-group runs, exactly as in exp1.
  std::vector<EvalReport> source_runs(L * R);
  for_each_index(ctx.exec, source_runs.size(), [&](std::size_t i) {
    const std::size_t l = i / R, r = i % R;
    source_runs[i] = cross_validate(ctx.learners[l], draws[r].instances, draws[r].plan, ctx.features,
                                    draws[r].cv_seed, ctx.exec);
  });

  ExperimentReport rep;
  rep.name = "exp2";
  rep.echo = merged_echo("exp2", cfg.echo(), ctx);
  rep.cells.resize(T * L * R);
  std::vector<std::string> notes(rep.cells.size());

  for_each_index(ctx.exec, rep.cells.size(), [&](std::size_t i) {
    const std::size_t t = i / (L * R), l = (i / R) % L, r = i % R;
    const auto& target = base.group(cfg.target_groups[t]);
    const auto& draw = draws[r];
    const auto& src = source_runs[l * R + r];

    // Tracked set per class, canonical order, capped at n_per_class.
    std::map<Code, std::vector<const PreparedLine*>> tracked;
    for (std::size_t j = 0; j < draw.lines.size(); ++j) {
      const auto& rec = src.records[j];
      if (rec.truth != rec.predicted) continue;
      auto& bucket = tracked[rec.truth];
      if (bucket.size() < base.n_per_class) bucket.push_back(&draw.lines[j]);
    }
    std::set<LineCodeKey> exclude;
    for (const auto& [c, lines] : tracked) {
      for (const auto* p : lines) exclude.insert(p->key);
    }

    const auto seed_path = {hash_tag("exp2"), hash_tag(target.name), hash_tag(ctx.learners[l].name),
                            static_cast<std::uint64_t>(r)};
    const auto fill_seed = derive_seed(derive_seed(base.seed, seed_path), {hash_tag("fill")});
    const auto fold_seed = derive_seed(derive_seed(base.seed, seed_path), {hash_tag("folds")});
    const auto cv_seed = derive_seed(derive_seed(base.seed, seed_path), {hash_tag("cv")});

    std::vector<PreparedLine> lines;
    std::set<LineCodeKey> tracked_keys;
    std::string empty_classes;
    for (Code c : base.classes) {
      std::vector<PreparedLine> cls;
      const auto it = tracked.find(c);
      const std::size_t have = it == tracked.end() ? 0 : it->second.size();
      if (have == 0) empty_classes += (empty_classes.empty() ? "" : ",") + std::string(code_name(c));
      if (it != tracked.end()) {
        for (const auto* p : it->second) {
          cls.push_back(*p);
          tracked_keys.insert(p->key);
        }
      }
      if (have < base.n_per_class) {
        auto fill = balanced_sample(pool, {c}, base.n_per_class - have, target.min_words,
                                    derive_seed(fill_seed, {code_index(c)}), &exclude);
        for (auto& p : fill) cls.push_back(std::move(p));
      }
      std::sort(cls.begin(), cls.end(),
                [](const PreparedLine& a, const PreparedLine& b) { return a.key < b.key; });
      for (auto& p : cls) lines.push_back(std::move(p));
    }

    const auto instances = instances_of(lines, Variant::Single);
    const auto plan = stratified_folds(labels_of(instances), base.k, fold_seed);
    Cell& cell = rep.cells[i];
    cell.condition = target.name;
    cell.algorithm = ctx.learners[l].name;
    cell.resample = r;
    cell.report = cross_validate(ctx.learners[l], instances, plan, ctx.features, cv_seed, ctx.exec);
    cell.report.echo.emplace_back("cell.min_words", std::to_string(target.min_words));
    cell.report.echo.emplace_back("cell.source_accuracy", fixed(src.accuracy()));
    for (std::size_t j = 0; j < lines.size(); ++j) {
      if (!tracked_keys.contains(lines[j].key)) continue;
      ++cell.tracked;
      const auto& rec = cell.report.records[j];
      if (rec.truth == rec.predicted) ++cell.tracked_correct;
    }
    cell.report.echo.emplace_back("cell.tracked", std::to_string(cell.tracked));
    if (!empty_classes.empty()) {
      notes[i] = cell.name() + ": no tracked instances for " + empty_classes;
    }
    log_cell(ctx, rep.name, cell);
  });
  for (auto& n : notes) {
    if (!n.empty()) rep.notes.push_back(std::move(n));
  }
  return rep;
}

ExperimentReport run_exp3(const ExperimentContext& ctx, const Exp3Config& cfg) {
  check_context(ctx);
  cfg.validate();
  const auto& pool = *ctx.pool;
  const std::size_t L = ctx.learners.size(), R = cfg.resamples;
  const Variant variants[] = {Variant::Single, Variant::WithContext};

  struct PairedDraw {
    std::vector<Instance> single, with_context;
    FoldPlan plan;
    std::uint64_t cv_seed = 0;
  };
  std::vector<PairedDraw> draws(R);
  for (std::size_t r = 0; r < R; ++r) {
    const auto lines = balanced_sample(pool, cfg.classes, cfg.n_per_class, cfg.min_words,
                                       derive_seed(cfg.seed, {hash_tag("exp3-sample"), r}));
    draws[r].single = instances_of(lines, Variant::Single);
    draws[r].with_context = instances_of(lines, Variant::WithContext);
    draws[r].plan = stratified_folds(labels_of(draws[r].single), cfg.k,
                                     derive_seed(cfg.seed, {hash_tag("exp3-folds"), r}));
    draws[r].cv_seed = derive_seed(cfg.seed, {hash_tag("exp3-cv"), r});
  }

  ExperimentReport rep;
  rep.name = "exp3";
  rep.echo = merged_echo("exp3", cfg.echo(), ctx);
  rep.cells.resize(2 * L * R);
  for_each_index(ctx.exec, rep.cells.size(), [&](std::size_t i) {
    const std::size_t v = i / (L * R), l = (i / R) % L, r = i % R;
    const auto& d = draws[r];
    Cell& cell = rep.cells[i];
    cell.condition = std::string(variant_name(variants[v]));
    cell.algorithm = ctx.learners[l].name;
    cell.resample = r;
    cell.report = cross_validate(ctx.learners[l], v == 0 ? d.single : d.with_context, d.plan,
                                 ctx.features, d.cv_seed, ctx.exec);
    cell.report.echo.emplace_back("cell.min_words", std::to_string(cfg.min_words));
    log_cell(ctx, rep.name, cell);
  });
  return rep;
}

double context_delta(const ExperimentReport& exp3, const std::string& algorithm) {
  return exp3.aggregate("with_context", algorithm).mean - exp3.aggregate("single", algorithm).mean;
}

void write_experiment(const std::filesystem::path& dir, const ExperimentReport& report) {
  const auto root = dir / report.name;
  const bool tracking = report.name == "exp2";

  std::ostringstream grid;
  write_echo_comments(grid, report.echo);
  grid << "condition,algorithm,resample,instances,accuracy,micro_f1,macro_f1";
  if (tracking) grid << ",tracked,tracked_correct,tracked_rate";
  grid << '\n';
  for (const auto& c : report.cells) {
    grid << c.condition << ',' << c.algorithm << ',' << (c.resample + 1) << ','
         << c.report.records.size() << ',' << fixed(c.report.scores.accuracy, 6) << ','
         << fixed(c.report.scores.micro_f1, 6) << ',' << fixed(c.report.scores.macro_f1, 6);
    if (tracking) {
      const auto rate = c.tracked_rate();
      grid << ',' << c.tracked << ',' << c.tracked_correct << ',' << (rate ? fixed(*rate, 6) : "");
    }
    grid << '\n';
  }

  std::ostringstream md;
  md << "# " << report.name << "\n\n";
  md << "| condition | algorithm | mean accuracy | min | max | mean macro-F1 |";
  if (tracking) md << " mean tracked rate |";
  md << "\n|---|---|---|---|---|---|" << (tracking ? "---|" : "") << '\n';
  const auto aggs = report.aggregates();
  for (const auto& a : aggs) {
    md << "| " << a.condition << " | " << a.algorithm << " | " << fixed(a.mean) << " | "
       << fixed(a.min) << " | " << fixed(a.max) << " | " << fixed(a.macro_f1_mean) << " |";
    if (tracking) md << ' ' << (a.tracked_mean ? fixed(*a.tracked_mean) : "n/a") << " |";
    md << '\n';
  }
  if (report.name == "exp3") {
    md << "\n| algorithm | with_context - single |\n|---|---|\n";
    std::vector<std::string> seen;
    for (const auto& a : aggs) {
      if (std::find(seen.begin(), seen.end(), a.algorithm) != seen.end()) continue;
      seen.push_back(a.algorithm);
      md << "| " << a.algorithm << " | " << fixed(context_delta(report, a.algorithm)) << " |\n";
    }
  }
  if (!report.notes.empty()) {
    md << "\n## Notes\n\n";
    for (const auto& n : report.notes) md << "- " << n << '\n';
  }
  md << "\n## Configuration\n\n";
  write_echo_table(md, report.echo);

  write_file(root / "grid.csv", grid.str());
  write_file(root / "summary.md", md.str());
  for (const auto& c : report.cells) {
    EvalReport r = c.report;
    Echo e = report.echo;
    e.insert(e.end(), r.echo.begin(), r.echo.end());
    r.echo = std::move(e);
    write_eval_report(root / "cells" / c.name(), r, report.name + " " + c.name());
  }
}

}  // namespace pcc
