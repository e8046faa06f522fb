// Command-line front end: mine, explain, stats, evaluate, synth.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rdm/arff.hpp"
#include "rdm/error.hpp"
#include "rdm/explainer.hpp"
#include "rdm/family_io.hpp"
#include "rdm/measures.hpp"
#include "rdm/miner.hpp"
#include "rdm/settings.hpp"
#include "rdm/synth.hpp"

namespace fs = std::filesystem;
using namespace rdm;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

MultiViewDataset load_views(const std::vector<std::string>& paths) {
  std::vector<View> views;
  views.reserve(paths.size());
  for (const auto& p : paths) views.push_back(read_arff(p));
  return assemble_dataset(std::move(views));
}

TargetColumn load_predictions(const std::string& path) {
  const View v = read_arff(path);
  if (v.size() == 0) throw Error(Errc::MalformedHeader, path + ": no attributes");
  return target_from_column(v.attribute(v.size() - 1));
}

void apply_overrides(Settings& s, std::optional<std::size_t> threads, std::optional<std::uint64_t> seed) {
  if (threads) s.config.n_threads = *threads;
  if (seed) s.config.seed = *seed;
  s.config.validate();
}

void print_warnings(const Settings& s) {
  for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
}

struct MineArgs {
  std::string settings;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::size_t> views;  // 1-based
  bool supports = false;
};

int run_mine(const MineArgs& a) {
  Settings s = load_settings(a.settings);
  apply_overrides(s, a.threads, a.seed);
  print_warnings(s);
  const MultiViewDataset ds = load_views(s.inputs);

  std::vector<std::size_t> selected;
  if (a.views.empty()) {
    for (std::size_t v = 0; v < ds.view_count(); ++v) selected.push_back(v);
  } else {
    for (const std::size_t v : a.views) {
      if (v == 0 || v > ds.view_count()) throw Error(Errc::ConfigInvalid, "view " + std::to_string(v) + " does not exist");
      selected.push_back(v - 1);
    }
  }

  MinerHooks hooks;
  hooks.log = [](std::string_view m) { std::cerr << m << '\n'; };
  const auto t0 = std::chrono::steady_clock::now();
  RedescriptionFamily fam = run_exitnerdom(ds, selected, s.config, hooks);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Settings canon = s;
  canon.config.n_threads = 1;  // the output does not depend on it
  fam.metadata["config_hash"] = hex64(fnv1a(serialize_settings(canon)));
  fam.metadata["entities"] = std::to_string(ds.entity_count());

  const fs::path dir = a.out.empty() ? s.output_directory() : fs::path(a.out);
  write_family(fam, dir, a.supports);
  for (const auto& set : fam.sets) {
    std::cerr << "time view " << set.attribute.view << ' ' << set.attribute.name << ' '
              << fmt("%.3f", set.seconds) << "s\n";
  }
  std::cerr << "mined " << fam.sets.size() << " attributes in " << fmt("%.3f", secs) << "s -> "
            << dir.string() << '\n';
  return kOk;
}

struct ExplainArgs {
  std::string settings;
  std::string predictions;
  double delta = 0.5;
  std::size_t folds = 5;
  std::optional<std::size_t> threads;
  std::optional<std::uint64_t> seed;
};

int run_explain(const ExplainArgs& a) {
  Settings s = load_settings(a.settings);
  apply_overrides(s, a.threads, a.seed);
  print_warnings(s);
  const MultiViewDataset ds = load_views(s.inputs);
  const TargetColumn preds = load_predictions(a.predictions);
  if (preds.size() != ds.entity_count()) {
    throw Error(Errc::RowCountMismatch, "predictions hold " + std::to_string(preds.size()) +
                                            " rows, views hold " + std::to_string(ds.entity_count()));
  }

  const FoldReport rep = kfold_fidelity(ds, preds, s.config, a.folds, a.delta);
  std::cout << "fold\tredescriptions\trules\tcombined\n";
  for (std::size_t f = 0; f < rep.combined_fidelity.size(); ++f) {
    std::cout << f + 1 << '\t' << fmt("%.6f", rep.redescription_fidelity[f]) << '\t'
              << fmt("%.6f", rep.rule_fidelity[f]) << '\t' << fmt("%.6f", rep.combined_fidelity[f]) << '\n';
  }
  std::cout << "mean\t" << fmt("%.6f", rep.mean()) << "\tsd\t" << fmt("%.6f", rep.sd()) << '\n';

  // Selection on all entities, for inspection.
  std::vector<std::size_t> explanatory(ds.view_count());
  for (std::size_t v = 0; v < explanatory.size(); ++v) explanatory[v] = v;
  const MultiViewDataset mining = with_prediction_view(ds, preds);
  const RedescriptionFamily fam = run_exitnerdom(mining, explanatory, s.config);
  const auto cands = explain_candidates(fam, mining, ds.view_count());
  const SelectionState state = construct_sets(cands, preds, a.delta);
  for (const auto& sel : state.classes) {
    std::cout << "\nclass " << preds.classes[static_cast<std::size_t>(sel.class_index)] << " (" << sel.class_size
              << " entities, " << sel.ncov_rules << " uncovered by rules"
              << (sel.rules_exhausted ? ", no eligible candidates left" : "") << ")\n";
    for (const std::size_t id : sel.chosen_rules) {
      const auto& c = cands[id];
      std::cout << "  rule " << fmt("%.4f", precision(c.support, preds, sel.class_index)) << "  "
                << c.queries.front().to_string() << '\n';
    }
  }
  return kOk;
}

int run_stats(const std::string& dir) {
  const StoredFamily fam = read_family(dir);
  const DescribedCounts c = count_described(fam);
  std::size_t attributes = 0;
  for (const auto& s : fam.sets) attributes += s.interaction ? 0 : 1;
  std::cout << "attributes\tn_ind\tn_int\tredescriptions\tmean_J\tsd_J\tn_accurate\n";
  std::cout << attributes << '\t' << c.n_ind << '\t' << c.n_int << '\t' << c.redescriptions << '\t'
            << fmt("%.6f", c.mean_jaccard) << '\t' << fmt("%.6f", c.sd_jaccard) << '\t' << c.n_accurate
            << '\n';
  return kOk;
}

struct EvaluateArgs {
  std::string family;
  std::vector<std::string> data;
  std::string labels;
  double entropy_frac = 0.5;
  double min_j = 0.6;
  double max_supp_frac = 0.5;
};

int run_evaluate(const EvaluateArgs& a) {
  const StoredFamily fam = read_family(a.family);
  const MultiViewDataset ds = load_views(a.data);
  std::optional<TargetColumn> labels;
  if (!a.labels.empty()) labels = load_predictions(a.labels);

  std::vector<Redescription> all;
  std::vector<std::string> rows;
  for (const auto& s : fam.sets) {
    const std::string file = family_file_name(s.attribute, s.interaction);
    for (const auto& r : s.records) {
      Redescription red = evaluate_record(r, ds);
      rows.push_back(file + '\t' + std::to_string(r.id) + '\t' + fmt("%.6f", r.jaccard) + '\t' +
                     fmt("%.6f", red.jaccard()) + '\t' + fmt("%.5e", red.p_value()) + '\t' +
                     std::to_string(red.support().count()));
      all.push_back(std::move(red));
    }
  }

  std::vector<bool> kept;
  if (labels) {
    const auto filtered = entropy_filter(all, *labels, a.min_j, a.max_supp_frac, a.entropy_frac);
    std::size_t next = 0;
    for (const auto& red : all) {
      const bool k = next < filtered.size() && filtered[next] == red;
      kept.push_back(k);
      next += k ? 1 : 0;
    }
  }

  std::cout << "set\tid\tJ_mined\tJ_test\tp_test\tsupp_test" << (labels ? "\tkept" : "") << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::cout << rows[i];
    if (labels) std::cout << '\t' << (kept[i] ? "yes" : "no");
    std::cout << '\n';
  }
  if (labels) {
    std::size_t n = 0;
    for (const bool k : kept) n += k ? 1 : 0;
    std::cout << "kept " << n << " of " << all.size() << '\n';
  }
  return kOk;
}

struct SynthArgs {
  std::string kind = "copied";
  std::size_t entities = 300;
  std::size_t attrs = 12;
  std::uint64_t seed = 0;
  double sigma = 0.05;
  std::size_t classes = 3;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  const auto kind = parse_synth_kind(a.kind);
  if (!kind) throw Error(Errc::ConfigInvalid, "unknown synthetic kind '" + a.kind + "'");
  SynthOptions o;
  o.kind = *kind;
  o.entities = a.entities;
  o.attributes = a.attrs;
  o.seed = a.seed;
  o.sigma = a.sigma;
  o.classes = a.classes;
  const SynthData d = synthesize(o);

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string());

  Settings s;
  for (std::size_t v = 0; v < d.dataset.view_count(); ++v) {
    const View& view = d.dataset.view(v);
    const std::string tag = view.source_tag().empty() ? "view" + std::to_string(v + 1) : view.source_tag();
    const std::string name = tag + ".arff";
    write_arff_file(dir / name, view, tag);
    s.inputs.push_back(name);
  }
  if (d.predictions) {
    std::vector<AttributeColumn> cols;
    cols.push_back(AttributeColumn::nominal(d.predictions->name, d.predictions->classes, d.predictions->labels));
    write_arff_file(dir / "predictions.arff", View(std::move(cols), "predictions"), "predictions");
  }
  s.output_folder = ".";
  s.output_file_name = "family";
  MinerConfig& c = s.config;
  c.min_jaccard = 0.8;
  c.max_support = a.entities * 8 / 10;
  c.num_ret_red = 20;
  c.working_size = 200;
  c.max_size = 600;
  c.num_random_restarts = 2;
  c.seed = a.seed;
  std::ofstream settings(dir / "settings.txt", std::ios::binary);
  settings << serialize_settings(s);
  if (!settings) throw Error(Errc::Io, "cannot write settings.txt");
  std::cerr << "wrote " << d.dataset.view_count() << " view(s) of " << d.dataset.entity_count()
            << " entities to " << dir.string() << '\n';
  return kOk;
}

int classify(const Error& e) {
  switch (e.code()) {
    case Errc::Io:
    case Errc::InvariantViolation:
      return kRuntime;
    default:
      return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-view redescription mining"};
  app.require_subcommand(1);

  MineArgs mine;
  auto* cmd_mine = app.add_subcommand("mine", "mine a redescription family");
  cmd_mine->add_option("--settings", mine.settings, "settings file")->required();
  cmd_mine->add_option("--threads", mine.threads, "worker threads");
  cmd_mine->add_option("--seed", mine.seed, "random seed");
  cmd_mine->add_option("--out", mine.out, "output directory (default: OutputFolder/OutputFileName)");
  cmd_mine->add_option("--views", mine.views, "1-based views whose attributes are described (default: all)")
      ->delimiter(',');
  cmd_mine->add_flag("--supports", mine.supports, "write SUPP lines");

  ExplainArgs explain;
  auto* cmd_explain = app.add_subcommand("explain", "select rules mimicking model predictions");
  cmd_explain->add_option("--settings", explain.settings, "settings file")->required();
  cmd_explain->add_option("--predictions", explain.predictions, "ARFF with predicted classes (last attribute)")
      ->required();
  cmd_explain->add_option("--delta", explain.delta, "precision threshold")->check(CLI::Range(0.0, 1.0));
  cmd_explain->add_option("--folds", explain.folds, "cross-validation folds");
  cmd_explain->add_option("--threads", explain.threads, "worker threads");
  cmd_explain->add_option("--seed", explain.seed, "random seed");

  std::string stats_dir;
  auto* cmd_stats = app.add_subcommand("stats", "summarize a mined family");
  cmd_stats->add_option("--family", stats_dir, "family directory")->required();

  EvaluateArgs eval;
  auto* cmd_eval = app.add_subcommand("evaluate", "re-evaluate a family on another dataset");
  cmd_eval->add_option("--family", eval.family, "family directory")->required();
  cmd_eval->add_option("--data", eval.data, "view ARFF files in view order")->required();
  cmd_eval->add_option("--labels", eval.labels, "ARFF with class labels for the entropy filter");
  cmd_eval->add_option("--entropy-frac", eval.entropy_frac, "entropy bound as a fraction of the maximum");
  cmd_eval->add_option("--min-j", eval.min_j, "minimal Jaccard on this dataset");
  cmd_eval->add_option("--max-supp-frac", eval.max_supp_frac, "maximal support fraction");

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "write synthetic fixtures and a settings file");
  cmd_synth->add_option("--kind", synth.kind, "copied|noisy|independent|intervals");
  cmd_synth->add_option("--entities", synth.entities, "entity count");
  cmd_synth->add_option("--attrs", synth.attrs, "attributes per view");
  cmd_synth->add_option("--seed", synth.seed, "random seed");
  cmd_synth->add_option("--sigma", synth.sigma, "noise level for noisy");
  cmd_synth->add_option("--classes", synth.classes, "class count for intervals");
  cmd_synth->add_option("--out", synth.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    if (*cmd_mine) return run_mine(mine);
    if (*cmd_explain) return run_explain(explain);
    if (*cmd_stats) return run_stats(stats_dir);
    if (*cmd_eval) return run_evaluate(eval);
    if (*cmd_synth) return run_synth(synth);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return classify(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kValidation;
}
