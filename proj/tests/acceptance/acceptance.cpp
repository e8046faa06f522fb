// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Mining runs feed the constraint and threshold soundness checks.

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "family_checks.hpp"
#include "oracles.hpp"
#include "pct_fixture.hpp"
#include "published_settings.hpp"
#include "rdm/binning.hpp"
#include "rdm/explainer.hpp"
#include "rdm/family_io.hpp"
#include "rdm/measures.hpp"
#include "rdm/miner.hpp"
#include "rdm/pct.hpp"
#include "rdm/settings.hpp"
#include "rdm/synth.hpp"

namespace fs = std::filesystem;
using namespace rdm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Soundness tallies over every mining run of the suite.
struct Soundness {
  std::size_t runs = 0;
  std::size_t items = 0;
  std::vector<std::string> constraint;
  std::vector<std::string> threshold;

  void add(const RedescriptionFamily& fam, const MultiViewDataset& ds, const MinerConfig& cfg) {
    const auto c = oracle::check_family(fam, ds, cfg);
    ++runs;
    items += c.items;
    constraint.insert(constraint.end(), c.constraint_violations.begin(), c.constraint_violations.end());
    threshold.insert(threshold.end(), c.threshold_violations.begin(), c.threshold_violations.end());
  }
};

Soundness soundness;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Same defaults as the settings file written by `rdm synth`.
MinerConfig desk_config(std::size_t entities, std::uint64_t seed) {
  MinerConfig c;
  c.min_jaccard = 0.8;
  c.max_pvalue = 0.01;
  c.min_support = 10;
  c.max_support = static_cast<std::size_t>(static_cast<double>(entities) * 0.8);
  c.num_ret_red = 20;
  c.working_size = 200;
  c.max_size = 600;
  c.num_random_restarts = 2;
  c.seed = seed;
  return c;
}

MultiViewDataset fixture(SynthKind kind, std::size_t entities, std::size_t attrs, std::uint64_t seed) {
  SynthOptions o;
  o.kind = kind;
  o.entities = entities;
  o.attributes = attrs;
  o.seed = seed;
  o.sigma = 0.05;
  return synthesize(o).dataset;
}

Outcome jaccard_golden() {
  SupportSet a(40);
  SupportSet b(40);
  for (std::size_t i = 0; i < 14; ++i) a.set(i);
  for (std::size_t i = 2; i < 16; ++i) b.set(i);
  const std::vector<SupportSet> s{a, b};
  const double j = jaccard(s);
  return {j == 0.75 && a.intersection_count(b) == 12 && a.union_count(b) == 16,
          fmt("|int|=%zu |uni|=%zu J=%.17g", a.intersection_count(b), a.union_count(b), j)};
}

Outcome pvalue_grid() {
  double worst = 0.0;
  std::size_t checked = 0;
  bool ok = true;
  for (std::size_t n = 1; n <= 60; ++n) {
    for (int a = 0; a <= 10; ++a) {
      for (int b = a; b <= 10; ++b) {
        const auto tails = oracle::binomial_tails(n, oracle::BigRational(a * b, 100));
        const std::vector<double> m{a / 10.0, b / 10.0};
        for (std::size_t s = 0; s <= n; ++s) {
          const double exact = oracle::to_double(tails[s]);
          const double got = p_value(s, n, m);
          ++checked;
          if (exact == 0.0) {
            ok = ok && got == 0.0;
            continue;
          }
          const double rel = std::abs(got - exact) / exact;
          worst = std::max(worst, rel);
        }
      }
    }
  }
  return {ok && worst <= 1e-10, fmt("%zu cases, max relative error %.3g", checked, worst)};
}

Outcome pct_oracle() {
  std::mt19937_64 rng(2024);
  std::size_t splits = 0;
  std::size_t bad = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto f = oracle::random_fixture(rng, 8, 3, 4);
    PctOptions o;
    o.max_depth = 1 + rng() % 2;
    o.min_leaf = 1 + rng() % 2;
    const auto m = train_pct(f.view(), 0, f.targets(), o);
    for (const auto& node : m.nodes) {
      std::vector<std::size_t> members = node.entities.indices();
      const bool may_split = node.depth < o.max_depth && members.size() >= 2 * o.min_leaf;
      const auto best = may_split ? oracle::best_split(members, f.x, f.labels, f.columns, o.min_leaf) : std::nullopt;
      if (node.split.has_value() != best.has_value()) {
        ++bad;
        continue;
      }
      if (!best) continue;
      ++splits;
      if (node.split->attribute != best->attribute || !(node.split->threshold >= best->below) ||
          !(node.split->threshold < best->above)) {
        ++bad;
      }
    }
  }
  return {bad == 0, fmt("200 fixtures, %zu splits checked, %zu mismatches", splits, bad)};
}

Outcome rule_faithfulness() {
  std::mt19937_64 rng(77);
  std::size_t nodes = 0;
  std::size_t bad = 0;
  for (int rep = 0; rep < 100; ++rep) {
    auto f = oracle::random_fixture(rng, 60, 5, 1000);
    for (auto& col : f.x) {
      for (auto& v : col) v = v / 7.0 - 50.0;
    }
    PctOptions o;
    o.max_depth = 1 + rng() % 5;
    o.min_leaf = 1 + rng() % 3;
    if (rep % 2) o.subspace_seed = rng();
    const View v = f.view();
    const auto ds = assemble_dataset({v});
    const auto m = train_pct(v, 0, f.targets(), o);
    const auto rules = transform_to_rules(m, v);
    for (const auto& r : rules) bad += oracle::eval_query(r.query, ds) == oracle::bits_of(r.support) ? 0 : 1;
    for (std::size_t i = 1; i < m.nodes.size(); ++i) {
      ++nodes;
      const auto want = oracle::bits_of(m.nodes[i].entities);
      const bool found = std::any_of(rules.begin(), rules.end(),
                                     [&](const Rule& r) { return oracle::eval_query(r.query, ds) == want; });
      bad += found ? 0 : 1;
    }
  }
  return {bad == 0, fmt("100 trees, %zu nodes, %zu mismatches", nodes, bad)};
}

Outcome fd_scaling() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u;
  auto bins = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    const auto ds = assemble_dataset({oracle::numeric_view({v}, "x")});
    return perform_binning(ds, {0, "x0"}, 10).bin_count();
  };
  const auto k1 = bins(1000);
  const auto k8 = bins(8000);
  const double ratio = static_cast<double>(k8) / static_cast<double>(k1);
  return {ratio >= 1.5 && ratio <= 2.5, fmt("k(1000)=%zu k(8000)=%zu ratio=%.3f", k1, k8, ratio)};
}

Outcome randomization() {
  std::vector<double> corr;
  std::vector<double> indep;
  bool every = true;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto cfg = desk_config(300, seed);
    const auto dn = fixture(SynthKind::Noisy, 300, 12, seed);
    const auto fn = run_exitnerdom(dn, {0, 1}, cfg);
    soundness.add(fn, dn, cfg);
    const auto di = fixture(SynthKind::Independent, 300, 12, seed);
    const auto fi = run_exitnerdom(di, {0, 1}, cfg);
    soundness.add(fi, di, cfg);
    const auto c = count_described(fn).n_ind;
    const auto i = count_described(fi).n_ind;
    corr.push_back(static_cast<double>(c));
    indep.push_back(static_cast<double>(i));
    every = every && c >= 2 * i && c > 0;
    per_seed << (seed ? " " : "") << c << "/" << i;
  }
  const auto mw = mann_whitney_u(corr, indep);
  return {mw.p < 0.01 && every, fmt("n_ind noisy/independent per seed: %s; Mann-Whitney p=%.3g",
                                    per_seed.str().c_str(), mw.p)};
}

Outcome replay() {
  std::mt19937_64 rng(9);
  std::size_t mismatches = 0;
  std::size_t gate = 0;
  std::size_t coverage = 0;
  const std::size_t n = 20;
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<int> pred(n);
    for (auto& p : pred) p = static_cast<int>(rng() % 2);
    TargetColumn t{"class", {"c0", "c1"}, pred};
    std::vector<ExplainCandidate> pool;
    for (std::size_t i = 0; i < 12; ++i) {
      ExplainCandidate c;
      c.id = i;
      c.is_redescription = rng() % 2 == 0;
      c.jaccard = static_cast<double>(rng() % 11) / 10.0;
      if (i > 0 && rng() % 4 == 0) {
        c.support = pool[rng() % i].support;
      } else {
        c.support = SupportSet(n);
        const unsigned dens = 2 + static_cast<unsigned>(rng() % 4);
        for (std::size_t e = 0; e < n; ++e) {
          if (rng() % dens == 0) c.support.set(e);
        }
      }
      pool.push_back(c);
    }
    const double delta = static_cast<double>(rng() % 9) / 10.0;
    const auto st = construct_sets(pool, t, delta);
    std::vector<oracle::ReplayCandidate> rc;
    for (const auto& c : pool) rc.push_back({c.id, c.is_redescription, oracle::bits_of(c.support), c.jaccard});
    const auto ref = oracle::replay_selection(rc, pred, 2, delta);
    for (int c = 0; c < 2; ++c) {
      const auto& got = st.classes[static_cast<std::size_t>(c)];
      const auto& want = ref[static_cast<std::size_t>(c)];
      mismatches += got.chosen_reds == want.chosen_reds && got.chosen_rules == want.chosen_rules &&
                            got.ncov_reds == want.ncov_reds && got.ncov_rules == want.ncov_rules
                        ? 0
                        : 1;
      for (const bool reds : {true, false}) {
        const auto& chosen = reds ? got.chosen_reds : got.chosen_rules;
        std::vector<bool> covered(n, false);
        for (const auto id : chosen) {
          gate += precision(pool[id].support, t, c) >= delta ? 0 : 1;
          for (const auto e : pool[id].support.indices()) covered[e] = true;
        }
        for (std::size_t e = 0; e < n; ++e) {
          if (pred[e] != c || covered[e]) continue;
          for (const auto& p : pool) {
            if (p.is_redescription == reds && p.support.test(e) && precision(p.support, t, c) >= delta) ++coverage;
          }
        }
      }
    }
  }
  return {mismatches == 0 && gate == 0 && coverage == 0,
          fmt("500 pools: %zu replay mismatches, %zu precision-gate and %zu coverage violations", mismatches, gate,
              coverage)};
}

Outcome interval_fidelity() {
  SynthOptions o;
  o.kind = SynthKind::Intervals;
  o.entities = 500;
  o.attributes = 4;
  o.classes = 3;
  o.seed = 11;
  const auto data = synthesize(o);
  MinerConfig cfg = desk_config(500, 11);
  cfg.min_jaccard = 0.5;
  cfg.max_support = 500;
  const auto rep = kfold_fidelity(data.dataset, *data.predictions, cfg, 5, 0.9);
  std::ostringstream folds;
  for (const double f : rep.combined_fidelity) folds << ' ' << fmt("%.3f", f);
  return {rep.mean() >= 0.95, fmt("5 folds:%s; mean %.4f", folds.str().c_str(), rep.mean())};
}

Outcome entity_scaling() {
  std::vector<double> secs;
  std::size_t peak = 0;
  std::size_t largest_set = 0;
  bool bounded = true;
  MinerConfig last;
  for (const std::size_t n : {500U, 1000U, 2000U}) {
    const auto ds = fixture(SynthKind::Noisy, n, 30, 3);
    const auto cfg = desk_config(n, 3);
    last = cfg;
    const auto t0 = std::chrono::steady_clock::now();
    const auto fam = run_exitnerdom(ds, {0, 1}, cfg);
    secs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    soundness.add(fam, ds, cfg);
    for (const auto& s : fam.sets) {
      peak = std::max(peak, s.peak_candidates);
      largest_set = std::max({largest_set, s.individual.size(), s.interaction.size()});
      bounded = bounded && s.peak_candidates <= cfg.max_size && s.individual.size() <= cfg.num_ret_red &&
                s.interaction.size() <= cfg.num_ret_red;
    }
  }
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  const double ratio = secs[2] / secs[0];
  return {ratio < 16.0 && bounded,
          fmt("t(500)=%.2fs t(1000)=%.2fs t(2000)=%.2fs ratio=%.2f; peak store %zu <= MaxRSSize %zu; largest set %zu; "
              "max RSS %ld MiB",
              secs[0], secs[1], secs[2], ratio, peak, last.max_size, largest_set, ru.ru_maxrss / 1024)};
}

std::map<std::string, std::string> family_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = read_text_file(e.path());
  return out;
}

Outcome determinism() {
  const auto ds = fixture(SynthKind::Noisy, 300, 12, 5);
  const auto root = fs::temp_directory_path() / "rdm_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> outs;
  const std::vector<std::size_t> threads{1, 1, 2, 4};
  for (std::size_t k = 0; k < threads.size(); ++k) {
    auto cfg = desk_config(300, 5);
    cfg.n_threads = threads[k];
    const auto fam = run_exitnerdom(ds, {0, 1}, cfg);
    soundness.add(fam, ds, cfg);
    const auto dir = root / std::to_string(k);
    write_family(fam, dir, true);
    outs.push_back(family_files(dir));
  }
  fs::remove_all(root);
  std::size_t reds = 0;
  for (const auto& entry : outs[0]) reds += entry.first.ends_with(".reds") ? 1 : 0;
  bool same = true;
  for (std::size_t k = 1; k < outs.size(); ++k) same = same && outs[k] == outs[0];
  return {same && reds > 0, fmt("%zu .reds files; rerun and threads 1/2/4 %s", reds,
                                same ? "byte-identical" : "DIFFER")};
}

Outcome settings_golden() {
  const auto s = parse_settings(kPublishedSettings);
  const auto& c = s.config;
  const bool ok = c.min_jaccard == 0.3 && c.max_pvalue == 0.01 && c.min_support == 10 && c.max_support == 4000 &&
                  c.working_size == 500 && c.max_size == 1500 && c.num_ret_red == 300 && c.tree_depth == 8 &&
                  c.n_supplement_trees == 2 && c.num_random_restarts == 10 && c.num_iterations == 1;
  return {ok, fmt("minJS=%g maxPval=%g MinSupport=%zu MaxSupport=%zu WorkingRSSize=%zu MaxRSSize=%zu numRetRed=%zu "
                  "ATreeDepth=%zu numSupplementTrees=%zu numRandomRestarts=%zu numIterations=%zu",
                  c.min_jaccard, c.max_pvalue, c.min_support, c.max_support, c.working_size, c.max_size,
                  c.num_ret_red, c.tree_depth, c.n_supplement_trees, c.num_random_restarts, c.num_iterations)};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "Jaccard golden", jaccard_golden},
      {2, "p-value matches exact binomial sums", pvalue_grid},
      {3, "PCT splits match exhaustive search", pct_oracle},
      {4, "tree rules reproduce node supports", rule_faithfulness},
      {5, "Freedman-Diaconis bin count scaling", fd_scaling},
      {6, "correlated vs independent views", randomization},
      {9, "selection matches literal replay", replay},
      {10, "fidelity on interval labels", interval_fidelity},
      {11, "entity scaling", entity_scaling},
      {12, "determinism across reruns and threads", determinism},
      {13, "published settings file", settings_golden},
  };
  std::map<int, std::pair<std::string, Outcome>> results;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    o.detail += fmt(" [%.1fs]", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    results[c.number] = {c.name, o};
  }

  // Every mining run above went through the soundness checker.
  const auto first = [](const std::vector<std::string>& v) { return v.empty() ? std::string() : ": " + v.front(); };
  results[7] = {"constraint soundness",
                {soundness.runs > 0 && soundness.constraint.empty(),
                 fmt("%zu mining runs, %zu items, %zu violations", soundness.runs, soundness.items,
                     soundness.constraint.size()) +
                     first(soundness.constraint)}};
  results[8] = {"threshold soundness",
                {soundness.runs > 0 && soundness.threshold.empty(),
                 fmt("%zu mining runs, %zu items re-evaluated, %zu violations", soundness.runs, soundness.items,
                     soundness.threshold.size()) +
                     first(soundness.threshold)}};

  int failed = 0;
  for (const auto& [k, entry] : results) {
    const auto& [name, o] = entry;
    std::printf("criterion %2d %s: %s  %s\n", k, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    failed += o.pass ? 0 : 1;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
