#include "rdm/miner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <thread>
#include <unordered_map>

#include "rdm/binning.hpp"
#include "rdm/error.hpp"
#include "seed_util.hpp"

namespace rdm {

std::vector<AttributeAssignment> unif_div(const std::vector<AttributeRef>& attributes,
                                          std::size_t workers) {
  workers = std::max<std::size_t>(workers, 1);
  std::vector<AttributeAssignment> out;
  const std::size_t n = attributes.size();
  const std::size_t base = n / workers;
  const std::size_t extra = n % workers;
  std::size_t at = 0;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    if (len == 0) continue;
    AttributeAssignment a;
    a.worker_id = w;
    a.attributes.assign(attributes.begin() + static_cast<std::ptrdiff_t>(at),
                        attributes.begin() + static_cast<std::ptrdiff_t>(at + len));
    out.push_back(std::move(a));
    at += len;
  }
  return out;
}

std::uint64_t attribute_seed(std::uint64_t seed, const AttributeRef& attribute) {
  return seeds::combine(seeds::combine(seed, static_cast<std::uint64_t>(attribute.view)), attribute.name);
}

std::vector<Rule> tree_rules(const MultiViewDataset& ds, std::size_t view, const TargetMatrix& targets,
                             const MinerConfig& cfg, std::size_t forest_trees, std::uint64_t seed) {
  const View& v = ds.view(view);
  PctOptions opt;
  opt.max_depth = cfg.tree_depth;
  opt.min_leaf = cfg.min_leaf;

  std::vector<Rule> rules;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_support;
  auto add = [&](std::vector<Rule> fresh) {
    for (auto& r : fresh) {
      auto& bucket = by_support[r.support.hash()];
      bool dup = false;
      for (const std::size_t k : bucket) {
        if (rules[k].support == r.support) {
          if (r.query.literal_count() < rules[k].query.literal_count()) rules[k] = std::move(r);
          dup = true;
          break;
        }
      }
      if (!dup) {
        bucket.push_back(rules.size());
        rules.push_back(std::move(r));
      }
    }
  };

  const std::size_t batch = std::max<std::size_t>(cfg.num_target, 1);
  const bool split = targets.kind() == TargetMatrix::Kind::Multilabel && targets.columns() > batch;
  const std::size_t batches = split ? (targets.columns() + batch - 1) / batch : 1;
  for (std::size_t b = 0; b < batches; ++b) {
    const TargetMatrix part = split ? targets.slice(b * batch, (b + 1) * batch) : targets;
    add(transform_to_rules(train_pct(v, view, part, opt), v));
    const auto forest = train_forest(v, view, part, forest_trees, opt, seeds::combine(seed, b));
    for (const auto& tree : forest) add(transform_to_rules(tree, v));
  }
  return rules;
}

namespace {

std::size_t partner_of(std::size_t home) { return home == 0 ? 1 : 0; }

TargetMatrix support_targets(const std::vector<Rule>& rules) {
  std::vector<SupportSet> cols;
  cols.reserve(rules.size());
  for (const auto& r : rules) cols.push_back(r.support);
  return TargetMatrix::multilabel(std::move(cols));
}

// Completes redescriptions over every view other than `home` and `partner`,
// using rules of single trees trained on the redescription supports.
std::vector<Redescription> complete_remaining(std::vector<Redescription> reds, std::size_t home,
                                              std::size_t partner, const MultiViewDataset& ds,
                                              const MinerConfig& cfg, std::uint64_t seed) {
  for (std::size_t w = 0; w < ds.view_count() && !reds.empty(); ++w) {
    if (w == home || w == partner) continue;
    std::vector<SupportSet> cols;
    cols.reserve(reds.size());
    for (const auto& r : reds) cols.push_back(r.support());
    const auto rules =
        tree_rules(ds, w, TargetMatrix::multilabel(std::move(cols)), cfg, 0, seeds::combine(seed, w));
    reds = complete_reds(reds, w, rules, cfg);
  }
  return reds;
}

bool home_is_single(const Redescription& red, const AttributeRef& n) {
  if (!red.has(n.view)) return false;
  const auto a = red.query(n.view)->attrs();
  return a.size() == 1 && a.front() == n;
}

bool home_mentions(const Redescription& red, const AttributeRef& n) {
  return red.has(n.view) && red.query(n.view)->mentions(n.name);
}

std::vector<Redescription> finish(std::vector<Redescription> reds, const AttributeRef& n,
                                  std::size_t partner, const MultiViewDataset& ds,
                                  const MinerConfig& cfg, std::uint64_t seed, bool individual) {
  reds = complete_remaining(std::move(reds), n.view, partner, ds, cfg, seed);
  std::vector<Redescription> out;
  out.reserve(reds.size());
  for (auto& red : reds) {
    if (cfg.minimize_rules) red = minimize_rules(red, ds, n);
    if (!red.passes(cfg)) continue;
    if (individual ? !home_is_single(red, n) : !home_mentions(red, n)) continue;
    out.push_back(std::move(red));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> by_provenance_b(const std::vector<Rule>& b) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j].provenance >= 0) pairs.emplace_back(static_cast<std::size_t>(b[j].provenance), j);
  }
  std::stable_sort(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<std::pair<std::size_t, std::size_t>> by_provenance_a(const std::vector<Rule>& a) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].provenance >= 0) pairs.emplace_back(i, static_cast<std::size_t>(a[i].provenance));
  }
  return pairs;
}

std::vector<Rule> reindexed(std::vector<Rule> rules) {
  for (std::size_t i = 0; i < rules.size(); ++i) rules[i].provenance = static_cast<int>(i);
  return rules;
}

// Alternation loop of the constrained miner; inserts into `store`.
void interaction_candidates(const AttributeRef& n, std::vector<Rule> w1, std::vector<Rule> w2,
                            std::size_t partner, const MultiViewDataset& ds, const MinerConfig& cfg,
                            std::uint64_t seed, CandidateStore& store) {
  const std::size_t views = ds.view_count();
  for (std::size_t it = 0; it < cfg.num_iterations; ++it) {
    if (w1.empty() || w2.empty()) break;
    const std::uint64_t s = seeds::combine(seed, 1000 + it);
    // Partner trees learn the home rules; home trees learn the partner rules.
    std::vector<Rule> r1 = tree_rules(ds, partner, support_targets(w1), cfg, cfg.n_supplement_trees,
                                      seeds::combine(s, 1));
    std::vector<Rule> r2 = tree_rules(ds, n.view, support_targets(w2), cfg, cfg.n_supplement_trees,
                                      seeds::combine(s, 2));
    std::erase_if(r2, [&](const Rule& r) { return !r.query.mentions(n.name); });

    std::vector<Redescription> reds = create_reds(w1, r1, views, cfg, by_provenance_b(r1));
    auto more = create_reds(r2, w2, views, cfg, by_provenance_a(r2));
    reds.insert(reds.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    if (cfg.unguided_expansion) {
      more = create_reds(r2, r1, views, cfg);
      reds.insert(reds.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    store.insert(finish(std::move(reds), n, partner, ds, cfg, s, false));

    w1 = reindexed(std::move(r2));
    w2 = reindexed(std::move(r1));
  }
}

std::vector<Rule> bin_rules_of(const MultiViewDataset& ds, const BinSpec& spec) {
  std::vector<Rule> rules;
  const auto queries = bins_to_rules(spec);
  for (std::size_t s = 0; s < queries.size(); ++s) {
    rules.push_back(Rule{queries[s], evaluate(queries[s], ds), static_cast<int>(s)});
  }
  return rules;
}

}  // namespace

std::vector<Redescription> clus_rmmw_const(const AttributeRef& n, const std::vector<Rule>& init_rules_home,
                                           const std::vector<Rule>& init_rules_partner,
                                           std::size_t partner_view, const MultiViewDataset& ds,
                                           const MinerConfig& cfg, std::uint64_t seed) {
  CandidateStore store(cfg, ds.entity_count());
  std::vector<Rule> home;
  for (const auto& r : init_rules_home) {
    if (r.query.mentions(n.name)) home.push_back(r);
  }
  interaction_candidates(n, reindexed(std::move(home)), reindexed(init_rules_partner), partner_view, ds,
                         cfg, seed, store);
  if (cfg.joining_procedure) conjunctive_refine(store, cfg);
  return extract_final(store.items(), cfg, ds.entity_count());
}

AttributeResult mine_attribute(const MultiViewDataset& ds, const AttributeRef& attribute,
                               const MinerConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  AttributeResult result;
  result.attribute = attribute;

  const std::size_t home = attribute.view;
  const std::size_t partner = partner_of(home);
  const std::size_t views = ds.view_count();
  const BinSpec spec = perform_binning(ds, attribute, cfg.min_support);
  const std::vector<Rule> bins = bin_rules_of(ds, spec);

  CandidateStore individual(cfg, ds.entity_count());
  CandidateStore interaction(cfg, ds.entity_count());

  if (spec.bin_count() >= 2) {
    const TargetMatrix classes = TargetMatrix::multiclass(bins_to_classes(spec), spec.bin_count());
    const std::uint64_t base = attribute_seed(cfg.seed, attribute);
    const std::size_t restarts = std::max<std::size_t>(cfg.num_random_restarts, 1);
    for (std::size_t r = 0; r < restarts; ++r) {
      const std::uint64_t seed = base + r;
      std::vector<Rule> partner_rules = tree_rules(ds, partner, classes, cfg, cfg.n_supplement_trees, seed);
      if (r > 0) {
        std::mt19937_64 rng(seed);
        std::shuffle(partner_rules.begin(), partner_rules.end(), rng);
      }

      std::optional<std::vector<std::pair<std::size_t, std::size_t>>> pairs;
      if (!cfg.unguided_expansion) pairs = by_provenance_b(partner_rules);
      std::vector<Redescription> reds = create_reds(bins, partner_rules, views, cfg, pairs);
      for (auto& red : reds) red = refine_with_bins(red, spec, bins, cfg);
      std::erase_if(reds, [&](const Redescription& red) { return !red.passes(cfg); });
      individual.insert(finish(std::move(reds), attribute, partner, ds, cfg, seed, true));

      interaction_candidates(attribute, reindexed(bins), reindexed(partner_rules), partner, ds, cfg, seed,
                             interaction);
    }
    if (cfg.joining_procedure) conjunctive_refine(interaction, cfg);
  }

  result.individual = extract_final(individual.items(), cfg, ds.entity_count());
  result.interaction = extract_final(interaction.items(), cfg, ds.entity_count());
  result.peak_candidates = std::max(individual.peak_size(), interaction.peak_size());
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

RedescriptionFamily run_exitnerdom(const MultiViewDataset& ds, const std::vector<std::size_t>& selected_views,
                                   const MinerConfig& cfg_in, const MinerHooks& hooks) {
  cfg_in.validate();
  if (ds.view_count() < 2) throw Error(Errc::ConfigInvalid, "mining needs at least two views");
  if (selected_views.empty()) throw Error(Errc::ConfigInvalid, "no views selected");
  if (ds.entity_count() < cfg_in.min_support) {
    throw Error(Errc::DatasetTooSmall, "dataset has " + std::to_string(ds.entity_count()) +
                                           " entities, fewer than MinSupport");
  }
  for (const auto& view : ds.views()) {
    for (const auto& col : view.attributes()) {
      if (!col.is_numeric()) {
        throw Error(Errc::NonNumericAttribute,
                    "view attribute '" + col.name() + "' is nominal; mining needs numeric views");
      }
    }
  }

  MinerConfig cfg = cfg_in;
  if (cfg.max_support > ds.entity_count()) {
    if (hooks.log) {
      hooks.log("MaxSupport " + std::to_string(cfg.max_support) + " exceeds |E| = " +
                std::to_string(ds.entity_count()) + "; clamped");
    }
    cfg.max_support = ds.entity_count();
  }

  std::vector<std::size_t> views = selected_views;
  std::sort(views.begin(), views.end());
  views.erase(std::unique(views.begin(), views.end()), views.end());
  std::vector<AttributeRef> attributes;
  for (const std::size_t v : views) {
    for (const auto& col : ds.view(v).attributes()) attributes.push_back({v, col.name()});
  }

  RedescriptionFamily family;
  family.selected_views = views;
  family.seed = cfg.seed;

  std::vector<std::optional<AttributeResult>> slots(attributes.size());
  std::vector<std::exception_ptr> errors;
  std::mutex mu;
  const auto groups = unif_div(attributes, cfg.n_threads);

  auto work = [&](const AttributeAssignment& group, std::size_t offset) {
    try {
      for (std::size_t i = 0; i < group.attributes.size(); ++i) {
        if (hooks.stop.stop_requested()) return;
        AttributeResult r = mine_attribute(ds, group.attributes[i], cfg);
        if (hooks.log) {
          std::lock_guard lock(mu);
          hooks.log("view " + std::to_string(r.attribute.view) + " attribute " + r.attribute.name +
                    ": " + std::to_string(r.individual.size()) + " individual, " +
                    std::to_string(r.interaction.size()) + " interaction");
        }
        slots[offset + i] = std::move(r);
      }
    } catch (...) {
      std::lock_guard lock(mu);
      errors.push_back(std::current_exception());
    }
  };

  {
    std::vector<std::jthread> workers;
    std::size_t offset = 0;
    for (const auto& g : groups) {
      if (groups.size() == 1) {
        work(g, offset);
      } else {
        workers.emplace_back(work, std::cref(g), offset);
      }
      offset += g.attributes.size();
    }
    // jthread's destructor would request a stop first
    for (auto& w : workers) w.join();
  }
  if (!errors.empty()) std::rethrow_exception(errors.front());

  for (auto& s : slots) {
    if (s) {
      family.sets.push_back(std::move(*s));
    } else {
      family.cancelled = true;
    }
  }
  return family;
}

DescribedCounts count_described(const RedescriptionFamily& family) {
  DescribedCounts c;
  std::set<AttributeRef> interacting;
  const std::set<std::size_t> selected(family.selected_views.begin(), family.selected_views.end());
  std::vector<double> js;
  for (const auto& s : family.sets) {
    if (!s.individual.empty()) ++c.n_ind;
    for (const auto& red : s.interaction) {
      for (const auto& a : red.attrs()) {
        if (selected.empty() || selected.contains(a.view)) interacting.insert(a);
      }
    }
    for (const auto& red : s.individual) js.push_back(red.jaccard());
    for (const auto& red : s.interaction) js.push_back(red.jaccard());
  }
  c.n_int = interacting.size();
  c.redescriptions = js.size();
  for (const double j : js) {
    c.mean_jaccard += j;
    c.n_accurate += j >= 0.7 ? 1 : 0;
  }
  if (!js.empty()) {
    c.mean_jaccard /= static_cast<double>(js.size());
    double ss = 0.0;
    for (const double j : js) ss += (j - c.mean_jaccard) * (j - c.mean_jaccard);
    c.sd_jaccard = js.size() > 1 ? std::sqrt(ss / static_cast<double>(js.size() - 1)) : 0.0;
  }
  return c;
}

}  // namespace rdm
