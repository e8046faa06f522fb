#include "rdm/explainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "rdm/error.hpp"

namespace rdm {

namespace {

struct Pick {
  std::size_t index = 0;
  double score = 0.0;
  double precision = 0.0;
  std::size_t num_cov = 0;
};

bool better(const Pick& a, const Pick& b, const std::vector<ExplainCandidate>& cands) {
  if (a.score != b.score) return a.score > b.score;
  if (a.precision != b.precision) return a.precision > b.precision;
  if (a.num_cov != b.num_cov) return a.num_cov > b.num_cov;
  return cands[a.index].id < cands[b.index].id;
}

// Runs one selection (redescriptions or rules) for one class.
void select_class(const std::vector<ExplainCandidate>& cands, const std::vector<double>& prec,
                  const SupportSet& class_set, double delta, bool reds,
                  std::vector<std::size_t>& chosen, std::vector<double>& scores, std::size_t& counter,
                  bool& exhausted) {
  SupportSet covered(class_set.size());
  counter = class_set.count();
  std::vector<std::size_t> chosen_idx;
  while (counter > 0) {
    std::optional<Pick> best;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (cands[i].is_redescription != reds || cands[i].support.empty() || prec[i] < delta) continue;
      const std::size_t num_cov = (cands[i].support & class_set).difference_count(covered);
      if (num_cov == 0) continue;
      const double frac = static_cast<double>(num_cov) / static_cast<double>(counter);
      const double score = reds ? (frac + cands[i].jaccard + 2.0 * prec[i]) / 4.0
                                : (frac + 2.0 * prec[i]) / 3.0;
      const Pick p{i, score, prec[i], num_cov};
      if (!best || better(p, *best, cands)) best = p;
    }
    if (!best) {
      exhausted = true;
      break;
    }
    chosen_idx.push_back(best->index);
    scores.push_back(best->score);
    covered |= cands[best->index].support & class_set;
    counter -= std::min(counter, best->num_cov);
  }

  if (reds && counter == 0) {
    for (std::size_t& c : chosen_idx) {
      std::optional<std::size_t> swap;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        if (!cands[i].is_redescription || i == c) continue;
        if (std::find(chosen_idx.begin(), chosen_idx.end(), i) != chosen_idx.end()) continue;
        if (!(cands[i].support == cands[c].support)) continue;
        if (cands[i].jaccard <= cands[c].jaccard || prec[i] < prec[c]) continue;
        if (!swap || cands[i].jaccard > cands[*swap].jaccard) swap = i;
      }
      if (swap) c = *swap;
    }
  }
  for (const std::size_t i : chosen_idx) chosen.push_back(cands[i].id);
}

std::vector<double> class_precisions(const std::vector<ExplainCandidate>& cands,
                                     const TargetColumn& predictions, int c) {
  std::vector<double> out(cands.size(), 0.0);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!cands[i].support.empty()) out[i] = precision(cands[i].support, predictions, c);
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

SelectionState construct_sets(const std::vector<ExplainCandidate>& candidates,
                              const TargetColumn& predictions, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw Error(Errc::ConfigInvalid, "delta must lie in [0, 1]");
  for (const auto& c : candidates) {
    if (c.support.size() != predictions.size()) {
      throw Error(Errc::UniverseMismatch, "candidate support and predictions differ in length");
    }
  }
  SelectionState state;
  state.delta = delta;
  for (std::size_t c = 0; c < predictions.class_count(); ++c) {
    const int cls = static_cast<int>(c);
    SupportSet class_set(predictions.size());
    for (std::size_t e = 0; e < predictions.size(); ++e) {
      if (predictions.labels[e] == cls) class_set.set(e);
    }
    const auto prec = class_precisions(candidates, predictions, cls);
    ClassSelection sel;
    sel.class_index = cls;
    sel.class_size = class_set.count();
    select_class(candidates, prec, class_set, delta, true, sel.chosen_reds, sel.red_scores, sel.ncov_reds,
                 sel.reds_exhausted);
    select_class(candidates, prec, class_set, delta, false, sel.chosen_rules, sel.rule_scores,
                 sel.ncov_rules, sel.rules_exhausted);
    state.classes.push_back(std::move(sel));
  }
  return state;
}

MultiViewDataset with_prediction_view(const MultiViewDataset& ds, const TargetColumn& predictions) {
  if (predictions.size() != ds.entity_count()) {
    throw Error(Errc::RowCountMismatch, "predictions do not match the entity count");
  }
  std::vector<AttributeColumn> cols;
  for (std::size_t c = 0; c < predictions.class_count(); ++c) {
    std::vector<double> v(predictions.size());
    for (std::size_t e = 0; e < v.size(); ++e) v[e] = predictions.labels[e] == static_cast<int>(c) ? 1.0 : 0.0;
    cols.push_back(AttributeColumn::numeric("pred_" + predictions.classes[c], std::move(v)));
  }
  std::vector<View> views = ds.views();
  views.emplace_back(std::move(cols), "predictions");
  return assemble_dataset(std::move(views), predictions, ds.entity_ids());
}

std::vector<ExplainCandidate> explain_candidates(const RedescriptionFamily& family,
                                                 const MultiViewDataset& ds,
                                                 std::size_t prediction_view) {
  std::vector<ExplainCandidate> out;
  std::map<std::string, std::size_t> red_keys;
  std::map<std::string, std::size_t> rule_keys;

  auto add_red = [&](const Redescription& red) {
    ExplainCandidate c;
    c.is_redescription = true;
    c.jaccard = red.jaccard();
    std::optional<SupportSet> s;
    for (const std::size_t v : red.present_views()) {
      if (v == prediction_view) continue;
      c.queries.push_back(*red.query(v));
      c.key += red.query(v)->to_string() + ";";
      if (s) {
        *s &= red.query_support(v);
      } else {
        s = red.query_support(v);
      }
    }
    if (!s) return;
    c.support = std::move(*s);
    if (auto it = red_keys.find(c.key); it != red_keys.end()) {
      auto& old = out[it->second];
      old.jaccard = std::max(old.jaccard, c.jaccard);
    } else {
      c.id = out.size();
      red_keys.emplace(c.key, out.size());
      out.push_back(c);
    }
    for (const auto& q : c.queries) {
      const std::string key = q.to_string() + "@" + std::to_string(q.view());
      if (rule_keys.contains(key)) continue;
      ExplainCandidate r;
      r.id = out.size();
      r.queries = {q};
      r.support = evaluate(q, ds);
      r.key = key;
      rule_keys.emplace(key, out.size());
      out.push_back(std::move(r));
    }
  };

  for (const auto& s : family.sets) {
    for (const auto& red : s.individual) add_red(red);
    for (const auto& red : s.interaction) add_red(red);
  }
  return out;
}

std::vector<SurrogateItem> surrogate_items(const SelectionState& state,
                                           const std::vector<ExplainCandidate>& candidates,
                                           const TargetColumn& predictions, bool redescriptions,
                                           bool rules) {
  std::vector<SurrogateItem> out;
  auto add = [&](std::size_t id, double score, int cls) {
    const ExplainCandidate& c = candidates.at(id);
    SurrogateItem item;
    item.queries = c.queries;
    item.class_index = cls;
    item.score = score;
    item.precision = precision(c.support, predictions, cls);
    item.support_size = c.support.count();
    item.key = c.key;
    out.push_back(std::move(item));
  };
  for (const auto& sel : state.classes) {
    if (redescriptions) {
      for (std::size_t i = 0; i < sel.chosen_reds.size(); ++i) add(sel.chosen_reds[i], sel.red_scores[i], sel.class_index);
    }
    if (rules) {
      for (std::size_t i = 0; i < sel.chosen_rules.size(); ++i) add(sel.chosen_rules[i], sel.rule_scores[i], sel.class_index);
    }
  }
  return out;
}

std::vector<Redescription> entropy_filter(const std::vector<Redescription>& items,
                                          const TargetColumn& labels, double j_min,
                                          double max_support_frac, double entropy_frac) {
  std::vector<double> entropy(items.size(), 0.0);
  double max_entropy = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].support().empty()) continue;
    entropy[i] = shannon_entropy(items[i].support(), labels);
    max_entropy = std::max(max_entropy, entropy[i]);
  }
  std::vector<Redescription> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& red = items[i];
    const double n = static_cast<double>(red.support().size());
    if (red.jaccard() < j_min) continue;
    if (static_cast<double>(red.support().count()) > max_support_frac * n) continue;
    if (entropy[i] != 0.0 && !(entropy[i] < entropy_frac * max_entropy)) continue;
    out.push_back(red);
  }
  return out;
}

double FoldReport::mean() const { return mean_of(combined_fidelity); }

double FoldReport::sd() const {
  if (combined_fidelity.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (const double f : combined_fidelity) ss += (f - m) * (f - m);
  return std::sqrt(ss / static_cast<double>(combined_fidelity.size() - 1));
}

std::vector<std::vector<std::size_t>> stratified_folds(const TargetColumn& predictions, std::size_t k,
                                                       std::uint64_t seed) {
  const auto hist = predictions.class_histogram();
  std::size_t smallest = 0;
  bool any = false;
  for (const std::size_t h : hist) {
    if (h == 0) continue;
    smallest = any ? std::min(smallest, h) : h;
    any = true;
  }
  if (k < 2 || !any || k > smallest) {
    throw Error(Errc::BadFoldCount, "fold count " + std::to_string(k) +
                                        " needs 2 <= k <= smallest class size " + std::to_string(smallest));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (std::size_t c = 0; c < hist.size(); ++c) {
    std::vector<std::size_t> members;
    for (std::size_t e = 0; e < predictions.size(); ++e) {
      if (predictions.labels[e] == static_cast<int>(c)) members.push_back(e);
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (const std::size_t e : members) {
      folds[next].push_back(e);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

FoldReport kfold_fidelity(const MultiViewDataset& ds, const TargetColumn& predictions,
                          const MinerConfig& cfg, std::size_t k, double delta) {
  const auto folds = stratified_folds(predictions, k, cfg.seed);
  std::vector<std::size_t> explanatory(ds.view_count());
  std::iota(explanatory.begin(), explanatory.end(), 0);

  FoldReport report;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < k; ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train.begin(), train.end());
    const MultiViewDataset train_ds = ds.select_rows(train);
    const TargetColumn train_pred = predictions.select_rows(train);
    const MultiViewDataset mining_ds = with_prediction_view(train_ds, train_pred);
    const RedescriptionFamily family = run_exitnerdom(mining_ds, explanatory, cfg);
    const auto cands = explain_candidates(family, mining_ds, ds.view_count());
    const SelectionState state = construct_sets(cands, train_pred, delta);

    const MultiViewDataset test_ds = ds.select_rows(folds[f]);
    const TargetColumn test_pred = predictions.select_rows(folds[f]);
    report.redescription_fidelity.push_back(
        fidelity(surrogate_items(state, cands, train_pred, true, false), test_ds, test_pred));
    report.rule_fidelity.push_back(
        fidelity(surrogate_items(state, cands, train_pred, false, true), test_ds, test_pred));
    report.combined_fidelity.push_back(
        fidelity(surrogate_items(state, cands, train_pred, true, true), test_ds, test_pred));
  }
  return report;
}

}  // namespace rdm
