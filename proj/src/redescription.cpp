#include "rdm/redescription.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "rdm/error.hpp"

namespace rdm {

Redescription::Redescription(std::size_t view_count)
    : queries_(view_count), supports_(view_count) {}

void Redescription::set(Query query, SupportSet support) {
  const std::size_t v = query.view();
  if (v >= queries_.size()) throw Error(Errc::ViewIndexOutOfRange, "query view out of range");
  queries_[v] = std::move(query);
  supports_[v] = std::move(support);
  recompute();
}

void Redescription::clear(std::size_t view) {
  queries_.at(view).reset();
  supports_.at(view).reset();
  recompute();
}

const SupportSet& Redescription::query_support(std::size_t view) const {
  const auto& s = supports_.at(view);
  if (!s) throw Error(Errc::ViewIndexOutOfRange, "no query on view " + std::to_string(view));
  return *s;
}

std::vector<std::size_t> Redescription::present_views() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < queries_.size(); ++v) {
    if (queries_[v]) out.push_back(v);
  }
  return out;
}

void Redescription::recompute() {
  std::vector<SupportSet> present;
  for (const auto& s : supports_) {
    if (s) present.push_back(*s);
  }
  present_ = present.size();
  if (present.empty()) {
    support_ = {};
    union_ = {};
    report_ = {};
    return;
  }
  support_ = present.front();
  union_ = present.front();
  for (std::size_t i = 1; i < present.size(); ++i) {
    support_ &= present[i];
    union_ |= present[i];
  }
  report_ = quality_report(present);
}

std::vector<AttributeRef> Redescription::attrs() const {
  std::vector<AttributeRef> out;
  for (const auto& q : queries_) {
    if (!q) continue;
    const auto a = q->attrs();
    out.insert(out.end(), a.begin(), a.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Redescription::literal_count() const {
  std::size_t n = 0;
  for (const auto& q : queries_) n += q ? q->literal_count() : 0;
  return n;
}

std::string Redescription::key() const {
  std::string k;
  for (std::size_t v = 0; v < queries_.size(); ++v) {
    if (!queries_[v]) continue;
    k += 'Q';
    k += std::to_string(v);
    k += ": ";
    k += queries_[v]->to_string();
    k += '\n';
  }
  return k;
}

bool Redescription::passes(const MinerConfig& cfg) const {
  const std::size_t s = support_.count();
  return present_ >= 2 && report_.jaccard >= cfg.min_jaccard && report_.p_value <= cfg.max_pvalue &&
         s >= cfg.min_support && s <= cfg.max_support;
}

Redescription make_redescription(std::size_t view_count, const Rule& a, const Rule& b) {
  if (a.query.view() == b.query.view()) throw Error(Errc::SameView, "both rules are on one view");
  Redescription r(view_count);
  r.set(a.query, a.support);
  r.set(b.query, b.support);
  return r;
}

std::size_t attribute_difference(const Redescription& a, const Redescription& b) {
  const auto x = a.attrs();
  const auto y = b.attrs();
  std::vector<AttributeRef> diff;
  std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(diff));
  return diff.size();
}

namespace {

// Same-support admission shared by the store and create_reds. Returns the
// slot the item landed in, or nullopt when it was dropped.
class DedupIndex {
 public:
  std::optional<std::size_t> admit(std::vector<Redescription>& items, Redescription red,
                                   const MinerConfig& cfg) {
    auto& bucket = index_[red.support().hash()];
    const std::string key = red.key();
    for (const std::size_t k : bucket) {
      const Redescription& old = items[k];
      if (!(old.support() == red.support())) continue;
      if (old.key() == key) return std::nullopt;
      if (!cfg.allow_same_support) {
        if (red.jaccard() > old.jaccard()) {
          items[k] = std::move(red);
          return k;
        }
        return std::nullopt;
      }
      if (attribute_difference(old, red) < cfg.num_new_attr) return std::nullopt;
    }
    bucket.push_back(items.size());
    items.push_back(std::move(red));
    return items.size() - 1;
  }

  void rebuild(const std::vector<Redescription>& items) {
    index_.clear();
    for (std::size_t k = 0; k < items.size(); ++k) index_[items[k].support().hash()].push_back(k);
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
};

double pair_jaccard(const SupportSet& a, const SupportSet& b) {
  const std::size_t inter = a.intersection_count(b);
  const std::size_t uni = a.count() + b.count() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

CandidateStore::CandidateStore(const MinerConfig& cfg, std::size_t entity_count)
    : cfg_(&cfg), entity_count_(entity_count) {}

void CandidateStore::insert(Redescription red) {
  if (!red.passes(*cfg_)) {
    throw Error(Errc::InvariantViolation,
                "store insert of an item failing the thresholds: " + red.key());
  }
  DedupIndex idx;
  idx.rebuild(items_);
  idx.admit(items_, std::move(red), *cfg_);
  if (items_.size() > cfg_->max_size) compact();
  peak_ = std::max(peak_, items_.size());
}

void CandidateStore::insert(std::vector<Redescription> reds) {
  DedupIndex idx;
  idx.rebuild(items_);
  for (auto& red : reds) {
    if (!red.passes(*cfg_)) {
      throw Error(Errc::InvariantViolation,
                  "store insert of an item failing the thresholds: " + red.key());
    }
    idx.admit(items_, std::move(red), *cfg_);
    if (items_.size() > cfg_->max_size) {
      compact();
      idx.rebuild(items_);
    }
    peak_ = std::max(peak_, items_.size());
  }
}

void CandidateStore::compact() {
  std::vector<double> score(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) score[i] = candidate_score(items_[i], *cfg_);
  std::vector<std::size_t> order(items_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  order.resize(std::min(order.size(), cfg_->working_size));
  std::vector<Redescription> kept;
  kept.reserve(order.size());
  for (const std::size_t i : order) kept.push_back(std::move(items_[i]));
  items_ = std::move(kept);
  ++compactions_;
}

double candidate_score(const Redescription& red, const MinerConfig& cfg) {
  const double p = red.p_value();
  const double logp = p <= 0.0 ? 300.0 : std::min(-std::log10(p), 300.0);
  const double size = std::min(static_cast<double>(red.literal_count()) / cfg.rule_size_norm, 1.0);
  return cfg.weight(0) * red.jaccard() + cfg.weight(1) * std::max(logp, 0.0) / 300.0 -
         cfg.weight(5) * size;
}

std::vector<Redescription> extract_final(std::span<const Redescription> items,
                                         const MinerConfig& cfg, std::size_t entity_count) {
  const std::size_t n = items.size();
  std::vector<double> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = candidate_score(items[i], cfg);

  if (n <= cfg.num_ret_red) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return base[a] > base[b]; });
    std::vector<Redescription> out;
    out.reserve(n);
    for (const std::size_t i : order) out.push_back(items[i]);
    return out;
  }

  std::vector<std::vector<AttributeRef>> item_attrs(n);
  for (std::size_t i = 0; i < n; ++i) item_attrs[i] = items[i].attrs();

  std::set<AttributeRef> seen;
  SupportSet covered(entity_count);
  std::vector<double> max_overlap(n, 0.0);
  std::vector<bool> taken(n, false);
  std::vector<Redescription> out;
  const double universe = entity_count == 0 ? 1.0 : static_cast<double>(entity_count);

  while (out.size() < cfg.num_ret_red) {
    std::optional<std::size_t> best;
    double best_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const auto& at = item_attrs[i];
      const std::size_t fresh = static_cast<std::size_t>(
          std::count_if(at.begin(), at.end(), [&](const AttributeRef& a) { return !seen.contains(a); }));
      const double attr_div = at.empty() ? 0.0 : static_cast<double>(fresh) / static_cast<double>(at.size());
      const double elem_div = out.empty() ? 1.0 : 1.0 - max_overlap[i];
      const double gain = static_cast<double>(items[i].support().difference_count(covered)) / universe;
      const double value =
          base[i] + cfg.weight(2) * attr_div + cfg.weight(3) * elem_div + cfg.weight(4) * gain;
      if (!best || value > best_value) {
        best = i;
        best_value = value;
      }
    }
    if (!best) break;
    const std::size_t b = *best;
    taken[b] = true;
    for (const auto& a : item_attrs[b]) seen.insert(a);
    covered |= items[b].support();
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) {
        max_overlap[i] = std::max(max_overlap[i], pair_jaccard(items[i].support(), items[b].support()));
      }
    }
    out.push_back(items[b]);
  }
  return out;
}

std::vector<Redescription> create_reds(
    const std::vector<Rule>& rules_a, const std::vector<Rule>& rules_b, std::size_t view_count,
    const MinerConfig& cfg,
    const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& pairs) {
  if (!rules_a.empty() && !rules_b.empty() && rules_a.front().query.view() == rules_b.front().query.view()) {
    throw Error(Errc::SameView, "create_reds needs rules from two different views");
  }

  auto variants = [](const std::vector<Rule>& rules, bool neg) {
    std::vector<std::vector<Rule>> out(rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
      out[i].push_back(rules[i]);
      if (!neg) continue;
      if (auto nq = negate(rules[i].query)) {
        out[i].push_back(Rule{std::move(*nq), rules[i].support.complement(), rules[i].provenance});
      }
    }
    return out;
  };
  const auto va = variants(rules_a, cfg.left.allow_neg);
  const auto vb = variants(rules_b, cfg.right.allow_neg);

  std::vector<Redescription> kept;
  DedupIndex idx;
  auto try_pair = [&](const Rule& a, const Rule& b) {
    const std::size_t sa = a.support.count();
    const std::size_t sb = b.support.count();
    const std::size_t lo = std::min(sa, sb);
    const std::size_t hi = std::max(sa, sb);
    if (lo < cfg.min_support || hi == 0) return;
    if (static_cast<double>(lo) / static_cast<double>(hi) < cfg.min_jaccard) return;
    const std::size_t inter = a.support.intersection_count(b.support);
    if (inter < cfg.min_support || inter > cfg.max_support) return;
    const double j = static_cast<double>(inter) / static_cast<double>(sa + sb - inter);
    if (j < cfg.min_jaccard) return;
    Redescription red = make_redescription(view_count, a, b);
    if (!red.passes(cfg)) return;
    idx.admit(kept, std::move(red), cfg);
  };
  auto try_indices = [&](std::size_t i, std::size_t j) {
    for (const Rule& a : va[i]) {
      for (const Rule& b : vb[j]) try_pair(a, b);
    }
  };

  if (pairs) {
    for (const auto& [i, j] : *pairs) {
      if (i < va.size() && j < vb.size()) try_indices(i, j);
    }
  } else {
    for (std::size_t i = 0; i < va.size(); ++i) {
      for (std::size_t j = 0; j < vb.size(); ++j) try_indices(i, j);
    }
  }
  return kept;
}

Redescription refine_with_bins(const Redescription& red, const BinSpec& spec,
                               const std::vector<Rule>& bin_rules, const MinerConfig& cfg) {
  const std::size_t home = spec.attribute.view;
  if (home >= red.view_count() || !red.has(home) || bin_rules.empty()) return red;
  const SupportSet& h = red.query_support(home);

  std::vector<bool> in(bin_rules.size(), false);
  SupportSet covered(h.size());
  for (std::size_t s = 0; s < bin_rules.size(); ++s) {
    if (!bin_rules[s].support.empty() && bin_rules[s].support.is_subset_of(h)) {
      in[s] = true;
      covered |= bin_rules[s].support;
    }
  }
  if (!(covered == h)) return red;

  auto contiguous = [&] {
    const auto first = std::find(in.begin(), in.end(), true);
    const auto last = std::find(in.rbegin(), in.rend(), true).base();
    return std::all_of(first, last, [](bool b) { return b; });
  };
  if (!cfg.left.allow_disj && !contiguous()) return red;

  // Intersection and union of the other views' supports.
  std::optional<SupportSet> others_and;
  std::optional<SupportSet> others_or;
  for (const std::size_t v : red.present_views()) {
    if (v == home) continue;
    const SupportSet& s = red.query_support(v);
    if (!others_and) {
      others_and = s;
      others_or = s;
    } else {
      *others_and &= s;
      *others_or |= s;
    }
  }
  if (!others_and) return red;

  auto jaccard_with = [&](const SupportSet& home_support) {
    const std::size_t inter = home_support.intersection_count(*others_and);
    const std::size_t uni = home_support.union_count(*others_or);
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
  };

  SupportSet current = h;
  double best = jaccard_with(current);
  bool changed = false;
  for (;;) {
    std::optional<std::size_t> pick;
    double pick_j = best;
    const auto first = static_cast<std::size_t>(std::find(in.begin(), in.end(), true) - in.begin());
    const auto last = in.size() - 1 -
                      static_cast<std::size_t>(std::find(in.rbegin(), in.rend(), true) - in.rbegin());
    for (std::size_t s = 0; s < bin_rules.size(); ++s) {
      if (in[s]) continue;
      if (!cfg.left.allow_disj && s + 1 != first && s != last + 1) continue;
      const double j = jaccard_with(current | bin_rules[s].support);
      if (j > pick_j) {
        pick = s;
        pick_j = j;
      }
    }
    if (!pick) break;
    in[*pick] = true;
    current |= bin_rules[*pick].support;
    best = pick_j;
    changed = true;
  }
  if (!changed) return red;

  std::vector<Expr> runs;
  for (std::size_t s = 0; s < in.size();) {
    if (!in[s]) {
      ++s;
      continue;
    }
    std::size_t e = s;
    while (e + 1 < in.size() && in[e + 1]) ++e;
    const Literal lo = bin_rules[s].query.literals().front();
    const Literal hi = bin_rules[e].query.literals().front();
    runs.push_back(Expr::lit(lo.attribute, lo.low, hi.high));
    s = e + 1;
  }
  Expr expr = runs.size() == 1 ? std::move(runs.front()) : Expr::any_of(std::move(runs));
  Redescription out = red;
  out.set(Query(home, std::move(expr)), std::move(current));
  return out;
}

std::vector<Redescription> complete_reds(const std::vector<Redescription>& incomplete,
                                         std::size_t target_view, const std::vector<Rule>& rules,
                                         const MinerConfig& cfg) {
  std::vector<Redescription> out;
  for (const auto& red : incomplete) {
    if (target_view < red.view_count() && red.has(target_view)) {
      throw Error(Errc::ViewAlreadyPresent, "redescription already has a query on view " +
                                                std::to_string(target_view));
    }
    std::optional<std::size_t> best;
    double best_j = -1.0;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const double j = pair_jaccard(red.support(), rules[i].support);
      if (j > best_j) {
        best = i;
        best_j = j;
      }
    }
    if (!best || best_j < cfg.min_jaccard) continue;
    Redescription done = red;
    done.set(rules[*best].query, rules[*best].support);
    if (done.passes(cfg)) out.push_back(std::move(done));
  }
  return out;
}

std::vector<Redescription> conjunctive_refine(CandidateStore& store, const MinerConfig& cfg) {
  const std::vector<Redescription> items = store.items();
  std::vector<Redescription> joins;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Redescription& a = items[i];
    if (a.jaccard() < cfg.min_add_red_js) continue;
    const auto views = a.present_views();
    for (std::size_t k = i + 1; k < items.size(); ++k) {
      const Redescription& b = items[k];
      if (b.jaccard() < cfg.min_add_red_js || b.present_views() != views) continue;
      if (a.support().intersection_count(b.support()) < cfg.min_support) continue;

      Redescription joined(a.view_count());
      bool ok = true;
      for (const std::size_t v : views) {
        auto q = conjoin(*a.query(v), *b.query(v));
        if (!q) {
          ok = false;
          break;
        }
        joined.set(std::move(*q), a.query_support(v) & b.query_support(v));
      }
      if (!ok) continue;
      if (joined.jaccard() > std::max(a.jaccard(), b.jaccard()) && joined.passes(cfg)) {
        joins.push_back(std::move(joined));
      }
    }
  }
  store.insert(joins);
  return joins;
}

Redescription minimize_rules(const Redescription& red, const MultiViewDataset& ds,
                             const std::optional<AttributeRef>& keep) {
  Redescription current = red;
  for (const std::size_t v : red.present_views()) {
    std::optional<SupportSet> others;
    for (const std::size_t w : current.present_views()) {
      if (w == v) continue;
      if (others) {
        *others &= current.query_support(w);
      } else {
        others = current.query_support(w);
      }
    }
    if (!others) continue;
    std::optional<std::string_view> keep_name;
    if (keep && keep->view == v) keep_name = keep->name;
    Query q = minimize(*current.query(v), ds, *others, keep_name);
    if (q == *current.query(v)) continue;
    Redescription candidate = current;
    SupportSet s = evaluate(q, ds);
    candidate.set(std::move(q), std::move(s));
    if (candidate.jaccard() >= current.jaccard()) current = std::move(candidate);
  }
  return current;
}

}  // namespace rdm
