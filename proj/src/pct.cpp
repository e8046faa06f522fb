#include "rdm/pct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "rdm/error.hpp"
#include "seed_util.hpp"

namespace rdm {

TargetMatrix TargetMatrix::multiclass(std::vector<int> classes, std::size_t class_count) {
  TargetMatrix t;
  t.kind_ = Kind::Multiclass;
  t.rows_ = classes.size();
  t.columns_ = class_count;
  t.provenance_.resize(class_count);
  std::iota(t.provenance_.begin(), t.provenance_.end(), 0);
  t.offsets_.resize(t.rows_ + 1);
  t.cols_.reserve(t.rows_);
  for (std::size_t i = 0; i < t.rows_; ++i) {
    const int c = classes[i];
    if (c < 0 || static_cast<std::size_t>(c) >= class_count) {
      throw Error(Errc::UnknownCategory, "class index out of range in target");
    }
    t.offsets_[i] = i;
    t.cols_.push_back(static_cast<std::uint32_t>(c));
  }
  t.offsets_[t.rows_] = t.rows_;
  return t;
}

TargetMatrix TargetMatrix::multilabel(std::vector<SupportSet> columns, std::vector<int> provenance) {
  TargetMatrix t;
  t.kind_ = Kind::Multilabel;
  t.columns_ = columns.size();
  t.rows_ = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != t.rows_) throw Error(Errc::TargetLengthMismatch, "label columns differ in length");
  }
  if (provenance.empty()) {
    provenance.resize(t.columns_);
    std::iota(provenance.begin(), provenance.end(), 0);
  } else if (provenance.size() != t.columns_) {
    throw Error(Errc::TargetLengthMismatch, "provenance length differs from column count");
  }
  t.provenance_ = std::move(provenance);

  std::vector<std::size_t> counts(t.rows_, 0);
  for (const auto& c : columns) {
    for (const std::size_t i : c.indices()) ++counts[i];
  }
  t.offsets_.assign(t.rows_ + 1, 0);
  for (std::size_t i = 0; i < t.rows_; ++i) t.offsets_[i + 1] = t.offsets_[i] + counts[i];
  t.cols_.resize(t.offsets_[t.rows_]);
  std::vector<std::size_t> fill(t.offsets_.begin(), t.offsets_.end() - 1);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    for (const std::size_t i : columns[j].indices()) t.cols_[fill[i]++] = static_cast<std::uint32_t>(j);
  }
  return t;
}

TargetMatrix TargetMatrix::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, columns_);
  begin = std::min(begin, end);
  TargetMatrix t;
  t.kind_ = kind_;
  t.rows_ = rows_;
  t.columns_ = end - begin;
  t.provenance_.assign(provenance_.begin() + static_cast<std::ptrdiff_t>(begin),
                       provenance_.begin() + static_cast<std::ptrdiff_t>(end));
  t.offsets_.assign(rows_ + 1, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (const std::uint32_t c : positives(i)) {
      if (c >= begin && c < end) t.cols_.push_back(static_cast<std::uint32_t>(c - begin));
    }
    t.offsets_[i + 1] = t.cols_.size();
  }
  return t;
}

std::size_t PctModel::internal_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const PctNode& n) { return !n.is_leaf(); }));
}

namespace {

// n * Var where Var = sum_j p_j (1 - p_j).
double scaled_impurity(double n, double s1, double s2) {
  return n <= 0.0 ? 0.0 : (n * s1 - s2) / n;
}

class Trainer {
 public:
  Trainer(const View& view, const TargetMatrix& targets, const PctOptions& options)
      : view_(view), targets_(targets), options_(options) {
    if (options_.subspace_seed) rng_.seed(*options_.subspace_seed);
  }

  void grow(PctModel& model, std::vector<std::uint32_t> members, std::size_t depth, int parent) {
    const int id = static_cast<int>(model.nodes.size());
    model.nodes.emplace_back();
    {
      PctNode& node = model.nodes.back();
      node.parent = parent;
      node.depth = depth;
      node.entities = SupportSet(view_.rows());
      for (const std::uint32_t e : members) node.entities.set(e);
      node.prototype.assign(targets_.columns(), 0.0);
      for (const std::uint32_t e : members) {
        for (const std::uint32_t c : targets_.positives(e)) node.prototype[c] += 1.0;
      }
      if (!members.empty()) {
        for (double& p : node.prototype) p /= static_cast<double>(members.size());
      }
    }

    if (depth >= options_.max_depth || members.size() < 2 * std::max<std::size_t>(options_.min_leaf, 1)) {
      return;
    }
    const auto best = best_split(members);
    if (!best) return;

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    const auto values = view_.attribute(best->attribute).values();
    for (const std::uint32_t e : members) {
      (values[e] <= best->threshold ? left : right).push_back(e);
    }
    members.clear();
    members.shrink_to_fit();

    model.nodes[static_cast<std::size_t>(id)].split = *best;
    const int left_id = static_cast<int>(model.nodes.size());
    grow(model, std::move(left), depth + 1, id);
    const int right_id = static_cast<int>(model.nodes.size());
    grow(model, std::move(right), depth + 1, id);
    model.nodes[static_cast<std::size_t>(id)].left = left_id;
    model.nodes[static_cast<std::size_t>(id)].right = right_id;
  }

 private:
  std::vector<std::size_t> candidate_attributes() {
    std::vector<std::size_t> attrs(view_.size());
    std::iota(attrs.begin(), attrs.end(), 0);
    if (!options_.subspace_seed || attrs.size() <= 1) return attrs;
    const auto m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(attrs.size()))));
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, attrs.size() - 1);
      std::swap(attrs[i], attrs[pick(rng_)]);
    }
    attrs.resize(m);
    std::sort(attrs.begin(), attrs.end());
    return attrs;
  }

  std::optional<PctSplit> best_split(const std::vector<std::uint32_t>& members) {
    const std::size_t n = members.size();
    const std::size_t m = targets_.columns();
    const std::size_t min_leaf = std::max<std::size_t>(options_.min_leaf, 1);

    std::vector<double> total(m, 0.0);
    for (const std::uint32_t e : members) {
      for (const std::uint32_t c : targets_.positives(e)) total[c] += 1.0;
    }
    double s1 = 0.0;
    double s2 = 0.0;
    for (const double c : total) {
      s1 += c;
      s2 += c * c;
    }
    const double nd = static_cast<double>(n);
    const double parent = scaled_impurity(nd, s1, s2);

    std::optional<PctSplit> best;
    double best_gain = 1e-12;
    std::vector<std::uint32_t> order(members);
    std::vector<double> left(m);
    std::vector<double> right(m);

    for (const std::size_t a : candidate_attributes()) {
      const auto values = view_.attribute(a).values();
      std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        return values[x] < values[y] || (values[x] == values[y] && x < y);
      });
      if (values[order.front()] == values[order.back()]) continue;

      std::fill(left.begin(), left.end(), 0.0);
      right = total;
      double s1l = 0.0;
      double s2l = 0.0;
      double s1r = s1;
      double s2r = s2;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        for (const std::uint32_t c : targets_.positives(order[i])) {
          s2l += 2.0 * left[c] + 1.0;
          left[c] += 1.0;
          s2r -= 2.0 * right[c] - 1.0;
          right[c] -= 1.0;
          s1l += 1.0;
          s1r -= 1.0;
        }
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf) continue;
        if (nr < min_leaf) break;
        const double v = values[order[i]];
        const double w = values[order[i + 1]];
        if (v == w) continue;
        const double gain = (parent - scaled_impurity(static_cast<double>(nl), s1l, s2l) -
                             scaled_impurity(static_cast<double>(nr), s1r, s2r)) /
                            nd;
        if (gain > best_gain + 1e-12 || (!best && gain > 1e-12)) {
          double t = v + (w - v) / 2.0;
          if (!(t >= v && t < w)) t = v;
          best_gain = gain;
          best = PctSplit{a, t};
        }
      }
    }
    return best;
  }

  const View& view_;
  const TargetMatrix& targets_;
  const PctOptions& options_;
  std::mt19937_64 rng_;
};

}  // namespace

PctModel train_pct(const View& view, std::size_t view_index, const TargetMatrix& targets,
                   const PctOptions& options, const SupportSet* entity_subset) {
  if (view.size() == 0 || view.rows() == 0) throw Error(Errc::EmptyView, "cannot train on an empty view");
  if (targets.rows() != view.rows()) {
    throw Error(Errc::TargetLengthMismatch, "target rows differ from view rows");
  }
  for (const auto& col : view.attributes()) {
    if (!col.is_numeric()) {
      throw Error(Errc::NonNumericAttribute, "tree induction needs numeric attributes, got '" +
                                                 col.name() + "'");
    }
  }
  if (entity_subset && entity_subset->size() != view.rows()) {
    throw Error(Errc::UniverseMismatch, "entity subset universe differs from view rows");
  }

  std::vector<std::uint32_t> members;
  if (entity_subset) {
    for (const std::size_t i : entity_subset->indices()) members.push_back(static_cast<std::uint32_t>(i));
  } else {
    members.resize(view.rows());
    std::iota(members.begin(), members.end(), 0U);
  }

  PctModel model;
  model.view = view_index;
  model.target_kind = targets.kind();
  model.provenance = targets.provenance();
  Trainer trainer(view, targets, options);
  trainer.grow(model, std::move(members), 0, -1);
  return model;
}

std::vector<PctModel> train_forest(const View& view, std::size_t view_index,
                                   const TargetMatrix& targets, std::size_t n_trees,
                                   const PctOptions& options, std::uint64_t seed) {
  std::vector<PctModel> forest;
  forest.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    PctOptions opt = options;
    opt.subspace_seed = seeds::combine(seed, t);
    forest.push_back(train_pct(view, view_index, targets, opt));
  }
  return forest;
}

std::vector<Rule> transform_to_rules(const PctModel& model, const View& view) {
  std::vector<Rule> rules;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;

  for (std::size_t id = 1; id < model.nodes.size(); ++id) {
    const PctNode& node = model.nodes[id];

    std::map<std::size_t, std::pair<double, double>> bounds;
    std::size_t child = id;
    for (int p = node.parent; p >= 0; p = model.nodes[static_cast<std::size_t>(p)].parent) {
      const PctNode& anc = model.nodes[static_cast<std::size_t>(p)];
      const PctSplit& s = *anc.split;
      const auto& col = view.attribute(s.attribute);
      auto [it, fresh] = bounds.try_emplace(s.attribute, col.v_min(), col.v_max());
      auto& [lo, hi] = it->second;
      if (static_cast<std::size_t>(anc.left) == child) {
        hi = std::min(hi, s.threshold);
      } else {
        lo = std::max(lo, std::nextafter(s.threshold, std::numeric_limits<double>::infinity()));
      }
      child = static_cast<std::size_t>(p);
    }

    std::vector<Expr> lits;
    for (const auto& [a, b] : bounds) lits.push_back(Expr::lit(view.attribute(a).name(), b.first, b.second));
    Expr expr = lits.size() == 1 ? std::move(lits.front()) : Expr::all_of(std::move(lits));

    int prov = -1;
    if (!node.prototype.empty()) {
      const auto top = std::max_element(node.prototype.begin(), node.prototype.end());
      const auto col = static_cast<std::size_t>(top - node.prototype.begin());
      prov = col < model.provenance.size() ? model.provenance[col] : static_cast<int>(col);
    }

    Rule rule{Query(model.view, std::move(expr)), node.entities, prov};
    auto& bucket = by_hash[rule.support.hash()];
    bool replaced = false;
    for (const std::size_t k : bucket) {
      if (rules[k].support == rule.support) {
        if (rule.query.literal_count() < rules[k].query.literal_count()) rules[k] = std::move(rule);
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      bucket.push_back(rules.size());
      rules.push_back(std::move(rule));
    }
  }
  return rules;
}

}  // namespace rdm
