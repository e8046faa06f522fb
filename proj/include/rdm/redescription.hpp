#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdm/binning.hpp"
#include "rdm/config.hpp"
#include "rdm/dataset.hpp"
#include "rdm/measures.hpp"
#include "rdm/pct.hpp"
#include "rdm/query.hpp"
#include "rdm/support_set.hpp"

namespace rdm {

/// Tuple of per-view queries with cached supports and quality.
class Redescription {
 public:
  Redescription() = default;
  explicit Redescription(std::size_t view_count);

  /// Sets the query on its view; `support` must be its support.
  void set(Query query, SupportSet support);
  void clear(std::size_t view);

  [[nodiscard]] std::size_t view_count() const noexcept { return queries_.size(); }
  [[nodiscard]] const std::optional<Query>& query(std::size_t view) const { return queries_.at(view); }
  [[nodiscard]] const SupportSet& query_support(std::size_t view) const;
  [[nodiscard]] bool has(std::size_t view) const { return queries_.at(view).has_value(); }
  [[nodiscard]] std::vector<std::size_t> present_views() const;
  [[nodiscard]] std::size_t present_count() const noexcept { return present_; }

  [[nodiscard]] const SupportSet& support() const noexcept { return support_; }
  [[nodiscard]] const SupportSet& union_support() const noexcept { return union_; }
  [[nodiscard]] const QualityReport& report() const noexcept { return report_; }
  [[nodiscard]] double jaccard() const noexcept { return report_.jaccard; }
  [[nodiscard]] double p_value() const noexcept { return report_.p_value; }

  [[nodiscard]] std::vector<AttributeRef> attrs() const;
  [[nodiscard]] std::size_t literal_count() const;
  /// Query texts joined per view; identifies the redescription.
  [[nodiscard]] std::string key() const;

  /// J >= minJS, p <= maxPval and MinSupport <= |supp| <= MaxSupport.
  [[nodiscard]] bool passes(const MinerConfig& cfg) const;

  friend bool operator==(const Redescription& a, const Redescription& b) {
    return a.queries_ == b.queries_;
  }

 private:
  void recompute();

  std::vector<std::optional<Query>> queries_;
  std::vector<std::optional<SupportSet>> supports_;
  std::size_t present_ = 0;
  SupportSet support_;
  SupportSet union_;
  QualityReport report_;
};

/// Redescription over two rules on distinct views.
Redescription make_redescription(std::size_t view_count, const Rule& a, const Rule& b);

/// Attribute-set symmetric difference size.
std::size_t attribute_difference(const Redescription& a, const Redescription& b);

/// Bounded candidate set. Same-support items are deduplicated (keeping the
/// higher Jaccard) unless allow_same_support, in which case a same-support
/// item is admitted only when its attribute set differs from each existing
/// one by at least num_new_attr attributes. Exceeding max_size compacts the
/// store to the working_size best items by candidate_score.
class CandidateStore {
 public:
  CandidateStore(const MinerConfig& cfg, std::size_t entity_count);

  /// Throws InvariantViolation for an item failing the config thresholds.
  void insert(Redescription red);
  void insert(std::vector<Redescription> reds);

  [[nodiscard]] const std::vector<Redescription>& items() const noexcept { return items_; }
  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
  [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
  [[nodiscard]] std::size_t compactions() const noexcept { return compactions_; }
  /// Largest size seen between insertions.
  [[nodiscard]] std::size_t peak_size() const noexcept { return peak_; }

 private:
  void compact();

  const MinerConfig* cfg_;
  std::size_t entity_count_;
  std::vector<Redescription> items_;
  std::size_t compactions_ = 0;
  std::size_t peak_ = 0;
};

/// Context-free ranking score: w0*J + w1*min(-log10 p, 300)/300 minus the
/// size penalty w5*min(literals/rule_size_norm, 1).
double candidate_score(const Redescription& red, const MinerConfig& cfg);

/// Greedy diverse selection of up to num_ret_red items. Each step picks the
/// item maximizing the candidate score plus w2*attribute diversity +
/// w3*element diversity + w4*coverage gain; ties go to the earlier item.
/// A store no larger than num_ret_red is returned whole, ordered by
/// candidate score.
std::vector<Redescription> extract_final(std::span<const Redescription> items,
                                         const MinerConfig& cfg, std::size_t entity_count);

/// Pairs each rule of `rules_a` with each rule of `rules_b`, or only the
/// given index pairs when `pairs` is set. Sides that allow negation also try
/// the negated rule. Keeps pairs passing the config thresholds, deduplicated
/// as in CandidateStore. cfg.left applies to rules_a, cfg.right to rules_b.
/// Throws SameView.
std::vector<Redescription> create_reds(const std::vector<Rule>& rules_a,
                                       const std::vector<Rule>& rules_b, std::size_t view_count,
                                       const MinerConfig& cfg,
                                       const std::optional<std::vector<std::pair<std::size_t, std::size_t>>>& pairs =
                                           std::nullopt);

/// Greedily ORs further bins into the bin-built query on the binned view
/// while Jaccard strictly increases, best improvement first. Contiguous bins
/// are written as one interval. Without disjunction only bins adjacent to a
/// single contiguous run are tried. Items whose query on that view is not a
/// union of bins come back unchanged.
Redescription refine_with_bins(const Redescription& red, const BinSpec& spec,
                               const std::vector<Rule>& bin_rules, const MinerConfig& cfg);

/// Adds to every item the rule of `target_view` maximizing Jaccard with the
/// item's support (first rule wins ties); keeps results passing the config
/// thresholds. Throws ViewAlreadyPresent.
std::vector<Redescription> complete_reds(const std::vector<Redescription>& incomplete,
                                         std::size_t target_view, const std::vector<Rule>& rules,
                                         const MinerConfig& cfg);

/// Joins pairs of stored items with J >= min_add_red_js over the same views by
/// per-view conjunction; admits joins passing the thresholds with Jaccard
/// above both parents. Returns the admitted joins (already inserted).
std::vector<Redescription> conjunctive_refine(CandidateStore& store, const MinerConfig& cfg);

/// Shrinks each query against the other queries' joint support; a
/// minimization is kept only when the overall Jaccard does not drop. A
/// literal on `keep` is never removed from its view's query when it is the
/// last one on that attribute.
Redescription minimize_rules(const Redescription& red, const MultiViewDataset& ds,
                             const std::optional<AttributeRef>& keep = std::nullopt);

}  // namespace rdm
