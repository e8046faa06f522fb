#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "rdm/config.hpp"
#include "rdm/dataset.hpp"
#include "rdm/pct.hpp"
#include "rdm/redescription.hpp"

namespace rdm {

/// Redescriptions found for one attribute: described alone and within
/// interactions with other attributes of its view.
struct AttributeResult {
  AttributeRef attribute;
  std::vector<Redescription> individual;
  std::vector<Redescription> interaction;
  double seconds = 0.0;
  std::size_t peak_candidates = 0;  // largest candidate store size reached
};

struct RedescriptionFamily {
  std::vector<std::size_t> selected_views;
  std::vector<AttributeResult> sets;  // ordered by (view, column)
  std::uint64_t seed = 0;
  std::map<std::string, std::string> metadata;
  bool cancelled = false;

  /// Two sets per processed attribute.
  [[nodiscard]] std::size_t set_count() const noexcept { return 2 * sets.size(); }
};

struct AttributeAssignment {
  std::size_t worker_id = 0;
  std::vector<AttributeRef> attributes;
};

/// Contiguous partition of `attributes` into `workers` groups whose sizes
/// differ by at most one (empty groups dropped).
std::vector<AttributeAssignment> unif_div(const std::vector<AttributeRef>& attributes,
                                          std::size_t workers);

/// Seed for one attribute's pipeline; independent of worker assignment.
std::uint64_t attribute_seed(std::uint64_t seed, const AttributeRef& attribute);

/// Rules of a PCT (plus `forest_trees` random-subspace trees) trained on one
/// view. Target columns are split into batches of at most num_target, one
/// tree set per batch. Rules with equal support keep the shorter query.
std::vector<Rule> tree_rules(const MultiViewDataset& ds, std::size_t view, const TargetMatrix& targets,
                             const MinerConfig& cfg, std::size_t forest_trees, std::uint64_t seed);

/// Alternating constrained mining for attribute `n`: trees on the partner
/// view learn the home rules, trees on the home view learn the partner rules,
/// and only home-view rules mentioning `n` are paired. Candidates are
/// completed over the remaining views and gathered in a store; returns
/// extract_final of that store.
std::vector<Redescription> clus_rmmw_const(const AttributeRef& n, const std::vector<Rule>& init_rules_home,
                                           const std::vector<Rule>& init_rules_partner,
                                           std::size_t partner_view, const MultiViewDataset& ds,
                                           const MinerConfig& cfg, std::uint64_t seed);

/// Full per-attribute pipeline: binning, seeded two-view creation, bin
/// refinement, completion and constrained interaction mining, repeated for
/// each random restart.
AttributeResult mine_attribute(const MultiViewDataset& ds, const AttributeRef& attribute,
                               const MinerConfig& cfg);

struct MinerHooks {
  std::stop_token stop;
  std::function<void(std::string_view)> log;
};

/// Mines every attribute of the selected views with cfg.n_threads workers.
/// Results do not depend on the worker count. Throws ConfigInvalid,
/// DatasetTooSmall, NonNumericAttribute.
RedescriptionFamily run_exitnerdom(const MultiViewDataset& ds, const std::vector<std::size_t>& selected_views,
                                   const MinerConfig& cfg, const MinerHooks& hooks = {});

struct DescribedCounts {
  std::size_t n_ind = 0;
  std::size_t n_int = 0;
  double mean_jaccard = 0.0;
  double sd_jaccard = 0.0;
  std::size_t redescriptions = 0;
  std::size_t n_accurate = 0;  // items with J >= 0.7
};

/// n_ind counts attributes with a nonempty individual set; n_int counts
/// attributes of the selected views that occur in some interaction-set query.
DescribedCounts count_described(const RedescriptionFamily& family);

}  // namespace rdm
