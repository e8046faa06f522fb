#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rdm/config.hpp"
#include "rdm/dataset.hpp"
#include "rdm/measures.hpp"
#include "rdm/miner.hpp"
#include "rdm/query.hpp"
#include "rdm/redescription.hpp"
#include "rdm/support_set.hpp"

namespace rdm {

/// A redescription or a single rule offered to the selection. Only queries
/// on explanatory views are kept, so a candidate can be applied to entities
/// whose model predictions are unknown.
struct ExplainCandidate {
  std::size_t id = 0;
  bool is_redescription = false;
  std::vector<Query> queries;
  SupportSet support;
  double jaccard = 0.0;  // accuracy of the source redescription
  std::string key;
};

struct ClassSelection {
  int class_index = 0;
  std::size_t class_size = 0;
  std::size_t ncov_reds = 0;   // entities of the class still uncovered by chosen_reds
  std::size_t ncov_rules = 0;  // same for chosen_rules
  std::vector<std::size_t> chosen_reds;   // candidate ids
  std::vector<std::size_t> chosen_rules;  // candidate ids
  std::vector<double> red_scores;
  std::vector<double> rule_scores;
  bool reds_exhausted = false;   // stopped with uncovered entities and no eligible candidate
  bool rules_exhausted = false;
};

struct SelectionState {
  double delta = 0.0;
  std::vector<ClassSelection> classes;
};

/// Per class, repeatedly picks the candidate with precision >= delta that
/// covers a still uncovered entity of the class and maximizes
///   redescriptions: (numCov / uncovered + J + 2 * precision) / 4
///   rules:          (numCov / uncovered + 2 * precision) / 3
/// with ties broken by precision, then numCov, then lower id. Once a class
/// is fully covered, each chosen redescription is swapped for a
/// same-support candidate with higher J and no lower precision.
SelectionState construct_sets(const std::vector<ExplainCandidate>& candidates,
                              const TargetColumn& predictions, double delta);

/// Appends the model predictions as a one-hot numeric view named
/// "predictions" with columns "pred_<class>".
MultiViewDataset with_prediction_view(const MultiViewDataset& ds, const TargetColumn& predictions);

/// Redescriptions of the family and their constituent rules as candidates,
/// dropping queries on `prediction_view`; duplicates are merged.
std::vector<ExplainCandidate> explain_candidates(const RedescriptionFamily& family,
                                                 const MultiViewDataset& ds,
                                                 std::size_t prediction_view);

/// Chosen candidates as class predictors.
std::vector<SurrogateItem> surrogate_items(const SelectionState& state,
                                           const std::vector<ExplainCandidate>& candidates,
                                           const TargetColumn& predictions, bool redescriptions,
                                           bool rules);

/// Keeps items with J >= j_min, |supp| <= max_support_frac * |E| and label
/// entropy on their support below entropy_frac times the largest entropy
/// among all items (zero entropy always passes).
std::vector<Redescription> entropy_filter(const std::vector<Redescription>& items,
                                          const TargetColumn& labels, double j_min,
                                          double max_support_frac, double entropy_frac);

struct FoldReport {
  std::vector<double> redescription_fidelity;
  std::vector<double> rule_fidelity;
  std::vector<double> combined_fidelity;
  [[nodiscard]] double mean() const;
  [[nodiscard]] double sd() const;
};

/// Stratified (on predicted classes) seeded split into k folds. Throws
/// BadFoldCount unless 2 <= k <= the smallest class size.
std::vector<std::vector<std::size_t>> stratified_folds(const TargetColumn& predictions, std::size_t k,
                                                       std::uint64_t seed);

/// For each fold: mine on the other folds (explanatory views plus the
/// prediction view), select with construct_sets, and measure fidelity on
/// the held-out fold.
FoldReport kfold_fidelity(const MultiViewDataset& ds, const TargetColumn& predictions,
                          const MinerConfig& cfg, std::size_t k, double delta);

}  // namespace rdm
