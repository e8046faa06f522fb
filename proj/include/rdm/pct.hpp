#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rdm/dataset.hpp"
#include "rdm/query.hpp"
#include "rdm/support_set.hpp"

namespace rdm {

/// Query with its support on the dataset it was built from and an optional
/// provenance tag (target class or target column the rule was grown for).
struct Rule {
  Query query;
  SupportSet support;
  int provenance = -1;
};

/// Targets of a predictive clustering tree. Multiclass targets are handled
/// as one-hot label columns, so both kinds share one variance formula.
class TargetMatrix {
 public:
  enum class Kind { Multiclass, Multilabel };

  /// Class index per entity in [0, class_count).
  static TargetMatrix multiclass(std::vector<int> classes, std::size_t class_count);
  /// Column j is 1 for entity k iff k is in columns[j].
  static TargetMatrix multilabel(std::vector<SupportSet> columns, std::vector<int> provenance = {});

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t columns() const noexcept { return columns_; }
  /// Source rule/redescription id per column (defaults to the column index).
  [[nodiscard]] const std::vector<int>& provenance() const noexcept { return provenance_; }
  /// Positive columns of an entity.
  [[nodiscard]] std::span<const std::uint32_t> positives(std::size_t entity) const noexcept {
    return {cols_.data() + offsets_[entity], cols_.data() + offsets_[entity + 1]};
  }
  /// Columns [begin, end) as their own matrix.
  [[nodiscard]] TargetMatrix slice(std::size_t begin, std::size_t end) const;

 private:
  Kind kind_ = Kind::Multiclass;
  std::size_t rows_ = 0;
  std::size_t columns_ = 0;
  std::vector<int> provenance_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> cols_;
};

struct PctSplit {
  std::size_t attribute = 0;  // column index in the view
  double threshold = 0.0;     // left: value <= threshold, right: value > threshold
};

struct PctNode {
  std::optional<PctSplit> split;
  int left = -1;
  int right = -1;
  int parent = -1;
  std::size_t depth = 0;
  SupportSet entities;
  std::vector<double> prototype;  // mean target vector

  [[nodiscard]] bool is_leaf() const noexcept { return !split.has_value(); }
};

struct PctModel {
  std::size_t view = 0;
  TargetMatrix::Kind target_kind = TargetMatrix::Kind::Multiclass;
  std::vector<PctNode> nodes;  // nodes[0] is the root; children follow in depth-first order
  std::vector<int> provenance;  // copied from the targets

  [[nodiscard]] const PctNode& root() const { return nodes.front(); }
  [[nodiscard]] std::size_t internal_count() const;
};

struct PctOptions {
  std::size_t max_depth = 8;
  std::size_t min_leaf = 2;
  /// When set, every split considers a fresh random subset of
  /// ceil(sqrt(#attributes)) attributes drawn from this seed.
  std::optional<std::uint64_t> subspace_seed;
};

/// Greedy top-down induction maximizing the variance reduction
/// Var(S) - |S_L|/|S| Var(S_L) - |S_R|/|S| Var(S_R), with Var summed over
/// label columns as p(1 - p). Thresholds are midpoints between consecutive
/// distinct values; ties go to the lowest attribute index, then the lowest
/// threshold. Throws EmptyView, TargetLengthMismatch, NonNumericAttribute.
PctModel train_pct(const View& view, std::size_t view_index, const TargetMatrix& targets,
                   const PctOptions& options, const SupportSet* entity_subset = nullptr);

/// `n_trees` random-subspace PCTs; tree t draws its attribute subsets from a
/// seed derived from (seed, t).
std::vector<PctModel> train_forest(const View& view, std::size_t view_index,
                                   const TargetMatrix& targets, std::size_t n_trees,
                                   const PctOptions& options, std::uint64_t seed);

/// One conjunctive rule per non-root node built from its root path; `value <=
/// t` becomes [v_min, t] and `value > t` becomes [nextafter(t), v_max], with
/// conditions on one attribute intersected. Rules with equal support are
/// deduplicated, keeping the one with fewer literals. Provenance is the
/// node's dominant target column mapped through the target provenance.
std::vector<Rule> transform_to_rules(const PctModel& model, const View& view);

}  // namespace rdm
