#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rdm {

/// Query shapes a side may emit. "Left" is the side holding the attribute
/// being described (the home view); "right" is every other view.
struct SideFlags {
  bool allow_neg = false;
  bool allow_disj = false;

  friend bool operator==(const SideFlags&, const SideFlags&) = default;
};

struct MinerConfig {
  double min_jaccard = 0.3;
  double max_pvalue = 0.01;
  std::size_t min_support = 10;
  std::size_t max_support = 4000;
  std::size_t working_size = 500;
  std::size_t max_size = 1500;
  std::size_t num_ret_red = 300;
  std::size_t tree_depth = 8;
  std::size_t min_leaf = 2;
  std::size_t n_supplement_trees = 2;
  std::size_t num_iterations = 1;
  std::size_t num_random_restarts = 10;
  std::size_t num_target = 100;
  std::size_t num_new_attr = 1;
  double min_add_red_js = 0.1;
  double rule_size_norm = 20.0;
  SideFlags left;
  SideFlags right;
  bool allow_same_support = false;
  bool unguided_expansion = true;
  bool joining_procedure = true;
  bool minimize_rules = true;
  std::size_t n_threads = 1;
  std::uint64_t seed = 0;
  /// [JSImp PValImp AttDivImp ElemDivImp ECoverage (SizePenalty)]
  std::vector<double> preference_weights{0.2, 0.15, 0.15, 0.15, 0.15, 0.2};

  /// Throws ConfigInvalid on the first violated invariant.
  void validate() const;

  [[nodiscard]] double weight(std::size_t i) const noexcept {
    return i < preference_weights.size() ? preference_weights[i] : 0.0;
  }

  friend bool operator==(const MinerConfig&, const MinerConfig&) = default;
};

}  // namespace rdm
