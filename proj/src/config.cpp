#include "rdm/config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdm/error.hpp"

namespace rdm {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::ConfigInvalid, what);
}

}  // namespace

void MinerConfig::validate() const {
  require(min_jaccard >= 0.0 && min_jaccard <= 1.0, "minJS must lie in [0, 1]");
  require(max_pvalue >= 0.0 && max_pvalue <= 1.0, "maxPval must lie in [0, 1]");
  require(min_support <= max_support, "MinSupport must not exceed MaxSupport");
  require(working_size <= max_size, "WorkingRSSize must not exceed MaxRSSize");
  require(working_size >= 1, "WorkingRSSize must be positive");
  require(tree_depth >= 1, "ATreeDepth must be at least 1");
  require(min_leaf >= 1, "minimal leaf size must be at least 1");
  require(num_target >= 1, "NumTarget must be at least 1");
  require(min_add_red_js >= 0.0 && min_add_red_js <= 1.0, "minAddRedJS must lie in [0, 1]");
  require(rule_size_norm > 0.0 && std::isfinite(rule_size_norm), "ruleSizeNormalization must be positive");
  require(n_threads >= 1, "thread count must be at least 1");
  require(preference_weights.size() == 5 || preference_weights.size() == 6,
          "preferences need 5 or 6 weights");
  require(std::all_of(preference_weights.begin(), preference_weights.end(),
                      [](double w) { return w >= 0.0 && std::isfinite(w); }),
          "preference weights must be finite and nonnegative");
}

}  // namespace rdm
