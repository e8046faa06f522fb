#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdm/dataset.hpp"
#include "rdm/query.hpp"
#include "rdm/support_set.hpp"

namespace rdm {

struct QualityReport {
  double jaccard = 0.0;
  double p_value = 1.0;
  std::size_t support_size = 0;
  std::size_t union_size = 0;
  std::vector<double> marginals;  // |supp(q_i)| / |E|, one per present query
};

/// |intersection| / |union|; 0 for an empty union. Needs >= 2 supports over
/// one universe (UniverseMismatch otherwise).
double jaccard(std::span<const SupportSet> supports);

/// Upper binomial tail P[X >= support_size] for X ~ Bin(universe, prod(marginals)),
/// summed in log space with compensated summation; clamped to [0, 1].
double p_value(std::size_t support_size, std::size_t universe, std::span<const double> marginals);

/// Jaccard, p-value, sizes and marginals of a tuple of query supports.
QualityReport quality_report(std::span<const SupportSet> supports);

/// Fraction of supported entities whose predicted class is `class_index`.
/// Throws EmptySupport.
double precision(const SupportSet& support, const TargetColumn& predictions, int class_index);

/// Shannon entropy in bits of a label multiset. Throws EmptySupport.
double shannon_entropy(std::span<const int> labels);
/// Entropy of the class labels of the supported entities.
double shannon_entropy(const SupportSet& support, const TargetColumn& labels);

/// One selected rule or redescription acting as a class predictor. An entity
/// is covered when it satisfies every query.
struct SurrogateItem {
  std::vector<Query> queries;
  int class_index = 0;
  double score = 0.0;
  double precision = 0.0;
  std::size_t support_size = 0;
  std::string key;  // serialization; last tie-breaker
};

/// Predicted class per entity, -1 where no item covers the entity and no
/// default class is given. Among covering items the one with the highest
/// score wins; ties go to higher precision, then smaller support, then key.
std::vector<int> surrogate_predict(std::span<const SurrogateItem> items,
                                   const MultiViewDataset& ds,
                                   std::optional<int> default_class = std::nullopt);

/// Agreement rate between surrogate predictions and the model's predictions.
/// Uncovered entities without a default class count as mismatches.
double fidelity(std::span<const SurrogateItem> items, const MultiViewDataset& ds,
                const TargetColumn& model_predictions,
                std::optional<int> default_class = std::nullopt);

struct MannWhitneyResult {
  double u = 0.0;  // U statistic of sample_a
  double p = 1.0;  // two-sided
  bool exact = false;
};

/// Two-sided Mann-Whitney U test. Exact null distribution when
/// n_a + n_b <= 12 and there are no ties; otherwise the normal approximation
/// with tie and continuity corrections. Zero variance yields p = 1.
/// Throws EmptySample.
MannWhitneyResult mann_whitney_u(std::span<const double> sample_a, std::span<const double> sample_b);

/// Pearson correlation of midranks. Throws LengthMismatch, DegenerateVariance.
double spearman(std::span<const double> x, std::span<const double> y);

/// Midranks (1-based, ties averaged).
std::vector<double> midranks(std::span<const double> values);

}  // namespace rdm
