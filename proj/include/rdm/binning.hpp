#pragma once

#include <cstddef>
#include <vector>

#include "rdm/dataset.hpp"
#include "rdm/query.hpp"

namespace rdm {

/// Equal-width discretization of one numeric attribute.
///
/// edges = t_0 = v_min < t_1 < ... < t_k = v_max. An entity with value v sits
/// in the lowest bin s with v <= t_{s+1}, so a value lying exactly on an
/// inner edge belongs to the bin below it.
struct BinSpec {
  AttributeRef attribute;
  std::vector<double> edges;
  std::vector<int> bin_of_entity;

  [[nodiscard]] std::size_t bin_count() const noexcept {
    return edges.empty() ? 0 : edges.size() - 1;
  }
  [[nodiscard]] std::vector<std::size_t> populations() const;
};

/// Interquartile range with linear-interpolation (type 7) quantiles.
double interquartile_range(std::vector<double> values);

/// Freedman-Diaconis width 2*IQR/n^(1/3); k = ceil(range / width) bins of equal
/// width. Scanning from the top bin down, a bin holding fewer than
/// `min_bin_size` entities is merged into its lower neighbour; a deficient
/// lowest bin is finally merged upward. IQR = 0 or a constant column gives a
/// single bin. Throws NonNumericAttribute.
BinSpec perform_binning(const MultiViewDataset& ds, const AttributeRef& attribute,
                        std::size_t min_bin_size);

/// One single-literal query per bin. The first bin is [t_0, t_1]; later bins
/// start just above their lower edge, so query supports equal bin membership.
std::vector<Query> bins_to_rules(const BinSpec& spec);

/// Class index per entity (the bin index); class count is bin_count().
std::vector<int> bins_to_classes(const BinSpec& spec);

}  // namespace rdm
