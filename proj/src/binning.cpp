#include "rdm/binning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rdm/error.hpp"

namespace rdm {
namespace {

double quantile_type7(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

int bin_index(const std::vector<double>& edges, double v) {
  // First inner edge >= v; the last bin absorbs v_max.
  const auto it = std::lower_bound(edges.begin() + 1, edges.end() - 1, v);
  return static_cast<int>(it - (edges.begin() + 1));
}

}  // namespace

std::vector<std::size_t> BinSpec::populations() const {
  std::vector<std::size_t> pop(bin_count(), 0);
  for (const int b : bin_of_entity) ++pop[static_cast<std::size_t>(b)];
  return pop;
}

double interquartile_range(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return quantile_type7(values, 0.75) - quantile_type7(values, 0.25);
}

BinSpec perform_binning(const MultiViewDataset& ds, const AttributeRef& attribute,
                        std::size_t min_bin_size) {
  const AttributeColumn& col = ds.column(attribute);
  if (!col.is_numeric()) {
    throw Error(Errc::NonNumericAttribute, "cannot bin nominal attribute '" + col.name() + "'");
  }
  const auto values = col.values();
  const std::size_t n = values.size();

  BinSpec spec;
  spec.attribute = attribute;
  const double lo = col.v_min();
  const double hi = col.v_max();

  const double iqr = interquartile_range({values.begin(), values.end()});
  const double width = n == 0 ? 0.0 : 2.0 * iqr / std::cbrt(static_cast<double>(n));
  std::size_t k = 1;
  if (width > 0.0 && hi > lo) {
    k = static_cast<std::size_t>(std::ceil((hi - lo) / width));
    k = std::max<std::size_t>(k, 1);
  }

  std::vector<double> edges(k + 1);
  for (std::size_t s = 0; s <= k; ++s) {
    edges[s] = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(k);
  }
  edges.back() = hi;
  // Rounding can collapse neighbouring edges when the range is tiny.
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.size() < 2) edges = {lo, hi};

  std::vector<std::size_t> pop(edges.size() - 1, 0);
  for (const double v : values) ++pop[static_cast<std::size_t>(bin_index(edges, v))];

  // Top-down: fold deficient bins into the bin below.
  for (std::size_t s = pop.size() - 1; s >= 1 && pop.size() > 1; --s) {
    if (pop[s] < min_bin_size) {
      pop[s - 1] += pop[s];
      pop.erase(pop.begin() + static_cast<std::ptrdiff_t>(s));
      edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(s));
    }
  }
  if (pop.size() > 1 && pop[0] < min_bin_size) {
    pop[1] += pop[0];
    pop.erase(pop.begin());
    edges.erase(edges.begin() + 1);
  }

  spec.edges = std::move(edges);
  spec.bin_of_entity.resize(n);
  for (std::size_t i = 0; i < n; ++i) spec.bin_of_entity[i] = bin_index(spec.edges, values[i]);
  return spec;
}

std::vector<Query> bins_to_rules(const BinSpec& spec) {
  std::vector<Query> rules;
  rules.reserve(spec.bin_count());
  for (std::size_t s = 0; s < spec.bin_count(); ++s) {
    const double low =
        s == 0 ? spec.edges[0] : std::nextafter(spec.edges[s], std::numeric_limits<double>::infinity());
    rules.push_back(Query::single(spec.attribute.view, spec.attribute.name, low, spec.edges[s + 1]));
  }
  return rules;
}

std::vector<int> bins_to_classes(const BinSpec& spec) { return spec.bin_of_entity; }

}  // namespace rdm
