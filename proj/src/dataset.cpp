#include "rdm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rdm/error.hpp"

namespace rdm {

AttributeColumn AttributeColumn::numeric(std::string name, std::vector<double> values) {
  AttributeColumn c;
  c.name_ = std::move(name);
  c.kind_ = AttributeKind::Numeric;
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw Error(Errc::NonFiniteValue, "attribute '" + c.name_ + "' holds a non-finite value");
    }
  }
  if (!values.empty()) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    c.v_min_ = *lo;
    c.v_max_ = *hi;
  }
  c.values_ = std::move(values);
  return c;
}

AttributeColumn AttributeColumn::nominal(std::string name, std::vector<std::string> categories,
                                         std::vector<int> codes) {
  AttributeColumn c;
  c.name_ = std::move(name);
  c.kind_ = AttributeKind::Nominal;
  const int n = static_cast<int>(categories.size());
  for (const int code : codes) {
    if (code < 0 || code >= n) {
      throw Error(Errc::UnknownCategory, "attribute '" + c.name_ + "' holds an unknown category");
    }
  }
  c.categories_ = std::move(categories);
  c.codes_ = std::move(codes);
  return c;
}

View::View(std::vector<AttributeColumn> attributes, std::string source_tag)
    : attributes_(std::move(attributes)), source_tag_(std::move(source_tag)) {
  rows_ = attributes_.empty() ? 0 : attributes_.front().size();
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    const auto& a = attributes_[i];
    if (a.size() != rows_) {
      throw Error(Errc::RowCountMismatch, "column '" + a.name() + "' has a different length");
    }
    if (!index_.emplace(a.name(), i).second) {
      throw Error(Errc::MalformedHeader, "duplicate attribute name '" + a.name() + "'");
    }
  }
}

std::optional<std::size_t> View::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return std::nullopt;
}

View View::select_rows(std::span<const std::size_t> rows) const {
  std::vector<AttributeColumn> cols;
  cols.reserve(attributes_.size());
  for (const auto& a : attributes_) {
    if (a.is_numeric()) {
      std::vector<double> v;
      v.reserve(rows.size());
      for (const std::size_t r : rows) v.push_back(a.values()[r]);
      cols.push_back(AttributeColumn::numeric(a.name(), std::move(v)));
    } else {
      std::vector<int> v;
      v.reserve(rows.size());
      for (const std::size_t r : rows) v.push_back(a.codes()[r]);
      cols.push_back(AttributeColumn::nominal(a.name(), a.categories(), std::move(v)));
    }
  }
  return View(std::move(cols), source_tag_);
}

std::vector<std::size_t> TargetColumn::class_histogram() const {
  std::vector<std::size_t> h(classes.size(), 0);
  for (const int l : labels) ++h[static_cast<std::size_t>(l)];
  return h;
}

TargetColumn TargetColumn::select_rows(std::span<const std::size_t> rows) const {
  TargetColumn t{name, classes, {}};
  t.labels.reserve(rows.size());
  for (const std::size_t r : rows) t.labels.push_back(labels.at(r));
  return t;
}

TargetColumn target_from_column(const AttributeColumn& column) {
  TargetColumn t;
  t.name = column.name();
  if (!column.is_numeric()) {
    t.classes = column.categories();
    t.labels.assign(column.codes().begin(), column.codes().end());
    return t;
  }
  int max_code = -1;
  for (const double v : column.values()) {
    if (v < 0 || v != std::floor(v)) {
      throw Error(Errc::TypeError, "numeric target '" + column.name() +
                                       "' must hold non-negative integral class codes");
    }
    max_code = std::max(max_code, static_cast<int>(v));
    t.labels.push_back(static_cast<int>(v));
  }
  for (int c = 0; c <= max_code; ++c) t.classes.push_back(std::to_string(c));
  return t;
}

const View& MultiViewDataset::view(std::size_t i) const {
  if (i >= views_.size()) {
    throw Error(Errc::ViewIndexOutOfRange, "view index " + std::to_string(i));
  }
  return views_[i];
}

const AttributeColumn& MultiViewDataset::column(const AttributeRef& ref) const {
  const View& v = view(ref.view);
  const auto idx = v.find(ref.name);
  if (!idx) {
    throw Error(Errc::UnknownAttribute,
                "view " + std::to_string(ref.view) + " has no attribute '" + ref.name + "'");
  }
  return v.attribute(*idx);
}

MultiViewDataset MultiViewDataset::select_rows(std::span<const std::size_t> rows) const {
  std::vector<View> views;
  views.reserve(views_.size());
  for (const auto& v : views_) views.push_back(v.select_rows(rows));
  std::optional<TargetColumn> targets;
  if (targets_) targets = targets_->select_rows(rows);
  std::vector<std::size_t> ids;
  ids.reserve(rows.size());
  for (const std::size_t r : rows) ids.push_back(entity_ids_.at(r));
  return assemble_dataset(std::move(views), std::move(targets), std::move(ids));
}

MultiViewDataset assemble_dataset(std::vector<View> views, std::optional<TargetColumn> targets,
                                  std::vector<std::size_t> entity_ids) {
  if (views.empty()) throw Error(Errc::RowCountMismatch, "a dataset needs at least one view");
  const std::size_t n = views.front().rows();
  for (std::size_t i = 0; i < views.size(); ++i) {
    if (views[i].rows() != n) {
      throw Error(Errc::RowCountMismatch, "view " + std::to_string(i) + " has " +
                                              std::to_string(views[i].rows()) + " rows, expected " +
                                              std::to_string(n));
    }
  }
  if (targets && targets->size() != n) {
    throw Error(Errc::RowCountMismatch, "target column length differs from view rows");
  }
  if (entity_ids.empty()) {
    entity_ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) entity_ids[i] = i;
  } else if (entity_ids.size() != n) {
    throw Error(Errc::RowCountMismatch, "entity id count differs from view rows");
  }
  MultiViewDataset ds;
  ds.entity_ids_ = std::move(entity_ids);
  ds.views_ = std::move(views);
  ds.targets_ = std::move(targets);
  return ds;
}

MultiViewDataset subsample(const MultiViewDataset& ds, std::size_t n, std::uint64_t seed) {
  const std::size_t total = ds.entity_count();
  if (n < 1 || n > total) {
    throw Error(Errc::BadSampleSize,
                "sample size " + std::to_string(n) + " outside [1, " + std::to_string(total) + "]");
  }
  // Selection sampling: one pass, indices come out sorted.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> rows;
  rows.reserve(n);
  std::size_t needed = n;
  for (std::size_t i = 0; i < total && needed > 0; ++i) {
    const std::size_t remaining = total - i;
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (static_cast<double>(remaining) * u < static_cast<double>(needed)) {
      rows.push_back(i);
      --needed;
    }
  }
  return ds.select_rows(rows);
}

}  // namespace rdm
