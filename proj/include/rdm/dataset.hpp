#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rdm {

enum class AttributeKind { Numeric, Nominal };

/// One column of a view. Numeric columns hold finite doubles and cache their
/// extremes; nominal columns hold codes into a dictionary fixed at parse time.
class AttributeColumn {
 public:
  static AttributeColumn numeric(std::string name, std::vector<double> values);
  static AttributeColumn nominal(std::string name, std::vector<std::string> categories,
                                 std::vector<int> codes);

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] AttributeKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_numeric() const noexcept { return kind_ == AttributeKind::Numeric; }
  [[nodiscard]] std::size_t size() const noexcept {
    return is_numeric() ? values_.size() : codes_.size();
  }

  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<const int> codes() const noexcept { return codes_; }
  [[nodiscard]] const std::vector<std::string>& categories() const noexcept {
    return categories_;
  }
  [[nodiscard]] double v_min() const noexcept { return v_min_; }
  [[nodiscard]] double v_max() const noexcept { return v_max_; }

  friend bool operator==(const AttributeColumn&, const AttributeColumn&) = default;

 private:
  std::string name_;
  AttributeKind kind_ = AttributeKind::Numeric;
  std::vector<double> values_;
  std::vector<std::string> categories_;
  std::vector<int> codes_;
  double v_min_ = 0.0;
  double v_max_ = 0.0;
};

class View {
 public:
  View() = default;
  View(std::vector<AttributeColumn> attributes, std::string source_tag = {});

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t size() const noexcept { return attributes_.size(); }
  [[nodiscard]] const std::vector<AttributeColumn>& attributes() const noexcept {
    return attributes_;
  }
  [[nodiscard]] const AttributeColumn& attribute(std::size_t i) const { return attributes_.at(i); }
  [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;
  [[nodiscard]] const std::string& source_tag() const noexcept { return source_tag_; }

  /// Rows picked by position, in the given order.
  [[nodiscard]] View select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const View& a, const View& b) {
    return a.attributes_ == b.attributes_ && a.source_tag_ == b.source_tag_;
  }

 private:
  std::vector<AttributeColumn> attributes_;
  std::string source_tag_;
  std::size_t rows_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TargetColumn {
  std::string name;
  std::vector<std::string> classes;
  std::vector<int> labels;  // per entity, in [0, classes.size())

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] std::size_t class_count() const noexcept { return classes.size(); }
  [[nodiscard]] std::vector<std::size_t> class_histogram() const;
  [[nodiscard]] TargetColumn select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const TargetColumn&, const TargetColumn&) = default;
};

/// Builds a target from a nominal column (or a numeric column holding
/// non-negative integral class codes).
TargetColumn target_from_column(const AttributeColumn& column);

/// (view index, attribute name); globally unique within a dataset.
struct AttributeRef {
  std::size_t view = 0;
  std::string name;

  friend auto operator<=>(const AttributeRef&, const AttributeRef&) = default;
};

class MultiViewDataset {
 public:
  [[nodiscard]] std::size_t entity_count() const noexcept { return entity_ids_.size(); }
  [[nodiscard]] std::size_t view_count() const noexcept { return views_.size(); }
  [[nodiscard]] const View& view(std::size_t i) const;
  [[nodiscard]] const std::vector<View>& views() const noexcept { return views_; }
  [[nodiscard]] const std::vector<std::size_t>& entity_ids() const noexcept { return entity_ids_; }
  [[nodiscard]] const std::optional<TargetColumn>& targets() const noexcept { return targets_; }

  /// Throws UnknownAttribute / ViewIndexOutOfRange.
  [[nodiscard]] const AttributeColumn& column(const AttributeRef& ref) const;

  [[nodiscard]] MultiViewDataset select_rows(std::span<const std::size_t> rows) const;

  friend MultiViewDataset assemble_dataset(std::vector<View> views,
                                           std::optional<TargetColumn> targets,
                                           std::vector<std::size_t> entity_ids);

 private:
  std::vector<std::size_t> entity_ids_;
  std::vector<View> views_;
  std::optional<TargetColumn> targets_;
};

/// Aligns views (and optional targets) by row position. Entity ids default
/// to 0..|E|-1. Throws RowCountMismatch.
MultiViewDataset assemble_dataset(std::vector<View> views,
                                  std::optional<TargetColumn> targets = std::nullopt,
                                  std::vector<std::size_t> entity_ids = {});

/// Seeded uniform sample of n rows without replacement; row order is
/// preserved. Throws BadSampleSize unless 1 <= n <= |E|.
MultiViewDataset subsample(const MultiViewDataset& ds, std::size_t n, std::uint64_t seed);

}  // namespace rdm
