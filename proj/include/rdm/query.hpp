#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdm/dataset.hpp"
#include "rdm/support_set.hpp"

namespace rdm {

/// Closed interval literal: low <= value(attribute) <= high.
struct Literal {
  std::string attribute;
  double low = 0.0;
  double high = 0.0;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Boolean expression over literals. Shapes allowed in a query:
///   factor := literal | NOT(literal)
///   term   := factor | AND(factor, ...) | NOT(AND(factor, ...))
///   query  := term | OR(term, ...)
struct Expr {
  enum class Kind { Literal, And, Or, Not };

  Kind kind = Kind::Literal;
  Literal literal;
  std::vector<Expr> children;

  static Expr lit(std::string attribute, double low, double high);
  static Expr all_of(std::vector<Expr> children);
  static Expr any_of(std::vector<Expr> children);
  static Expr negation(Expr child);

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// A rule over the attributes of one view. Always stored in canonical form:
/// nested AND/OR flattened, duplicate children removed, children sorted by
/// (attribute name, low, high) of their first literal.
class Query {
 public:
  /// Throws InvalidQuery when the expression falls outside the allowed shapes
  /// or a literal has low > high.
  Query(std::size_t view, Expr expr);

  static Query single(std::size_t view, std::string attribute, double low, double high);

  [[nodiscard]] std::size_t view() const noexcept { return view_; }
  [[nodiscard]] const Expr& expr() const noexcept { return expr_; }

  /// Literals in serialization order.
  [[nodiscard]] std::vector<Literal> literals() const;
  [[nodiscard]] std::size_t literal_count() const;
  [[nodiscard]] std::vector<AttributeRef> attrs() const;
  [[nodiscard]] bool mentions(std::string_view attribute) const;
  /// True for a literal, NOT(literal) or AND of those (no OR, no negated block).
  [[nodiscard]] bool is_flat_conjunction() const noexcept;
  [[nodiscard]] bool has_disjunction() const noexcept { return expr_.kind == Expr::Kind::Or; }
  [[nodiscard]] bool has_negation() const;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Query&, const Query&) = default;

 private:
  std::size_t view_;
  Expr expr_;
};

/// Parses `low <= name <= high` literals joined with AND / OR / NOT(...) and
/// parentheses. Throws QueryParse or InvalidQuery.
Query parse_query(std::size_t view, std::string_view text);

/// Throws UnknownAttribute, ViewIndexOutOfRange, NonNumericAttribute.
SupportSet evaluate(const Query& q, const MultiViewDataset& ds);

std::vector<AttributeRef> attrs(const Query& q);

/// NOT(q); nullopt when the result would leave the allowed shapes.
std::optional<Query> negate(const Query& q);

/// Conjunction of two flat conjunctions on the same view; positive literals on
/// the same attribute are intersected. nullopt when a shape is not flat or an
/// intersection is empty.
std::optional<Query> conjoin(const Query& a, const Query& b);

/// Greedily drops literals (in serialization order) whose removal does not
/// lower the Jaccard index between the query's support and
/// `partner_support`. A literal on `keep_attribute` is never removed when it
/// is the last one mentioning that attribute.
Query minimize(const Query& q, const MultiViewDataset& ds, const SupportSet& partner_support,
               std::optional<std::string_view> keep_attribute = std::nullopt);

}  // namespace rdm
