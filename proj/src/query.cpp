#include "rdm/query.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <tuple>

#include "rdm/error.hpp"
#include "rdm/kernels.hpp"
#include "text_util.hpp"

namespace rdm {
namespace {

using Kind = Expr::Kind;

const Literal& first_literal(const Expr& e) {
  const Expr* cur = &e;
  while (cur->kind != Kind::Literal) cur = &cur->children.front();
  return cur->literal;
}

bool is_keyword(std::string_view s) { return s == "AND" || s == "OR" || s == "NOT"; }

bool name_needs_quotes(std::string_view name) {
  if (name.empty() || is_keyword(name)) return true;
  for (const char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '<' ||
        c == '=' || c == '\'') {
      return true;
    }
  }
  return false;
}

void append_literal(std::string& out, const Literal& l) {
  out += text::format_double(l.low);
  out += " <= ";
  if (name_needs_quotes(l.attribute)) {
    out += '\'';
    out += l.attribute;
    out += '\'';
  } else {
    out += l.attribute;
  }
  out += " <= ";
  out += text::format_double(l.high);
}

void append_expr(std::string& out, const Expr& e) {
  switch (e.kind) {
    case Kind::Literal:
      append_literal(out, e.literal);
      return;
    case Kind::Not:
      out += "NOT(";
      append_expr(out, e.children.front());
      out += ')';
      return;
    case Kind::And:
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += " AND ";
        append_expr(out, e.children[i]);
      }
      return;
    case Kind::Or:
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += " OR ";
        const bool group = e.children[i].kind == Kind::And;
        if (group) out += '(';
        append_expr(out, e.children[i]);
        if (group) out += ')';
      }
      return;
  }
}

std::string expr_text(const Expr& e) {
  std::string s;
  append_expr(s, e);
  return s;
}

bool expr_less(const Expr& a, const Expr& b) {
  const Literal& la = first_literal(a);
  const Literal& lb = first_literal(b);
  const auto ka = std::tie(la.attribute, la.low, la.high);
  const auto kb = std::tie(lb.attribute, lb.low, lb.high);
  if (ka != kb) return ka < kb;
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  return expr_text(a) < expr_text(b);
}

Expr canonical(Expr e) {
  switch (e.kind) {
    case Kind::Literal:
      if (!(e.literal.low <= e.literal.high) || !std::isfinite(e.literal.low) ||
          !std::isfinite(e.literal.high)) {
        throw Error(Errc::InvalidQuery, "literal on '" + e.literal.attribute +
                                            "' needs finite low <= high");
      }
      if (e.literal.attribute.empty()) throw Error(Errc::InvalidQuery, "empty attribute name");
      e.children.clear();
      return e;
    case Kind::Not: {
      if (e.children.size() != 1) throw Error(Errc::InvalidQuery, "NOT takes one operand");
      Expr c = canonical(std::move(e.children.front()));
      if (c.kind == Kind::Not) return std::move(c.children.front());
      return Expr::negation(std::move(c));
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Expr> flat;
      for (auto& child : e.children) {
        Expr c = canonical(std::move(child));
        if (c.kind == e.kind) {
          for (auto& g : c.children) flat.push_back(std::move(g));
        } else {
          flat.push_back(std::move(c));
        }
      }
      if (flat.empty()) throw Error(Errc::InvalidQuery, "empty AND/OR");
      std::sort(flat.begin(), flat.end(), expr_less);
      flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
      if (flat.size() == 1) return std::move(flat.front());
      Expr out;
      out.kind = e.kind;
      out.children = std::move(flat);
      return out;
    }
  }
  return e;
}

bool is_factor(const Expr& e) {
  return e.kind == Kind::Literal ||
         (e.kind == Kind::Not && e.children.front().kind == Kind::Literal);
}

bool is_conjunction(const Expr& e) {
  return e.kind == Kind::And &&
         std::all_of(e.children.begin(), e.children.end(), [](const Expr& c) { return is_factor(c); });
}

bool is_term(const Expr& e) {
  return is_factor(e) || is_conjunction(e) ||
         (e.kind == Kind::Not && is_conjunction(e.children.front()));
}

void validate_shape(const Expr& e) {
  if (is_term(e)) return;
  if (e.kind == Kind::Or &&
      std::all_of(e.children.begin(), e.children.end(), [](const Expr& c) { return is_term(c); })) {
    return;
  }
  throw Error(Errc::InvalidQuery, "expression nests deeper than a disjunction of conjunctions: " +
                                      expr_text(e));
}

void collect_literals(const Expr& e, std::vector<Literal>& out) {
  if (e.kind == Kind::Literal) {
    out.push_back(e.literal);
    return;
  }
  for (const auto& c : e.children) collect_literals(c, out);
}

// Removes the first occurrence of `target`; nullopt if nothing remains.
std::optional<Expr> remove_literal(const Expr& e, const Literal& target, bool& done) {
  if (done) return e;
  switch (e.kind) {
    case Kind::Literal:
      if (e.literal == target) {
        done = true;
        return std::nullopt;
      }
      return e;
    case Kind::Not: {
      auto c = remove_literal(e.children.front(), target, done);
      if (!c) return std::nullopt;
      return Expr::negation(std::move(*c));
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Expr> kept;
      for (const auto& child : e.children) {
        if (auto c = remove_literal(child, target, done)) kept.push_back(std::move(*c));
      }
      if (kept.empty()) return std::nullopt;
      if (kept.size() == 1) return std::move(kept.front());
      Expr out;
      out.kind = e.kind;
      out.children = std::move(kept);
      return out;
    }
  }
  return e;
}

SupportSet evaluate_expr(const Expr& e, std::size_t view, const MultiViewDataset& ds) {
  switch (e.kind) {
    case Kind::Literal: {
      const AttributeColumn& col = ds.column(AttributeRef{view, e.literal.attribute});
      if (!col.is_numeric()) {
        throw Error(Errc::NonNumericAttribute,
                    "attribute '" + col.name() + "' is nominal and cannot appear in a query");
      }
      const std::size_t n = ds.entity_count();
      std::vector<std::uint64_t> words((n + 63) / 64, 0);
      kernels::active().interval_mask(col.values().data(), n, e.literal.low, e.literal.high,
                                      words.data());
      return SupportSet::from_words(n, std::move(words));
    }
    case Kind::Not:
      return evaluate_expr(e.children.front(), view, ds).complement();
    case Kind::And: {
      SupportSet s = evaluate_expr(e.children.front(), view, ds);
      for (std::size_t i = 1; i < e.children.size(); ++i) s &= evaluate_expr(e.children[i], view, ds);
      return s;
    }
    case Kind::Or: {
      SupportSet s = evaluate_expr(e.children.front(), view, ds);
      for (std::size_t i = 1; i < e.children.size(); ++i) s |= evaluate_expr(e.children[i], view, ds);
      return s;
    }
  }
  return {};
}

double jaccard2(const SupportSet& a, const SupportSet& b) {
  const std::size_t u = a.union_count(b);
  return u == 0 ? 0.0 : static_cast<double>(a.intersection_count(b)) / static_cast<double>(u);
}

// --- parser -----------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr parse() {
    Expr e = parse_or();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::QueryParse, msg + " at offset " + std::to_string(pos_) + " in '" +
                                      std::string(s_) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept_keyword(std::string_view kw) {
    skip_ws();
    if (s_.substr(pos_, kw.size()) != kw) return false;
    const std::size_t after = pos_ + kw.size();
    if (after < s_.size()) {
      const char c = s_[after];
      if (!(std::isspace(static_cast<unsigned char>(c)) || c == '(')) return false;
    }
    pos_ = after;
    return true;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) != tok) fail("expected '" + std::string(tok) + "'");
    pos_ += tok.size();
  }

  Expr parse_or() {
    std::vector<Expr> parts{parse_and()};
    while (accept_keyword("OR")) parts.push_back(parse_and());
    if (parts.size() == 1) return std::move(parts.front());
    return Expr::any_of(std::move(parts));
  }

  Expr parse_and() {
    std::vector<Expr> parts{parse_unary()};
    while (accept_keyword("AND")) parts.push_back(parse_unary());
    if (parts.size() == 1) return std::move(parts.front());
    return Expr::all_of(std::move(parts));
  }

  Expr parse_unary() {
    if (accept_keyword("NOT")) {
      expect("(");
      Expr inner = parse_or();
      expect(")");
      return Expr::negation(std::move(inner));
    }
    if (accept('(')) {
      Expr inner = parse_or();
      expect(")");
      return inner;
    }
    return parse_literal();
  }

  double parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' ||
          c == 'e' || c == 'E') {
        ++pos_;
      } else {
        break;
      }
    }
    const auto v = text::parse_double(s_.substr(start, pos_ - start));
    if (!v) fail("expected a number");
    return *v;
  }

  std::string parse_name() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '\'') {
      const auto close = s_.find('\'', pos_ + 1);
      if (close == std::string_view::npos) fail("unterminated quoted name");
      std::string name(s_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return name;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '<' ||
          c == '=') {
        break;
      }
      ++pos_;
    }
    if (start == pos_) fail("expected an attribute name");
    return std::string(s_.substr(start, pos_ - start));
  }

  Expr parse_literal() {
    const double low = parse_number();
    expect("<=");
    std::string name = parse_name();
    expect("<=");
    const double high = parse_number();
    return Expr::lit(std::move(name), low, high);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::lit(std::string attribute, double low, double high) {
  Expr e;
  e.kind = Kind::Literal;
  e.literal = Literal{std::move(attribute), low, high};
  return e;
}

Expr Expr::all_of(std::vector<Expr> children) {
  Expr e;
  e.kind = Kind::And;
  e.children = std::move(children);
  return e;
}

Expr Expr::any_of(std::vector<Expr> children) {
  Expr e;
  e.kind = Kind::Or;
  e.children = std::move(children);
  return e;
}

Expr Expr::negation(Expr child) {
  Expr e;
  e.kind = Kind::Not;
  e.children.push_back(std::move(child));
  return e;
}

Query::Query(std::size_t view, Expr expr) : view_(view), expr_(canonical(std::move(expr))) {
  validate_shape(expr_);
}

Query Query::single(std::size_t view, std::string attribute, double low, double high) {
  return Query(view, Expr::lit(std::move(attribute), low, high));
}

std::vector<Literal> Query::literals() const {
  std::vector<Literal> out;
  collect_literals(expr_, out);
  return out;
}

std::size_t Query::literal_count() const { return literals().size(); }

std::vector<AttributeRef> Query::attrs() const {
  std::vector<AttributeRef> out;
  for (auto& l : literals()) out.push_back(AttributeRef{view_, l.attribute});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Query::mentions(std::string_view attribute) const {
  for (const auto& l : literals()) {
    if (l.attribute == attribute) return true;
  }
  return false;
}

bool Query::is_flat_conjunction() const noexcept {
  return is_factor(expr_) || is_conjunction(expr_);
}

bool Query::has_negation() const {
  if (expr_.kind == Kind::Not) return true;
  for (const auto& c : expr_.children) {
    if (c.kind == Kind::Not) return true;
    for (const auto& g : c.children) {
      if (g.kind == Kind::Not) return true;
    }
  }
  return false;
}

std::string Query::to_string() const { return expr_text(expr_); }

Query parse_query(std::size_t view, std::string_view text) {
  return Query(view, Parser(text).parse());
}

SupportSet evaluate(const Query& q, const MultiViewDataset& ds) {
  return evaluate_expr(q.expr(), q.view(), ds);
}

std::vector<AttributeRef> attrs(const Query& q) { return q.attrs(); }

std::optional<Query> negate(const Query& q) {
  const Expr& e = q.expr();
  if (e.kind == Kind::Or) return std::nullopt;
  if (e.kind == Kind::Not) return Query(q.view(), e.children.front());
  return Query(q.view(), Expr::negation(e));
}

std::optional<Query> conjoin(const Query& a, const Query& b) {
  if (a.view() != b.view() || !a.is_flat_conjunction() || !b.is_flat_conjunction()) {
    return std::nullopt;
  }
  std::vector<Expr> factors;
  auto take = [&](const Expr& e) {
    if (e.kind == Kind::And) {
      for (const auto& c : e.children) factors.push_back(c);
    } else {
      factors.push_back(e);
    }
  };
  take(a.expr());
  take(b.expr());

  // Intersect positive literals per attribute; keep negated factors as-is.
  std::vector<Expr> merged;
  for (auto& f : factors) {
    if (f.kind != Kind::Literal) {
      merged.push_back(std::move(f));
      continue;
    }
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Expr& m) {
      return m.kind == Kind::Literal && m.literal.attribute == f.literal.attribute;
    });
    if (it == merged.end()) {
      merged.push_back(std::move(f));
      continue;
    }
    it->literal.low = std::max(it->literal.low, f.literal.low);
    it->literal.high = std::min(it->literal.high, f.literal.high);
    if (it->literal.low > it->literal.high) return std::nullopt;
  }
  return Query(a.view(), Expr::all_of(std::move(merged)));
}

Query minimize(const Query& q, const MultiViewDataset& ds, const SupportSet& partner_support,
               std::optional<std::string_view> keep_attribute) {
  Query current = q;
  double best = jaccard2(evaluate(current, ds), partner_support);
  for (const Literal& lit : q.literals()) {
    if (current.literal_count() <= 1) break;
    if (keep_attribute && lit.attribute == *keep_attribute) {
      std::size_t mentions = 0;
      for (const auto& l : current.literals()) mentions += l.attribute == lit.attribute ? 1 : 0;
      if (mentions <= 1) continue;
    }
    bool done = false;
    auto reduced = remove_literal(current.expr(), lit, done);
    if (!done || !reduced) continue;
    Query candidate(current.view(), std::move(*reduced));
    const double j = jaccard2(evaluate(candidate, ds), partner_support);
    if (j >= best) {
      best = j;
      current = std::move(candidate);
    }
  }
  return current;
}

}  // namespace rdm
