// Independent reference computations shared by the unit and acceptance
// tests. Nothing here calls into the library code it is used to check.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rdm/dataset.hpp"
#include "rdm/query.hpp"

namespace oracle {

using Bits = std::vector<bool>;
using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using Ratio = boost::rational<std::int64_t>;

inline std::size_t count(const Bits& b) { return static_cast<std::size_t>(std::count(b.begin(), b.end(), true)); }

inline Bits both(const Bits& a, const Bits& b) {
  Bits r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] && b[i];
  return r;
}

inline Bits either(const Bits& a, const Bits& b) {
  Bits r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] || b[i];
  return r;
}

inline double jaccard(const Bits& a, const Bits& b) {
  const std::size_t u = count(either(a, b));
  return u == 0 ? 0.0 : static_cast<double>(count(both(a, b))) / static_cast<double>(u);
}

template <class Set>
Bits bits_of(const Set& s) {
  Bits b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) b[i] = s.test(i);
  return b;
}

// Truth value of an expression tree for every row of a view.
inline Bits eval_expr(const rdm::Expr& e, const rdm::View& view) {
  const std::size_t n = view.rows();
  switch (e.kind) {
    case rdm::Expr::Kind::Literal: {
      Bits out(n);
      const auto idx = view.find(e.literal.attribute);
      if (!idx) throw std::runtime_error("oracle: unknown attribute " + e.literal.attribute);
      const auto values = view.attribute(*idx).values();
      for (std::size_t i = 0; i < n; ++i) out[i] = e.literal.low <= values[i] && values[i] <= e.literal.high;
      return out;
    }
    case rdm::Expr::Kind::Not: {
      Bits out = eval_expr(e.children.at(0), view);
      out.flip();
      return out;
    }
    case rdm::Expr::Kind::And: {
      Bits out(n, true);
      for (const auto& c : e.children) out = both(out, eval_expr(c, view));
      return out;
    }
    case rdm::Expr::Kind::Or: {
      Bits out(n, false);
      for (const auto& c : e.children) out = either(out, eval_expr(c, view));
      return out;
    }
  }
  return Bits(n);
}

inline Bits eval_query(const rdm::Query& q, const rdm::MultiViewDataset& ds) {
  return eval_expr(q.expr(), ds.view(q.view()));
}

inline BigRational rpow(BigRational b, std::size_t e) {
  BigRational r(1);
  while (e > 0) {
    if (e & 1U) r *= b;
    b *= b;
    e >>= 1U;
  }
  return r;
}

// P[X >= s] for X ~ Bin(n, p), exact.
inline BigRational binomial_tail(std::size_t n, std::size_t s, const BigRational& p) {
  if (s == 0) return BigRational(1);
  BigRational total(0);
  const BigRational q = BigRational(1) - p;
  BigInt c = 1;  // C(n, k), built up from k = 0
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) c = c * BigInt(n - k + 1) / BigInt(k);
    if (k < s) continue;
    total += BigRational(c) * rpow(p, k) *
             rpow(q, n - k);
  }
  return total;
}

// tails[s] = P[X >= s] for s = 0..n+1.
inline std::vector<BigRational> binomial_tails(std::size_t n, const BigRational& p) {
  const BigRational q = BigRational(1) - p;
  std::vector<BigRational> pmf(n + 1);
  BigInt c = 1;
  BigRational pk(1);
  for (std::size_t k = 0; k <= n; ++k) {
    if (k > 0) {
      c = c * BigInt(n - k + 1) / BigInt(k);
      pk *= p;
    }
    pmf[k] = BigRational(c) * pk * rpow(q, n - k);
  }
  std::vector<BigRational> tails(n + 2, BigRational(0));
  for (std::size_t k = n + 1; k-- > 0;) tails[k] = tails[k + 1] + pmf[k];
  return tails;
}

inline double to_double(const BigRational& r) {
  if (r == 0) return 0.0;
  // Scale to keep both parts inside double range before dividing.
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  const auto nb = static_cast<long>(boost::multiprecision::msb(num));
  const auto db = static_cast<long>(boost::multiprecision::msb(den));
  long shift = 0;
  if (nb > 900) {
    num >>= static_cast<unsigned>(nb - 900);
    shift += nb - 900;
  }
  if (db > 900) {
    den >>= static_cast<unsigned>(db - 900);
    shift -= db - 900;
  }
  return std::ldexp(num.convert_to<double>() / den.convert_to<double>(), static_cast<int>(shift));
}

// Upper binomial tail by direct long double pmf summation.
inline double binomial_tail_lgamma(std::size_t n, std::size_t s, double p) {
  if (s == 0) return 1.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  long double sum = 0.0L;
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log1p(-static_cast<long double>(p));
  for (std::size_t k = s; k <= n; ++k) {
    const long double lc = std::lgamma(static_cast<long double>(n) + 1) - std::lgamma(static_cast<long double>(k) + 1) -
                           std::lgamma(static_cast<long double>(n - k) + 1);
    sum += std::exp(lc + static_cast<long double>(k) * lp + static_cast<long double>(n - k) * lq);
  }
  return static_cast<double>(std::min(sum, 1.0L));
}

// ---- exhaustive PCT split search ------------------------------------------

// labels[e] holds the positive target columns of entity e.
inline Ratio variance(const std::vector<std::size_t>& members, const std::vector<std::vector<int>>& labels,
                      std::size_t columns) {
  if (members.empty()) return Ratio(0);
  std::vector<std::int64_t> c(columns, 0);
  for (const auto e : members) {
    for (const int j : labels[e]) ++c[static_cast<std::size_t>(j)];
  }
  const auto n = static_cast<std::int64_t>(members.size());
  Ratio v(0);
  for (const auto cj : c) v += Ratio(cj, n) * Ratio(n - cj, n);
  return v;
}

struct SplitChoice {
  std::size_t attribute = 0;
  double below = 0.0;  // largest value sent left
  double above = 0.0;  // smallest value sent right
  Ratio gain;
};

inline std::optional<SplitChoice> best_split(const std::vector<std::size_t>& members,
                                             const std::vector<std::vector<double>>& columns_x,
                                             const std::vector<std::vector<int>>& labels, std::size_t columns,
                                             std::size_t min_leaf) {
  const Ratio parent = variance(members, labels, columns);
  const auto n = static_cast<std::int64_t>(members.size());
  std::optional<SplitChoice> best;
  for (std::size_t a = 0; a < columns_x.size(); ++a) {
    std::set<double> distinct;
    for (const auto e : members) distinct.insert(columns_x[a][e]);
    const std::vector<double> vals(distinct.begin(), distinct.end());
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      std::vector<std::size_t> l;
      std::vector<std::size_t> r;
      for (const auto e : members) (columns_x[a][e] <= vals[i] ? l : r).push_back(e);
      if (l.size() < min_leaf || r.size() < min_leaf) continue;
      const Ratio g = parent - Ratio(static_cast<std::int64_t>(l.size()), n) * variance(l, labels, columns) -
                      Ratio(static_cast<std::int64_t>(r.size()), n) * variance(r, labels, columns);
      if (g <= Ratio(0)) continue;
      if (!best || g > best->gain) best = SplitChoice{a, vals[i], vals[i + 1], g};
    }
  }
  return best;
}

// ---- literal replay of the per-class selection -----------------------------

struct ReplayCandidate {
  std::size_t id = 0;
  bool is_redescription = false;
  Bits support;
  double jaccard = 0.0;
};

struct ReplayClass {
  std::vector<std::size_t> chosen_reds;
  std::vector<std::size_t> chosen_rules;
  std::size_t ncov_reds = 0;
  std::size_t ncov_rules = 0;
};

inline std::vector<ReplayClass> replay_selection(const std::vector<ReplayCandidate>& cands,
                                                 const std::vector<int>& predicted, int classes, double delta) {
  std::vector<ReplayClass> out;
  for (int c = 0; c < classes; ++c) {
    ReplayClass rc;
    const std::size_t n = predicted.size();
    std::size_t class_size = 0;
    for (const int p : predicted) class_size += p == c ? 1 : 0;

    std::vector<double> prec(cands.size(), 0.0);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      std::size_t s = 0;
      std::size_t hit = 0;
      for (std::size_t e = 0; e < n; ++e) {
        if (!cands[i].support[e]) continue;
        ++s;
        hit += predicted[e] == c ? 1 : 0;
      }
      prec[i] = s == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(s);
    }

    for (const bool reds : {true, false}) {
      std::size_t ncov = class_size;  // init(NcovEnt, |E|_c)
      std::vector<bool> covered(n, false);
      std::vector<std::size_t> chosen;
      while (ncov > 0) {
        std::optional<std::size_t> max_r;
        double max_score = -1.0;
        std::size_t max_cov = 0;
        for (std::size_t i = 0; i < cands.size(); ++i) {
          if (cands[i].is_redescription != reds) continue;
          if (prec[i] < delta) continue;
          std::size_t num_cov = 0;
          for (std::size_t e = 0; e < n; ++e) {
            if (cands[i].support[e] && predicted[e] == c && !covered[e]) ++num_cov;
          }
          if (num_cov == 0) continue;
          const double frac = static_cast<double>(num_cov) / static_cast<double>(ncov);
          const double score = reds ? (frac + cands[i].jaccard + 2.0 * prec[i]) / 4.0 : (frac + 2.0 * prec[i]) / 3.0;
          bool take = !max_r || score > max_score;
          if (max_r && score == max_score) {
            if (prec[i] != prec[*max_r]) {
              take = prec[i] > prec[*max_r];
            } else if (num_cov != max_cov) {
              take = num_cov > max_cov;
            } else {
              take = cands[i].id < cands[*max_r].id;
            }
          }
          if (take) {
            max_r = i;
            max_score = score;
            max_cov = num_cov;
          }
        }
        if (!max_r) break;
        chosen.push_back(*max_r);
        for (std::size_t e = 0; e < n; ++e) {
          if (cands[*max_r].support[e] && predicted[e] == c) covered[e] = true;
        }
        ncov -= max_cov;
      }
      if (reds && ncov == 0) {
        for (auto& r : chosen) {
          std::optional<std::size_t> repl;
          for (std::size_t i = 0; i < cands.size(); ++i) {
            if (!cands[i].is_redescription || i == r) continue;
            if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
            if (cands[i].support != cands[r].support) continue;
            if (cands[i].jaccard > cands[r].jaccard && prec[i] >= prec[r]) {
              if (!repl || cands[i].jaccard > cands[*repl].jaccard) repl = i;
            }
          }
          if (repl) r = *repl;
        }
      }
      std::vector<std::size_t> ids;
      for (const auto i : chosen) ids.push_back(cands[i].id);
      (reds ? rc.chosen_reds : rc.chosen_rules) = ids;
      (reds ? rc.ncov_reds : rc.ncov_rules) = ncov;
    }
    out.push_back(std::move(rc));
  }
  return out;
}

// ---- fixtures ---------------------------------------------------------------

inline rdm::View numeric_view(const std::vector<std::vector<double>>& columns, const std::string& prefix,
                              const std::string& tag = {}) {
  std::vector<rdm::AttributeColumn> cols;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    cols.push_back(rdm::AttributeColumn::numeric(prefix + std::to_string(j), columns[j]));
  }
  return rdm::View(std::move(cols), tag.empty() ? prefix : tag);
}

}  // namespace oracle
