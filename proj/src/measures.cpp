#include "rdm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "rdm/error.hpp"

namespace rdm {
namespace {

// log(k!) for k <= n, grown on demand; one table per thread.
double log_factorial(std::size_t k) {
  thread_local std::vector<double> table{0.0};
  while (table.size() <= k) {
    const std::size_t i = table.size();
    table.push_back(table.back() + std::log(static_cast<double>(i)));
  }
  return table[k];
}

double log_binomial(std::size_t n, std::size_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double jaccard(std::span<const SupportSet> supports) {
  if (supports.size() < 2) throw Error(Errc::UniverseMismatch, "jaccard needs >= 2 supports");
  SupportSet inter = supports.front();
  SupportSet uni = supports.front();
  for (std::size_t i = 1; i < supports.size(); ++i) {
    inter &= supports[i];
    uni |= supports[i];
  }
  return uni.count() == 0 ? 0.0
                          : static_cast<double>(inter.count()) / static_cast<double>(uni.count());
}

double p_value(std::size_t support_size, std::size_t universe, std::span<const double> marginals) {
  if (support_size > universe) return 0.0;
  double pi = 1.0;
  for (const double m : marginals) pi *= std::clamp(m, 0.0, 1.0);
  if (support_size == 0) return 1.0;
  if (pi <= 0.0) return 0.0;
  if (pi >= 1.0) return 1.0;

  const double log_pi = std::log(pi);
  const double log_q = std::log1p(-pi);
  const auto n = static_cast<double>(universe);
  const double mode = std::floor((n + 1.0) * pi);

  // Terms are summed relative to the first term's scale; the scale is
  // re-based whenever a larger term appears so nothing overflows.
  double scale = log_binomial(universe, support_size) + static_cast<double>(support_size) * log_pi +
                 static_cast<double>(universe - support_size) * log_q;
  CompensatedSum sum;
  sum.add(1.0);
  for (std::size_t k = support_size + 1; k <= universe; ++k) {
    const double lt = log_binomial(universe, k) + static_cast<double>(k) * log_pi +
                      static_cast<double>(universe - k) * log_q;
    if (lt > scale) {
      const double factor = std::exp(scale - lt);
      CompensatedSum rescaled;
      rescaled.add(sum.value() * factor);
      sum = rescaled;
      scale = lt;
    }
    const double term = std::exp(lt - scale);
    sum.add(term);
    if (static_cast<double>(k) > mode && term < 1e-20 * sum.value()) break;
  }
  const double log_p = scale + std::log(sum.value());
  return std::clamp(std::exp(log_p), 0.0, 1.0);
}

QualityReport quality_report(std::span<const SupportSet> supports) {
  if (supports.empty()) throw Error(Errc::UniverseMismatch, "no supports");
  QualityReport r;
  SupportSet inter = supports.front();
  SupportSet uni = supports.front();
  for (std::size_t i = 1; i < supports.size(); ++i) {
    inter &= supports[i];
    uni |= supports[i];
  }
  const std::size_t n = supports.front().size();
  r.support_size = inter.count();
  r.union_size = uni.count();
  r.jaccard = r.union_size == 0
                  ? 0.0
                  : static_cast<double>(r.support_size) / static_cast<double>(r.union_size);
  for (const auto& s : supports) {
    r.marginals.push_back(n == 0 ? 0.0 : static_cast<double>(s.count()) / static_cast<double>(n));
  }
  r.p_value = p_value(r.support_size, n, r.marginals);
  return r;
}

double precision(const SupportSet& support, const TargetColumn& predictions, int class_index) {
  if (support.empty()) throw Error(Errc::EmptySupport, "precision of an empty support");
  if (predictions.size() != support.size()) {
    throw Error(Errc::UniverseMismatch, "predictions do not cover the support universe");
  }
  std::size_t hits = 0;
  for (const std::size_t e : support.indices()) {
    hits += predictions.labels[e] == class_index ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(support.count());
}

double shannon_entropy(std::span<const int> labels) {
  if (labels.empty()) throw Error(Errc::EmptySupport, "entropy of an empty label multiset");
  std::vector<std::size_t> hist;
  for (const int l : labels) {
    if (l < 0) throw Error(Errc::TypeError, "negative class label");
    if (static_cast<std::size_t>(l) >= hist.size()) hist.resize(static_cast<std::size_t>(l) + 1, 0);
    ++hist[static_cast<std::size_t>(l)];
  }
  const auto total = static_cast<double>(labels.size());
  double h = 0.0;
  for (const std::size_t c : hist) {
    if (c == 0) continue;
    const double f = static_cast<double>(c) / total;
    h -= f * std::log2(f);
  }
  return h;
}

double shannon_entropy(const SupportSet& support, const TargetColumn& labels) {
  std::vector<int> picked;
  picked.reserve(support.count());
  for (const std::size_t e : support.indices()) picked.push_back(labels.labels.at(e));
  return shannon_entropy(picked);
}

std::vector<int> surrogate_predict(std::span<const SurrogateItem> items, const MultiViewDataset& ds,
                                   std::optional<int> default_class) {
  const std::size_t n = ds.entity_count();
  std::vector<int> best_item(n, -1);

  auto better = [&](std::size_t a, std::size_t b) {
    const auto& x = items[a];
    const auto& y = items[b];
    if (x.score != y.score) return x.score > y.score;
    if (x.precision != y.precision) return x.precision > y.precision;
    if (x.support_size != y.support_size) return x.support_size < y.support_size;
    return x.key < y.key;
  };

  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].queries.empty()) continue;
    SupportSet cover = evaluate(items[i].queries.front(), ds);
    for (std::size_t q = 1; q < items[i].queries.size(); ++q) cover &= evaluate(items[i].queries[q], ds);
    for (const std::size_t e : cover.indices()) {
      if (best_item[e] < 0 || better(i, static_cast<std::size_t>(best_item[e]))) {
        best_item[e] = static_cast<int>(i);
      }
    }
  }

  std::vector<int> out(n, default_class.value_or(-1));
  for (std::size_t e = 0; e < n; ++e) {
    if (best_item[e] >= 0) out[e] = items[static_cast<std::size_t>(best_item[e])].class_index;
  }
  return out;
}

double fidelity(std::span<const SurrogateItem> items, const MultiViewDataset& ds,
                const TargetColumn& model_predictions, std::optional<int> default_class) {
  if (model_predictions.size() != ds.entity_count()) {
    throw Error(Errc::RowCountMismatch, "predictions do not match the dataset rows");
  }
  if (ds.entity_count() == 0) return 0.0;
  const auto predicted = surrogate_predict(items, ds, default_class);
  std::size_t agree = 0;
  for (std::size_t e = 0; e < predicted.size(); ++e) {
    agree += predicted[e] >= 0 && predicted[e] == model_predictions.labels[e] ? 1 : 0;
  }
  return static_cast<double>(agree) / static_cast<double>(predicted.size());
}

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Number of arrangements giving each U value for sample sizes (m, n), no ties.
std::vector<double> exact_u_counts(std::size_t m, std::size_t n) {
  // counts[m][n][u] via the recursion f(u; m, n) = f(u - n; m - 1, n) + f(u; m, n - 1).
  const std::size_t umax = m * n;
  std::vector<std::vector<std::vector<double>>> f(
      m + 1, std::vector<std::vector<double>>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      f[i][j].assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        f[i][j][0] = 1.0;
        continue;
      }
      for (std::size_t u = 0; u <= i * j; ++u) {
        double v = 0.0;
        if (u >= j && u - j <= (i - 1) * j) v += f[i - 1][j][u - j];
        if (u <= i * (j - 1)) v += f[i][j - 1][u];
        f[i][j][u] = v;
      }
    }
  }
  (void)umax;
  return f[m][n];
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySample, "Mann-Whitney needs two nonempty samples");
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);
  const double ra = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(na), 0.0);
  const double u = ra - static_cast<double>(na) * static_cast<double>(na + 1) / 2.0;

  // Tie groups.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  bool ties = false;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
    const auto t = static_cast<double>(j - i + 1);
    if (t > 1) ties = true;
    tie_term += t * t * t - t;
    i = j + 1;
  }

  MannWhitneyResult res;
  res.u = u;
  if (n <= 12 && !ties) {
    const auto counts = exact_u_counts(na, nb);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const auto ui = static_cast<std::size_t>(std::llround(u));
    double lower = 0.0;
    double upper = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (k <= ui) lower += counts[k];
      if (k >= ui) upper += counts[k];
    }
    res.p = std::min(1.0, 2.0 * std::min(lower, upper) / total);
    res.exact = true;
    return res;
  }

  const double nad = static_cast<double>(na);
  const double nbd = static_cast<double>(nb);
  const double nd = static_cast<double>(n);
  const double mu = nad * nbd / 2.0;
  const double var = nad * nbd / 12.0 * ((nd + 1.0) - tie_term / (nd * (nd - 1.0)));
  if (!(var > 0.0)) {
    res.p = 1.0;
    return res;
  }
  const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
  res.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw Error(Errc::LengthMismatch, "spearman needs equal lengths >= 3");
  }
  const auto rx = midranks(x);
  const auto ry = midranks(y);
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(Errc::DegenerateVariance, "spearman of a constant vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace rdm
