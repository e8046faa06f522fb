#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "rdm/error.hpp"
#include "rdm/measures.hpp"

using namespace rdm;

namespace {

SupportSet range_set(std::size_t n, std::size_t lo, std::size_t hi) {
  SupportSet s(n);
  for (std::size_t i = lo; i < hi; ++i) s.set(i);
  return s;
}

TargetColumn labels(std::vector<int> l, std::size_t classes) {
  TargetColumn t;
  t.name = "y";
  for (std::size_t c = 0; c < classes; ++c) t.classes.push_back("c" + std::to_string(c));
  t.labels = std::move(l);
  return t;
}

// Rank of each value by counting smaller and equal entries.
std::vector<double> naive_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0;
    double eq = 0;
    for (const double w : v) {
      less += w < v[i] ? 1 : 0;
      eq += w == v[i] ? 1 : 0;
    }
    r[i] = less + (eq + 1) / 2;
  }
  return r;
}

}  // namespace

TEST(Jaccard, WorkedExampleIsThreeQuarters) {
  // 12 entities described by both queries, 16 by at least one.
  const std::vector<SupportSet> s{range_set(40, 0, 14), range_set(40, 2, 16)};
  EXPECT_EQ(jaccard(s), 0.75);
}

TEST(Jaccard, IdentityDisjointMismatch) {
  const std::vector<SupportSet> same{range_set(10, 2, 6), range_set(10, 2, 6)};
  EXPECT_EQ(jaccard(same), 1.0);
  const std::vector<SupportSet> disjoint{range_set(10, 0, 3), range_set(10, 5, 9)};
  EXPECT_EQ(jaccard(disjoint), 0.0);
  const std::vector<SupportSet> empty{SupportSet(10), SupportSet(10)};
  EXPECT_EQ(jaccard(empty), 0.0);
  const std::vector<SupportSet> bad{SupportSet(10), SupportSet(11)};
  EXPECT_THROW((void)jaccard(bad), Error);
  const std::vector<SupportSet> three{range_set(10, 0, 6), range_set(10, 2, 8), range_set(10, 1, 7)};
  EXPECT_DOUBLE_EQ(jaccard(three), 4.0 / 8.0);
}

TEST(PValue, DegenerateCases) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_EQ(p_value(0, 20, half), 1.0);
  const std::vector<double> ones{1.0, 1.0};
  for (std::size_t s = 0; s <= 20; ++s) EXPECT_DOUBLE_EQ(p_value(s, 20, ones), 1.0);
  const std::vector<double> zero{0.0, 0.4};
  EXPECT_EQ(p_value(1, 20, zero), 0.0);
}

TEST(PValue, ExactRationalTwentyHalfHalf) {
  const std::vector<double> half{0.5, 0.5};
  const double exact = oracle::to_double(oracle::binomial_tail(20, 10, oracle::BigRational(1, 4)));
  EXPECT_NEAR(p_value(10, 20, half), exact, 1e-10 * exact);
}

TEST(PValue, GridAgainstExactRational) {
  for (std::size_t n : {1, 7, 20, 33, 60}) {
    for (int a = 0; a <= 10; ++a) {
      for (int b = a; b <= 10; b += 3) {
        const auto tails = oracle::binomial_tails(n, oracle::BigRational(a * b, 100));
        const std::vector<double> m{a / 10.0, b / 10.0};
        for (std::size_t s = 0; s <= n; ++s) {
          const double exact = oracle::to_double(tails[s]);
          const double got = p_value(s, n, m);
          if (exact == 0.0) {
            EXPECT_EQ(got, 0.0);
          } else {
            EXPECT_LE(std::abs(got - exact), 1e-10 * exact) << n << ' ' << a << ' ' << b << ' ' << s;
          }
        }
      }
    }
  }
}

TEST(QualityReport, Fields) {
  const std::vector<SupportSet> s{range_set(20, 0, 10), range_set(20, 5, 15)};
  const auto r = quality_report(s);
  EXPECT_EQ(r.support_size, 5u);
  EXPECT_EQ(r.union_size, 15u);
  EXPECT_DOUBLE_EQ(r.jaccard, 5.0 / 15.0);
  EXPECT_EQ(r.marginals, (std::vector<double>{0.5, 0.5}));
  EXPECT_NEAR(r.p_value, oracle::binomial_tail_lgamma(20, 5, 0.25), 1e-12);
}

TEST(Precision, Counts) {
  const auto t = labels({0, 0, 1, 1, 1, 0, 1, 0, 0, 1}, 2);
  const auto s = SupportSet::from_indices(10, std::vector<std::size_t>{0, 1, 5, 7, 8});
  EXPECT_EQ(precision(s, t, 0), 1.0);
  EXPECT_EQ(precision(s, t, 1), 0.0);
  const auto mixed = SupportSet::from_indices(10, std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
  EXPECT_EQ(precision(mixed, t, 1), 0.5);
  EXPECT_THROW((void)precision(SupportSet(10), t, 0), Error);
}

TEST(Entropy, Values) {
  const std::vector<int> single(7, 2);
  EXPECT_EQ(shannon_entropy(single), 0.0);
  const std::vector<int> half{0, 1, 0, 1};
  EXPECT_DOUBLE_EQ(shannon_entropy(half), 1.0);
  std::vector<int> adni(63, 0);
  adni.insert(adni.end(), 4, 1);
  const double p = 63.0 / 67.0;
  const double q = 4.0 / 67.0;
  EXPECT_NEAR(shannon_entropy(adni), -p * std::log2(p) - q * std::log2(q), 1e-12);
  const std::vector<int> none;
  EXPECT_THROW((void)shannon_entropy(none), Error);
}

TEST(Fidelity, FullRangeRulePerClass) {
  const auto ds = assemble_dataset({oracle::numeric_view({{0, 1, 2, 3}}, "a")});
  const auto t = labels({1, 1, 1, 1}, 2);
  std::vector<SurrogateItem> items;
  for (int c = 0; c < 2; ++c) {
    SurrogateItem it;
    it.queries = {Query::single(0, "a0", 0, 3)};
    it.class_index = c;
    it.precision = c == 1 ? 1.0 : 0.0;
    it.score = it.precision;
    items.push_back(it);
  }
  EXPECT_EQ(fidelity(items, ds, t), 1.0);
  EXPECT_EQ(fidelity(std::span<const SurrogateItem>{}, ds, t), 0.0);
  EXPECT_EQ(fidelity(std::span<const SurrogateItem>{}, ds, t, 1), 1.0);
}

TEST(MannWhitney, ConstantSamples) {
  const std::vector<double> a(8, 3.0);
  const auto r = mann_whitney_u(a, a);
  EXPECT_EQ(r.p, 1.0);
  const std::vector<double> none;
  EXPECT_THROW((void)mann_whitney_u(a, none), Error);
}

TEST(MannWhitney, SeparatedSamples) {
  std::vector<double> hi(10);
  std::vector<double> lo(10);
  std::iota(hi.begin(), hi.end(), 11.0);
  std::iota(lo.begin(), lo.end(), 1.0);
  const auto r = mann_whitney_u(hi, lo);
  EXPECT_EQ(r.u, 100.0);
  EXPECT_LT(r.p, 0.001);
  EXPECT_NEAR(r.p, 0.00018267179110955002, 1e-12);  // scipy, asymptotic with continuity
}

TEST(MannWhitney, ReferenceValues) {
  const std::vector<double> a{1.5, 2.0, 2.0, 3.1, 4.0, 4.0, 5.5, 6.0};
  const std::vector<double> b{2.0, 3.0, 3.1, 7.0, 8.0, 8.5, 9.0, 4.0, 1.0};
  const auto r = mann_whitney_u(a, b);
  EXPECT_EQ(r.u, 26.5);
  EXPECT_FALSE(r.exact);
  EXPECT_NEAR(r.p, 0.3838408921403237, 1e-12);

  const std::vector<double> c{0.3, 1.2, 2.5, 4.1, 0.9};
  const std::vector<double> d{3.3, 5.2, 6.1, 2.2, 7.4, 8.8};
  const auto e = mann_whitney_u(c, d);
  EXPECT_TRUE(e.exact);
  EXPECT_EQ(e.u, 3.0);
  EXPECT_NEAR(e.p, 0.030303030303030304, 1e-14);
}

// Two-sided exact p by enumerating every assignment of ranks to sample a.
TEST(MannWhitney, ExactMatchesEnumeration) {
  std::mt19937_64 rng(4);
  for (std::size_t na = 1; na <= 6; ++na) {
    for (std::size_t nb = 1; na + nb <= 12; ++nb) {
      const std::size_t n = na + nb;
      std::vector<double> pool(n);
      std::iota(pool.begin(), pool.end(), 0.0);
      std::shuffle(pool.begin(), pool.end(), rng);
      const std::vector<double> a(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(na));
      const std::vector<double> b(pool.begin() + static_cast<std::ptrdiff_t>(na), pool.end());
      double u_obs = 0;
      for (const double x : a) {
        for (const double y : b) u_obs += x > y ? 1 : 0;
      }
      double le = 0;
      double ge = 0;
      double total = 0;
      for (unsigned mask = 0; mask < (1U << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != na) continue;
        double u = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (!(mask & (1U << i))) continue;
          for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (1U << j)) && i > j) ++u;
          }
        }
        total += 1;
        le += u <= u_obs ? 1 : 0;
        ge += u >= u_obs ? 1 : 0;
      }
      const auto r = mann_whitney_u(a, b);
      ASSERT_TRUE(r.exact);
      EXPECT_EQ(r.u, u_obs);
      EXPECT_NEAR(r.p, std::min(1.0, 2.0 * std::min(le, ge) / total), 1e-12) << na << ' ' << nb;
    }
  }
}

TEST(MannWhitney, NullShufflesRarelyReject) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  double sum = 0;
  int rejections = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(40);
    for (auto& x : v) x = g(rng);
    std::shuffle(v.begin(), v.end(), rng);
    const std::vector<double> a(v.begin(), v.begin() + 20);
    const std::vector<double> b(v.begin() + 20, v.end());
    const double p = mann_whitney_u(a, b).p;
    sum += p;
    rejections += p < 0.01 ? 1 : 0;
  }
  EXPECT_GT(sum / 100, 0.01);
  EXPECT_LE(rejections, 5);
}

TEST(Spearman, Basic) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> neg(x.size());
  std::transform(x.begin(), x.end(), neg.begin(), [](double v) { return -v; });
  EXPECT_DOUBLE_EQ(spearman(x, x), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, neg), -1.0);
  const std::vector<double> v1{17, 86, 60, 77, 47, 3, 70, 87, 88, 92};
  const std::vector<double> v2{70, 29, 85, 61, 80, 34, 60, 31, 73, 66};
  EXPECT_NEAR(spearman(v1, v2), -0.16363636363636364, 1e-12);
  const std::vector<double> v3{17, 86, 60, 77, 47, 3, 70, 47, 88, 92};
  EXPECT_NEAR(spearman(v3, v2), 0.024316221747202587, 1e-12);
  const std::vector<double> c(5, 1.0);
  EXPECT_THROW((void)spearman(x, c), Error);
  const std::vector<double> shorter{1, 2, 3, 4};
  EXPECT_THROW((void)spearman(x, shorter), Error);
}

TEST(Spearman, MatchesNaiveRankOracle) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(20);
    std::vector<double> y(20);
    for (auto& v : x) v = static_cast<double>(rng() % 8);
    for (auto& v : y) v = static_cast<double>(rng() % 30);
    const auto rx = naive_ranks(x);
    const auto ry = naive_ranks(y);
    EXPECT_EQ(midranks(x), rx);
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / 20;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / 20;
    double sxy = 0;
    double sxx = 0;
    double syy = 0;
    for (std::size_t i = 0; i < 20; ++i) {
      sxy += (rx[i] - mx) * (ry[i] - my);
      sxx += (rx[i] - mx) * (rx[i] - mx);
      syy += (ry[i] - my) * (ry[i] - my);
    }
    EXPECT_NEAR(spearman(x, y), sxy / std::sqrt(sxx * syy), 1e-12);
  }
}
