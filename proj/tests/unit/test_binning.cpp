#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rdm/binning.hpp"
#include "rdm/error.hpp"

using namespace rdm;

namespace {

MultiViewDataset one_column(std::vector<double> v) {
  return assemble_dataset({oracle::numeric_view({std::move(v)}, "a")});
}

struct BinOracle {
  std::vector<double> edges;
  std::vector<int> member;
};

// Freedman-Diaconis bins by direct formula, then merging of deficient bins,
// top bin first, with a deficient lowest bin folded upward at the end.
BinOracle fd_oracle(const std::vector<double>& values, std::size_t min_bin) {
  std::vector<double> s = values;
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  auto q = [&](double p) {
    const double h = (n - 1) * p;
    const double f = std::floor(h);
    const auto i = static_cast<std::size_t>(f);
    const double next = s[std::min(i + 1, s.size() - 1)];
    return s[i] + (h - f) * (next - s[i]);
  };
  const double iqr = q(0.75) - q(0.25);
  const double lo = s.front();
  const double hi = s.back();
  std::size_t k = 1;
  if (iqr > 0 && hi > lo) k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / (2 * iqr / std::cbrt(n)))));
  std::vector<double> edges;
  for (std::size_t i = 0; i <= k; ++i) edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k));
  edges.back() = hi;
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.size() < 2) edges = {lo, hi};

  auto members = [&](const std::vector<double>& e) {
    std::vector<int> m;
    for (const double v : values) {
      int b = static_cast<int>(e.size()) - 2;
      for (std::size_t j = 0; j + 1 < e.size(); ++j) {
        if (v <= e[j + 1]) {
          b = static_cast<int>(j);
          break;
        }
      }
      m.push_back(b);
    }
    return m;
  };
  auto pops = [&](const std::vector<double>& e) {
    std::vector<std::size_t> p(e.size() - 1, 0);
    for (const int b : members(e)) ++p[static_cast<std::size_t>(b)];
    return p;
  };

  for (std::size_t b = edges.size() - 2; b >= 1 && edges.size() > 2; --b) {
    if (pops(edges)[b] < min_bin) edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(b));
  }
  if (edges.size() > 2 && pops(edges)[0] < min_bin) edges.erase(edges.begin() + 1);
  return {edges, members(edges)};
}

}  // namespace

TEST(Binning, ConstantAttributeSingleBin) {
  const auto ds = one_column(std::vector<double>(12, 4.5));
  const auto spec = perform_binning(ds, {0, "a0"}, 1);
  EXPECT_EQ(spec.bin_count(), 1u);
  EXPECT_EQ(spec.edges, (std::vector<double>{4.5, 4.5}));
  const auto rules = bins_to_rules(spec);
  ASSERT_EQ(rules.size(), 1u);
  EXPECT_EQ(evaluate(rules[0], ds).count(), 12u);
}

TEST(Binning, UniformGridBinCountFromFormula) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  const auto spec = perform_binning(one_column(v), {0, "a0"}, 1);
  const double width = 2 * 499.5 / std::cbrt(1000.0);
  const auto k = static_cast<std::size_t>(std::ceil(999.0 / width));
  EXPECT_EQ(spec.bin_count(), k);
  EXPECT_GE(k, 10u);
  EXPECT_LE(k, 11u);
}

TEST(Binning, NonNumericRejected) {
  std::vector<AttributeColumn> cols{AttributeColumn::nominal("c", {"x", "y"}, {0, 1, 0})};
  const auto ds = assemble_dataset({View(std::move(cols), "n")});
  EXPECT_THROW((void)perform_binning(ds, {0, "c"}, 1), Error);
}

TEST(Binning, MatchesOracleOnRandomColumns) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  for (int rep = 0; rep < 120; ++rep) {
    const std::size_t n = 5 + rng() % 300;
    std::vector<double> v(n);
    for (auto& x : v) x = rep % 3 == 0 ? std::round(g(rng) * 3) : (rep % 3 == 1 ? std::exp(g(rng)) : g(rng));
    const std::size_t min_bin = rng() % 25;
    const auto ds = one_column(v);
    const auto spec = perform_binning(ds, {0, "a0"}, min_bin);
    const auto o = fd_oracle(v, min_bin);
    EXPECT_EQ(spec.edges, o.edges) << "rep " << rep;
    EXPECT_EQ(spec.bin_of_entity, o.member) << "rep " << rep;
    const auto pop = spec.populations();
    if (pop.size() > 1) {
      for (const auto p : pop) EXPECT_GE(p, min_bin);
    }
  }
}

TEST(Binning, ScalesWithCubeRoot) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u;
  auto bins = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return static_cast<double>(perform_binning(one_column(v), {0, "a0"}, 10).bin_count());
  };
  const double ratio = bins(8000) / bins(1000);
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.5);
}

TEST(BinsToRules, SingletonValues) {
  const auto ds = one_column({0, 1, 2, 0, 1, 2});
  BinSpec spec;
  spec.attribute = {0, "a0"};
  spec.edges = {0, 0.5, 1.5, 2};
  spec.bin_of_entity = {0, 1, 2, 0, 1, 2};
  const auto rules = bins_to_rules(spec);
  ASSERT_EQ(rules.size(), 3u);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_EQ(evaluate(rules[s], ds).indices(), (std::vector<std::size_t>{s, s + 3}));
  }
}

TEST(BinsToRules, SupportsPartitionEntities) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(0, 40);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> v(200);
    for (auto& x : v) x = d(rng) / 4.0;
    const auto ds = one_column(v);
    const auto spec = perform_binning(ds, {0, "a0"}, 5);
    const auto rules = bins_to_rules(spec);
    ASSERT_EQ(rules.size(), spec.bin_count());
    std::vector<int> seen(v.size(), 0);
    for (std::size_t s = 0; s < rules.size(); ++s) {
      const auto sup = evaluate(rules[s], ds);
      for (std::size_t e = 0; e < v.size(); ++e) {
        EXPECT_EQ(sup.test(e), spec.bin_of_entity[e] == static_cast<int>(s));
        seen[e] += sup.test(e) ? 1 : 0;
      }
    }
    for (const int c : seen) EXPECT_EQ(c, 1);
  }
}

TEST(BinsToClasses, IdentityAndHistogram) {
  BinSpec one;
  one.edges = {0, 1};
  one.bin_of_entity = {0, 0, 0};
  EXPECT_EQ(bins_to_classes(one), (std::vector<int>{0, 0, 0}));
  BinSpec spec;
  spec.edges = {0, 1, 2, 3};
  spec.bin_of_entity = {0, 1, 1, 2};
  EXPECT_EQ(bins_to_classes(spec), (std::vector<int>{0, 1, 1, 2}));
  const auto classes = bins_to_classes(spec);
  std::vector<std::size_t> hist(3, 0);
  for (const int c : classes) ++hist[static_cast<std::size_t>(c)];
  EXPECT_EQ(hist, spec.populations());
}
