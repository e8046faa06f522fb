#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>

#include "oracles.hpp"
#include "rdm/arff.hpp"
#include "rdm/dataset.hpp"
#include "rdm/error.hpp"

using namespace rdm;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no rdm::Error thrown";
  return Errc::InvariantViolation;
}

}  // namespace

TEST(Arff, NumericView) {
  const View v = parse_arff(
      "% comment\n@RELATION layer\n@attribute n1 numeric\n@ATTRIBUTE n2 REAL\n@data\n"
      "1.5,-2\n0.25,7\n3,0\n");
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.rows(), 3u);
  EXPECT_EQ(v.source_tag(), "layer");
  EXPECT_DOUBLE_EQ(v.attribute(0).v_min(), 0.25);
  EXPECT_DOUBLE_EQ(v.attribute(0).v_max(), 3.0);
  EXPECT_DOUBLE_EQ(v.attribute(1).v_min(), -2.0);
  EXPECT_DOUBLE_EQ(v.attribute(1).v_max(), 7.0);
}

TEST(Arff, NominalDictionary) {
  const View v = parse_arff("@relation p\r\n@attribute class {a,b}\r\n@data\r\nb\r\na\r\nb\r\n");
  ASSERT_EQ(v.size(), 1u);
  const auto& c = v.attribute(0);
  EXPECT_FALSE(c.is_numeric());
  EXPECT_EQ(c.categories(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(std::vector<int>(c.codes().begin(), c.codes().end()), (std::vector<int>{1, 0, 1}));
}

TEST(Arff, Errors) {
  EXPECT_EQ(code_of([] { (void)parse_arff("@relation r\n@attribute a numeric\n@attribute b numeric\n@data\n1,2,3\n"); }),
            Errc::ArityMismatch);
  EXPECT_EQ(code_of([] { (void)parse_arff("@relation r\n@attribute a numeric\n@data\nnan\n"); }),
            Errc::NonFiniteValue);
  EXPECT_EQ(code_of([] { (void)parse_arff("@relation r\n@attribute c {x,y}\n@data\nz\n"); }),
            Errc::UnknownCategory);
  EXPECT_EQ(code_of([] { (void)parse_arff("@relation r\n@attribute a numeric\n1\n"); }), Errc::MalformedHeader);
  EXPECT_EQ(code_of([] { (void)read_arff("/nonexistent/x.arff"); }), Errc::Io);
}

TEST(Arff, WriteParseRoundTrip) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<double> a(50);
  std::vector<double> b(50);
  for (std::size_t i = 0; i < 50; ++i) {
    a[i] = g(rng);
    b[i] = g(rng) * 1e-7;
  }
  std::vector<AttributeColumn> cols{AttributeColumn::numeric("x", a), AttributeColumn::numeric("y", b),
                                    AttributeColumn::nominal("c", {"lo", "hi"}, std::vector<int>(50, 1))};
  const View v(std::move(cols), "rt");
  const View back = parse_arff(write_arff(v, "rt"));
  EXPECT_EQ(back, v);

  const auto dir = std::filesystem::temp_directory_path() / "rdm_arff_rt";
  std::filesystem::create_directories(dir);
  write_arff_file(dir / "v.arff", v, "rt");
  EXPECT_EQ(read_arff(dir / "v.arff"), v);
  std::filesystem::remove_all(dir);
}

TEST(Dataset, Alignment) {
  const View v1 = oracle::numeric_view({std::vector<double>(10, 1.0)}, "a");
  const View v2 = oracle::numeric_view({std::vector<double>(10, 2.0)}, "b");
  const auto ds = assemble_dataset({v1, v2});
  EXPECT_EQ(ds.entity_count(), 10u);
  EXPECT_EQ(ds.view_count(), 2u);
  EXPECT_FALSE(ds.targets().has_value());

  const View v3 = oracle::numeric_view({std::vector<double>(9, 2.0)}, "c");
  EXPECT_EQ(code_of([&] { (void)assemble_dataset({v1, v3}); }), Errc::RowCountMismatch);

  TargetColumn t{"y", {"p", "q"}, std::vector<int>(10, 0)};
  const auto with = assemble_dataset({v1}, t);
  ASSERT_TRUE(with.targets().has_value());
  EXPECT_EQ(with.targets()->size(), 10u);
}

TEST(Dataset, ColumnLookup) {
  const auto ds = assemble_dataset({oracle::numeric_view({{1, 2}, {3, 4}}, "a")});
  EXPECT_EQ(ds.column({0, "a1"}).values()[1], 4.0);
  EXPECT_EQ(code_of([&] { (void)ds.column({0, "zz"}); }), Errc::UnknownAttribute);
  EXPECT_EQ(code_of([&] { (void)ds.column({3, "a0"}); }), Errc::ViewIndexOutOfRange);
}

TEST(Dataset, TargetFromColumn) {
  const auto nom = AttributeColumn::nominal("c", {"x", "y"}, {1, 0, 1});
  const auto t = target_from_column(nom);
  EXPECT_EQ(t.classes, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(t.labels, (std::vector<int>{1, 0, 1}));
  const auto codes = target_from_column(AttributeColumn::numeric("k", {2, 0, 1}));
  EXPECT_EQ(codes.class_count(), 3u);
  EXPECT_EQ(code_of([] { (void)target_from_column(AttributeColumn::numeric("k", {0.5})); }), Errc::TypeError);
}

TEST(Subsample, FullSizeIsIdentity) {
  std::vector<double> x(30);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const auto ds = assemble_dataset({oracle::numeric_view({x}, "a"), oracle::numeric_view({x}, "b")});
  const auto s = subsample(ds, 30, 9);
  EXPECT_EQ(s.views(), ds.views());
  EXPECT_EQ(s.entity_ids(), ds.entity_ids());
}

TEST(Subsample, SingleRowAligned) {
  std::vector<double> x(30);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i);
  const auto ds = assemble_dataset({oracle::numeric_view({x}, "a"), oracle::numeric_view({x}, "b")});
  const auto s = subsample(ds, 1, 0);
  ASSERT_EQ(s.entity_count(), 1u);
  EXPECT_EQ(s.view(0).attribute(0).values()[0], s.view(1).attribute(0).values()[0]);
  EXPECT_EQ(code_of([&] { (void)subsample(ds, 0, 0); }), Errc::BadSampleSize);
  EXPECT_EQ(code_of([&] { (void)subsample(ds, 31, 0); }), Errc::BadSampleSize);
}

// Fingerprint column equal across views on every row, row ids consistent.
TEST(Subsample, SeedsDifferAndRowsStayAligned) {
  std::vector<double> fp(500);
  std::vector<double> noise(500);
  std::mt19937_64 rng(11);
  for (std::size_t i = 0; i < 500; ++i) {
    fp[i] = static_cast<double>((i * 2654435761ULL) % 1000003ULL);
    noise[i] = static_cast<double>(rng() % 1000);
  }
  const auto ds = assemble_dataset({oracle::numeric_view({fp, noise}, "a"), oracle::numeric_view({noise, fp}, "b")});
  const auto s1 = subsample(ds, 100, 1);
  const auto s2 = subsample(ds, 100, 2);
  EXPECT_NE(s1.entity_ids(), s2.entity_ids());
  for (const auto* s : {&s1, &s2}) {
    ASSERT_EQ(s->entity_count(), 100u);
    const auto ids = s->entity_ids();
    EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
    EXPECT_EQ(std::set<std::size_t>(ids.begin(), ids.end()).size(), 100u);
    for (std::size_t r = 0; r < 100; ++r) {
      EXPECT_EQ(s->view(0).attribute(0).values()[r], s->view(1).attribute(1).values()[r]);
      EXPECT_EQ(s->view(0).attribute(0).values()[r], fp[ids[r]]);
    }
  }
}
