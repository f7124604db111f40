#include "dysmooth/catalog.hpp"
#include "dysmooth/error.hpp"
#include "dysmooth/mesh.hpp"
#include "dysmooth/sample_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace dysmooth;

namespace {

template <typename F>
std::string error_message(F&& f, ErrorKind kind) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return {};
}

}  // namespace

TEST(Grid, SizesAndStrides) {
  const DyadicGrid g(3, 2);
  EXPECT_EQ(g.points_per_axis(), 5);
  EXPECT_EQ(g.size(), 125u);
  EXPECT_EQ(g.axis_stride(0), 25u);
  EXPECT_EQ(g.axis_stride(1), 5u);
  EXPECT_EQ(g.axis_stride(2), 1u);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.25);
}

TEST(Grid, FlatUnflatRoundTrip) {
  const DyadicGrid g(2, 3);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto k = g.unflat(p);
    EXPECT_EQ(g.flat(k), p);
    EXPECT_EQ(g.component(p, 0), k[0]);
    EXPECT_EQ(g.component(p, 1), k[1]);
  }
  const MultiIndex k{2, 7};
  EXPECT_EQ(g.flat(k), 2u * 9 + 7);
  const auto x = g.point(k);
  EXPECT_DOUBLE_EQ(x[0], 0.25);
  EXPECT_DOUBLE_EQ(x[1], 0.875);
}

TEST(Grid, CapsRaiseCapacityErrors) {
  EXPECT_NE(error_message([] { DyadicGrid(5, 1); }, ErrorKind::capacity).find("dimension"), std::string::npos);
  EXPECT_NE(error_message([] { DyadicGrid(2, 13); }, ErrorKind::capacity).find("level"), std::string::npos);
  EXPECT_NO_THROW(DyadicGrid(2, 12));
  EXPECT_NO_THROW(DyadicGrid(4, 6));
}

TEST(Grid, OutOfRangeIndex) {
  const DyadicGrid g(1, 2);
  const MultiIndex k{5};
  EXPECT_FALSE(g.contains(k));
  error_message([&] { g.flat(k); }, ErrorKind::validation);
}

TEST(SampleFieldTest, RejectsWrongLengthAndNonFinite) {
  const auto msg = error_message([] { SampleField(DyadicGrid(1, 2), {1, 2, 3}); }, ErrorKind::validation);
  EXPECT_NE(msg.find("expected 5"), std::string::npos);
  const auto nan = error_message([] { SampleField(DyadicGrid(1, 1), {0.0, NAN, 1.0}); }, ErrorKind::validation);
  EXPECT_NE(nan.find("flat index 1"), std::string::npos);
}

TEST(Catalog, Values) {
  const auto p = CatalogFunction::poly(2, {{2.0, {1, 0}}, {-1.0, {0, 2}}});
  const std::vector<double> x{0.5, 0.25};
  EXPECT_DOUBLE_EQ(p(x), 1.0 - 0.0625);
  const auto a = CatalogFunction::abs_power(2, 1, 0.5, 1.5);
  EXPECT_DOUBLE_EQ(a(x), std::pow(0.25, 1.5));
  const auto rp = CatalogFunction::radial_power(2, {0.5, 0.5}, 1.0);
  EXPECT_DOUBLE_EQ(rp(x), 0.25);
  EXPECT_DOUBLE_EQ(CatalogFunction::diag_bilinear(2)(x), 0.125);
  const auto w = CatalogFunction::weierstrass(1, 0.5, 3.0, 3);
  const std::vector<double> zero{0.0};
  EXPECT_DOUBLE_EQ(w(zero), 1 + 0.5 + 0.25 + 0.125);
  EXPECT_EQ(w.name(), "weierstrass-truncated");
}

TEST(Catalog, ParameterChecks) {
  error_message([] { CatalogFunction::diag_bilinear(1); }, ErrorKind::validation);
  error_message([] { CatalogFunction::weierstrass(1, 0.2, 3.0, 5); }, ErrorKind::validation);  // ab < 1
  error_message([] { CatalogFunction::weierstrass(1, 0.5, 3.0, 31); }, ErrorKind::validation);
  error_message([] { CatalogFunction::abs_power(1, 1, 0.5, 1.0); }, ErrorKind::validation);
}

TEST(Source, SampledSubsamplingMatchesAnalytic) {
  const FunctionSource analytic(CatalogFunction::abs_power(2, 0, 0.3, 0.7));
  const FunctionSource sampled(sample(analytic, DyadicGrid(2, 5)));
  for (int n = 0; n <= 5; ++n) {
    const auto a = sample(analytic, DyadicGrid(2, n));
    const auto s = sample(sampled, DyadicGrid(2, n));
    ASSERT_EQ(a.values().size(), s.values().size());
    for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_EQ(a[i], s[i]);
  }
  error_message([&] { sample(sampled, DyadicGrid(2, 6)); }, ErrorKind::validation);
  const std::vector<double> off{0.1, 0.5};
  const auto msg = error_message([&] { sampled.evaluate(off); }, ErrorKind::validation);
  EXPECT_NE(msg.find("not on the level-5 mesh"), std::string::npos);
  const std::vector<double> on{0.25, 0.5};
  EXPECT_EQ(sampled.evaluate(on), analytic.evaluate(on));
}

TEST(Source, PointOutsideCube) {
  const FunctionSource f(CatalogFunction::diag_bilinear(2));
  const std::vector<double> x{1.5, 0.0};
  error_message([&] { f.evaluate(x); }, ErrorKind::validation);
}

TEST(SampleIo, RoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> v(DyadicGrid(2, 3).size());
  for (auto& x : v) x = u(rng) / 3.0;
  const SampleField field(DyadicGrid(2, 3), v);
  const auto back = parse_samples(format_samples(field));
  ASSERT_EQ(back.grid(), field.grid());
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(back[i], v[i]);

  const auto path = std::filesystem::temp_directory_path() / "dysmooth_samples_roundtrip.json";
  store_samples(field, path);
  const auto loaded = load_samples(path);
  std::filesystem::remove(path);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(loaded[i], v[i]);
}

TEST(SampleIo, Errors) {
  auto msg = error_message([] { parse_samples(R"({"dimension":1,"level":2,"order":"lex-last-fastest","values":[1,2]})"); },
                           ErrorKind::validation);
  EXPECT_NE(msg.find("expected 5 values"), std::string::npos);
  msg = error_message([] { parse_samples(R"({"dimension":1,"level":1,"order":"lex-last-fastest","values":[1,"x",2]})"); },
                      ErrorKind::validation);
  EXPECT_NE(msg.find("flat index 1"), std::string::npos);
  msg = error_message([] { parse_samples(R"({"dimension":1,"level":1,"order":"lex-last-fastest","values":[1,2,NaN]})"); },
                      ErrorKind::validation);
  EXPECT_NE(msg.find("flat index 2"), std::string::npos);
  error_message([] { parse_samples(R"({"dimension":1,"level":1,"order":"column-major","values":[1,2,3]})"); },
                ErrorKind::validation);
}
