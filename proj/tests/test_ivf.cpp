#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "ghc/ivf.hpp"
#include "ghc/parser.hpp"

using namespace ghc;

namespace {

std::string fixture(const char* name) { return std::string(GHC_FIXTURE_DIR) + "/" + name; }

errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return errc::invalid_argument;
}

}  // namespace

TEST(DomainBox, Basics) {
  const DomainBox b({Interval(-1, 1), Interval(0, 2)});
  EXPECT_EQ(b.dims(), 2u);
  EXPECT_TRUE(b.contains(std::vector<double>{1, 2}));
  EXPECT_FALSE(b.contains(std::vector<double>{1, 2.001}));
  EXPECT_EQ(b.center(), (Point{0, 1}));
  EXPECT_FALSE(b.symmetric_about_origin());
  EXPECT_TRUE(DomainBox::cube(3, -2, 2).symmetric_about_origin());
  EXPECT_EQ(b.to_string(), "[-1, 1] x [0, 2]");
}

TEST(Ivf, EvalExamples) {
  EXPECT_EQ(load_ivf(fixture("abs_c.ivf"))({-2.0}), Interval(4, 10));
  const IVF r33 = load_ivf(fixture("remark33.ivf"));
  EXPECT_EQ(r33({0.0}), Interval(5, 10));
  const double g = std::sin(1.0) * std::sin(1.0);
  EXPECT_EQ(r33({1.0}), Interval(g, 2 * g));
  // Negative scale flips the constant.
  EXPECT_EQ(r33({-1.0}), Interval(-2 * g, -g));
}

TEST(Ivf, ScaleFormUsesScalarMultiplication) {
  const DomainBox box = DomainBox::cube(1, -5, 5);
  const IVF f = IVF::scale_form(parse_expr("x1"), Interval(3, 8), box);
  EXPECT_EQ(f({-1.0}), Interval(-8, -3));
  EXPECT_EQ(f({2.0}), Interval(6, 16));
  const IVF r34 = load_ivf(fixture("remark34.ivf"));
  EXPECT_EQ(r34({1.0, 1.0}), Interval(6, 16));
  EXPECT_EQ(r34({0.0, 0.0}), kZero);
  const IVF q = IVF::scale_form(parse_expr("sqrt(quad([[1, 0], [0, 1]]))"), Interval(1, 2),
                                DomainBox::cube(2, -5, 5));
  EXPECT_EQ(q({3.0, 4.0}), Interval(5, 10));
}

TEST(Ivf, Errors) {
  const IVF f = load_ivf(fixture("abs_c.ivf"));
  EXPECT_EQ(code_of([&] { f({11.0}); }), errc::domain);
  EXPECT_EQ(code_of([&] { f({1.0, 2.0}); }), errc::domain);
  const IVF lg = parse_ivf("ivf { dom: [-1, 1]; lower: log(x1 + 2) - 5; upper: log(x1 + 2) }");
  EXPECT_NO_THROW(lg({0.5}));
  const IVF r34 = load_ivf(fixture("remark34.ivf"));
  EXPECT_EQ(code_of([&] { r34({1.0, 0.0}); }), errc::evaluation);
  EXPECT_EQ(code_of([&] { r34({1.0, -1.0}); }), errc::domain);
  EXPECT_EQ(r34.try_eval(std::vector<double>{1.0, 0.0}), std::nullopt);
}

TEST(Ivf, Combinators) {
  const IVF f = load_ivf(fixture("abs_c.ivf"));
  const IVF g = parse_ivf("ivf { dom: [-10, 10]; lower: x1 - 1; upper: x1 + 1 }");
  EXPECT_EQ((f + g)({-2.0}), Interval(1, 9));
  EXPECT_EQ(scaled(-1, f)({-2.0}), Interval(-10, -4));
  EXPECT_EQ(endpoint_function(f, Endpoint::Lower)({-2.0}), Interval(4, 4));
  EXPECT_EQ(endpoint_function(f, Endpoint::Upper)({-2.0}), Interval(10, 10));
  EXPECT_EQ(norm_function(g)({-2.0}), Interval(3, 3));
  EXPECT_EQ(gh_distance_function(f, Interval(2, 5))({-2.0}), Interval(5, 5));
}

TEST(Ivf, SumDomainIsIntersection) {
  const IVF f = parse_ivf("ivf { dom: [0, 4]; lower: 0; upper: 1 }");
  const IVF g = parse_ivf("ivf { dom: [2, 6]; lower: 0; upper: 1 }");
  const IVF s = f + g;
  EXPECT_TRUE(s.contains(std::vector<double>{3}));
  EXPECT_FALSE(s.contains(std::vector<double>{1}));
  EXPECT_FALSE(s.contains(std::vector<double>{5}));
}
