#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "ghc/derivative.hpp"
#include "ghc/parser.hpp"

using namespace ghc;

namespace {

std::string fixture(const char* name) { return std::string(GHC_FIXTURE_DIR) + "/" + name; }

DerivativeQuery query(const IVF& f, Point x, Point h) {
  return DerivativeQuery{f, std::move(x), std::move(h)};
}

void expect_close(const Interval& got, const Interval& want, double eps) {
  EXPECT_NEAR(got.lower(), want.lower(), eps) << to_string(got) << " vs " << to_string(want);
  EXPECT_NEAR(got.upper(), want.upper(), eps) << to_string(got) << " vs " << to_string(want);
}

// Brute-force joint (x, λ) sweep of a one-dimensional g(x) ⊙ C at 0, written
// without the library: x on a uniform grid of [-δ, δ] including 0, λ on a
// log grid of (1e-7 δ, δ).
Interval clarke_sweep(const std::function<double(double)>& g, double c1, double c2, double h,
                      double delta, bool upper) {
  auto scale = [&](double s, double& lo, double& hi) {
    lo = s >= 0 ? s * c1 : s * c2;
    hi = s >= 0 ? s * c2 : s * c1;
  };
  double best_lo = upper ? -1e300 : 1e300, best_hi = best_lo;
  constexpr int kX = 4001, kL = 400;
  for (int i = 0; i < kX; ++i) {
    const double x = delta * (2.0 * i / (kX - 1) - 1.0);
    double alo, ahi;
    scale(g(x), alo, ahi);
    for (int j = 0; j < kL; ++j) {
      const double lambda = delta * std::pow(1e-7, (j + 0.5) / kL);
      double blo, bhi;
      scale(g(x + lambda * h), blo, bhi);
      const double d1 = (blo - alo) / lambda, d2 = (bhi - ahi) / lambda;
      const double lo = std::min(d1, d2), hi = std::max(d1, d2);
      if (upper) {
        best_lo = std::max(best_lo, lo);
        best_hi = std::max(best_hi, hi);
      } else {
        best_lo = std::min(best_lo, lo);
        best_hi = std::min(best_hi, hi);
      }
    }
  }
  return Interval(best_lo, best_hi);
}

}  // namespace

TEST(DiffQuotient, Examples) {
  const IVF f = load_ivf(fixture("abs_c.ivf"));
  EXPECT_EQ(diff_quotient(f, std::vector<double>{1}, std::vector<double>{1}, 0.5), Interval(2, 5));
  const IVF c = load_ivf(fixture("constant.ivf"));
  EXPECT_EQ(diff_quotient(c, std::vector<double>{1, 2}, std::vector<double>{-3, 0.5}, 0.25), kZero);
  EXPECT_EQ(diff_quotient(f, std::vector<double>{1}, std::vector<double>{0}, 0.25), kZero);
  EXPECT_THROW(diff_quotient(f, std::vector<double>{1}, std::vector<double>{1}, 0.0), error);
}

TEST(Directional, SmoothConvex) {
  const IVF f = load_ivf(fixture("x2.ivf"));
  // Oracle: quotient at a tiny step by hand, 2x̄ ⊙ [1, 2] in the limit.
  const double lambda = 1e-7;
  const double q = ((1 + lambda) * (1 + lambda) - 1) / lambda;
  const DerivativeResult r = directional(query(f, {1.0}, {1.0}));
  ASSERT_TRUE(r.exists);
  expect_close(r.value, Interval(q, 2 * q), 1e-6);
  expect_close(r.value, Interval(2, 4), 1e-6);
}

TEST(Directional, QuadrantExample) {
  const IVF f = load_ivf(fixture("remark34.ivf"));
  // (h1^2 / h2) ⊙ [3, 8]
  for (const auto& [h, k] : {std::pair{Point{1, 1}, 1.0}, std::pair{Point{2, 1}, 4.0},
                             std::pair{Point{1, 2}, 0.5}, std::pair{Point{-1, 1}, 1.0}}) {
    const DerivativeResult r = directional(query(f, {0.0, 0.0}, h));
    ASSERT_TRUE(r.exists);
    expect_close(r.value, Interval(3 * k, 8 * k), 1e-3);
  }
}

TEST(Directional, JumpAtBasePointDoesNotExist) {
  const IVF f = load_ivf(fixture("remark33.ivf"));
  const DerivativeResult r = directional(query(f, {0.0}, {1.0}));
  EXPECT_FALSE(r.exists);
  EXPECT_TRUE(r.estimate.divergent);
}

TEST(Directional, ConstantIsZero) {
  const DerivativeResult r = directional(query(load_ivf(fixture("constant.ivf")), {0.0, 0.0}, {1.0, 1.0}));
  ASSERT_TRUE(r.exists);
  EXPECT_EQ(r.value, kZero);
}

TEST(Directional, SkipsStepsOutsideTheDomain) {
  const IVF f = load_ivf(fixture("sqrt.ivf"));
  // Near the right edge: x̄ + λh leaves [0, 10] for the first few steps.
  const DerivativeResult r = directional(query(f, {9.9}, {1.0}));
  ASSERT_TRUE(r.exists);
  const double d = 1.0 / (2 * std::sqrt(9.9));
  expect_close(r.value, Interval(2 * d, 5 * d), 1e-3);
  EXPECT_THROW(directional(query(f, {10.0}, {1.0})), error);
}

TEST(UpperClarke, AbsScaled) {
  const IVF f = load_ivf(fixture("abs_c.ivf"));
  const DerivativeResult r1 = upper_clarke(query(f, {0.0}, {1.0}));
  ASSERT_TRUE(r1.exists);
  expect_close(r1.value, Interval(2, 5), 1e-3);
  EXPECT_TRUE(r1.includes_base_point);
  EXPECT_TRUE(r1.estimate.monotone);
  const DerivativeResult r3 = upper_clarke(query(f, {0.0}, {-3.0}));
  ASSERT_TRUE(r3.exists);
  expect_close(r3.value, Interval(6, 15), 1e-3);
}

TEST(UpperClarke, SignChangingScaleMatchesSweep) {
  // sin^2(x)/x changes sign at 0, so the joint sup exceeds h ⊙ C = [2, 4].
  auto g = [](double x) { return x == 0 ? 5.0 : std::sin(x) * std::sin(x) / x; };
  const Interval oracle = clarke_sweep(g, 1, 2, 2, 1e-4, true);
  expect_close(oracle, Interval(3, 4), 2e-3);
  const DerivativeResult r = upper_clarke(query(load_ivf(fixture("remark33.ivf")), {0.0}, {2.0}));
  ASSERT_TRUE(r.exists);
  expect_close(r.value, oracle, 2e-3);
}

TEST(UpperClarke, QuadrantExampleMatchesBound) {
  const IVF f = load_ivf(fixture("remark34.ivf"));
  const DerivativeResult r = upper_clarke(query(f, {0.0, 0.0}, {1.0, 1.0}));
  // Along h = (1,1) the scalar quotient is bounded by 1 + O(δ), so the joint
  // sup converges to [3, 8].
  ASSERT_TRUE(r.exists);
  expect_close(r.value, Interval(3, 8), 2e-3);
  // Along (1, 0) the quotient grows like 1/x2: no finite limit.
  EXPECT_FALSE(upper_clarke(query(f, {0.0, 0.0}, {1.0, 0.0})).exists);
  EXPECT_FALSE(lower_clarke(query(f, {0.0, 0.0}, {1.0, 1.0})).exists);
}

TEST(LowerClarke, AbsScaledMatchesSweepAndNegation) {
  const IVF f = load_ivf(fixture("abs_c.ivf"));
  const Interval oracle = clarke_sweep([](double x) { return std::fabs(x); }, 2, 5, 1, 1e-3, false);
  expect_close(oracle, Interval(-5, -2), 1e-6);
  const DerivativeResult lo = lower_clarke(query(f, {0.0}, {1.0}));
  ASSERT_TRUE(lo.exists);
  expect_close(lo.value, oracle, 1e-3);
  const DerivativeResult neg = upper_clarke(query(scaled(-1, f), {0.0}, {1.0}));
  ASSERT_TRUE(neg.exists);
  expect_close(lo.value, scalar_mul(-1, neg.value), 1e-3);
}

TEST(Clarke, LinearAwayFromAndAtZero) {
  const IVF f = parse_ivf("ivf { dom: [-5, 5]; scale: x1; c: [1, 2] }");
  for (double x : {1.0, -1.0}) {
    const DerivativeResult up = upper_clarke(query(f, {x}, {1.0}));
    const DerivativeResult lo = lower_clarke(query(f, {x}, {1.0}));
    ASSERT_TRUE(up.exists && lo.exists);
    expect_close(up.value, Interval(1, 2), 1e-3);
    expect_close(lo.value, Interval(1, 2), 1e-3);
  }
  // At 0 the scale changes sign; crossing pairs lift the lower endpoint to 1.5.
  const auto lin = [](double x) { return x; };
  expect_close(clarke_sweep(lin, 1, 2, 1, 1e-3, true), Interval(1.5, 2), 1e-3);
  expect_close(upper_clarke(query(f, {0.0}, {1.0})).value, Interval(1.5, 2), 1e-3);
  expect_close(lower_clarke(query(f, {0.0}, {1.0})).value, Interval(1, 1.5), 1e-3);
}

TEST(Clarke, ConstantIsZero) {
  const IVF c = load_ivf(fixture("constant.ivf"));
  const DerivativeResult r = upper_clarke(query(c, {0.5, -1.0}, {2.0, 1.0}));
  ASSERT_TRUE(r.exists);
  EXPECT_EQ(r.value, kZero);
}

TEST(Clarke, LowerBelowUpperAndMonotoneTraces) {
  const IVF f = parse_ivf("ivf { dom: [-2, 2]^2; scale: abs(x1 - x2) + sin(x1*x2); c: [-1, 3] }");
  for (const Point& x : {Point{0.0, 0.0}, Point{0.5, -0.25}, Point{1.0, 1.0}}) {
    const DerivativeQuery q = query(f, x, {0.6, -0.8});
    const DerivativeResult up = upper_clarke(q);
    const DerivativeResult lo = lower_clarke(q);
    EXPECT_TRUE(up.estimate.monotone);
    EXPECT_TRUE(lo.estimate.monotone);
    if (up.exists && lo.exists) EXPECT_TRUE(dominates_with_slack(lo.value, up.value, 2e-3));
  }
}

TEST(Gap, ConvexCasesVanish) {
  expect_close(clarke_directional_gap(query(load_ivf(fixture("x2.ivf")), {1.0}, {1.0})), kZero, 3e-3);
  expect_close(clarke_directional_gap(query(load_ivf(fixture("abs_c.ivf")), {0.0}, {1.0})), kZero,
               3e-3);
}

TEST(Gap, MissingDirectionalIsNonexistence) {
  try {
    clarke_directional_gap(query(load_ivf(fixture("remark33.ivf")), {0.0}, {1.0}));
    ADD_FAILURE();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::nonexistence);
  }
}

TEST(Derivative, QueryValidation) {
  const IVF f = load_ivf(fixture("abs_c.ivf"));
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const error& e) {
      return e.code();
    }
    return errc::invalid_argument;
  };
  EXPECT_EQ(code([&] { upper_clarke(query(f, {0.0}, {1.0, 1.0})); }), errc::domain);
  EXPECT_EQ(code([&] { upper_clarke(query(f, {20.0}, {1.0})); }), errc::domain);
  EXPECT_EQ(code([&] { directional(query(f, {0.0}, {NAN})); }), errc::invalid_argument);
}
