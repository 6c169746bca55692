#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ghc/limit.hpp"
#include "ghc/parser.hpp"

using namespace ghc;

namespace {

// Dense sweep of sin(1/x) over 0 < |x| < delta; the oracle for the sampler.
std::pair<double, double> sin_inv_sweep(double delta) {
  double hi = -2, lo = 2;
  constexpr int kPoints = 1000000;
  for (int i = 1; i <= kPoints; ++i) {
    const double x = delta * i / kPoints;
    for (double s : {x, -x}) {
      const double v = std::sin(1.0 / s);
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
  }
  return {lo, hi};
}

const IVF& sin_inv() {
  static const IVF f = parse_ivf("ivf { dom: [-1, 1]; lower: sin(1/x1); upper: sin(1/x1) }");
  return f;
}

}  // namespace

TEST(SupInf, FiniteRegions) {
  const IVF lin = parse_ivf("ivf { dom: [-2, 2]; scale: x1; c: [1, 2] }");
  const std::vector<Point> grid{{0.0}, {0.5}, {1.0}};
  EXPECT_EQ(sup_over(lin, grid), Interval(1, 2));
  EXPECT_EQ(inf_over(lin, grid), kZero);
  const IVF c = parse_ivf("ivf { dom: [-2, 2]; lower: -1; upper: 3 }");
  EXPECT_EQ(sup_over(c, grid), Interval(-1, 3));
  EXPECT_EQ(inf_over(c, grid), Interval(-1, 3));
  const IVF sym = parse_ivf("ivf { dom: [0, 2]; lower: -x1; upper: x1 }");
  const std::vector<Point> two{{0.0}, {1.0}};
  EXPECT_EQ(sup_over(sym, two), Interval(0, 1));
  EXPECT_EQ(inf_over(sym, two), Interval(-1, 0));
}

TEST(Limit, OscillationMatchesDenseSweep) {
  const auto [lo, hi] = sin_inv_sweep(1e-3);
  const LimitEstimate up = limsup_at(sin_inv(), std::vector<double>{0.0});
  ASSERT_TRUE(up.converged);
  EXPECT_NEAR(up.value.lower(), hi, 1e-3);
  EXPECT_NEAR(up.value.upper(), hi, 1e-3);
  EXPECT_NEAR(hi, 1.0, 1e-6);
  const LimitEstimate down = liminf_at(sin_inv(), std::vector<double>{0.0});
  ASSERT_TRUE(down.converged);
  EXPECT_NEAR(down.value.lower(), lo, 1e-3);
  EXPECT_NEAR(down.value.upper(), lo, 1e-3);
  EXPECT_TRUE(up.monotone);
  EXPECT_TRUE(dominates(down.value, up.value));
}

TEST(Limit, ContinuousPointGivesValue) {
  const IVF f = parse_ivf("ivf { dom: [-3, 3]^2; scale: x1^2 + x2; c: [1, 2] }");
  const Point x{1.0, 0.5};
  const Interval v = f(x);
  for (auto mode : {Extremum::Sup, Extremum::Inf}) {
    const LimitEstimate e = limit_at(f, x, ShrinkSchedule{}, 1e-3, mode);
    ASSERT_TRUE(e.converged);
    EXPECT_NEAR(e.value.lower(), v.lower(), 1e-3);
    EXPECT_NEAR(e.value.upper(), v.upper(), 1e-3);
  }
}

TEST(Limit, BlowUpIsDivergent) {
  const IVF up = parse_ivf("ivf { dom: [-1, 1]; lower: 0; upper: 1/abs(x1) }");
  const LimitEstimate e = limsup_at(up, std::vector<double>{0.0});
  EXPECT_TRUE(e.divergent);
  EXPECT_FALSE(e.converged);
  EXPECT_EQ(e.verdict(), Verdict::Divergent);
  const IVF down = parse_ivf("ivf { dom: [-1, 1]; lower: -1/abs(x1); upper: 0 }");
  EXPECT_TRUE(liminf_at(down, std::vector<double>{0.0}).divergent);
}

TEST(Limit, EmptyLevelIsBoundaryStarvation) {
  const IVF f = parse_ivf("ivf { dom: [0, 10]; where: x1 == 5; lower: 0; upper: 1 }");
  try {
    limsup_at(f, std::vector<double>{5.0});
    ADD_FAILURE();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::boundary_starvation);
  }
}

TEST(Limit, BasePointAndScheduleValidation) {
  const IVF f = sin_inv();
  EXPECT_THROW(limsup_at(f, std::vector<double>{2.0}), error);
  EXPECT_THROW(limsup_at(f, std::vector<double>{0.0, 0.0}), error);
  ShrinkSchedule s;
  s.ratio = 1.0;
  EXPECT_THROW(limsup_at(f, std::vector<double>{0.0}, s), error);
  s = {};
  s.max_levels = 60;
  s.ratio = 0.25;
  EXPECT_THROW(limsup_at(f, std::vector<double>{0.0}, s), error);
}

TEST(Limit, DeterministicForSeed) {
  const LimitEstimate a = limsup_at(sin_inv(), std::vector<double>{0.0});
  const LimitEstimate b = limsup_at(sin_inv(), std::vector<double>{0.0});
  EXPECT_EQ(a.level_trace, b.level_trace);
  EXPECT_EQ(a.witness, b.witness);
  ShrinkSchedule s;
  s.seed = 99;
  const LimitEstimate c = limsup_at(sin_inv(), std::vector<double>{0.0}, s);
  EXPECT_NE(a.witness, c.witness);
}

TEST(Limit, ScheduleDefaults) {
  const ShrinkSchedule s;
  EXPECT_EQ(s.delta0, 0.5);
  EXPECT_EQ(s.ratio, 0.5);
  EXPECT_EQ(s.max_levels, 20);
  EXPECT_EQ(s.seed, 0x5EEDu);
  EXPECT_EQ(s.divergence_cap, 1e12);
  EXPECT_EQ(s.samples_for(1), 4096u);
  EXPECT_EQ(s.samples_for(2), 4096u);
  EXPECT_EQ(s.samples_for(3), 8192u);
  EXPECT_EQ(s.samples_for(16), 65536u);
}

TEST(Limit, SubadditiveOnOscillatingPair) {
  // limsup(F ⊕ G) is strictly below limsup F ⊕ limsup G when the peaks of
  // the two oscillations do not coincide.
  const IVF f = sin_inv();
  const IVF g = parse_ivf("ivf { dom: [-1, 1]; lower: -sin(1/x1); upper: -sin(1/x1) }");
  const Interval sum = limsup_at(f + g, std::vector<double>{0.0}).value;
  const Interval parts = add(limsup_at(f, std::vector<double>{0.0}).value,
                             limsup_at(g, std::vector<double>{0.0}).value);
  EXPECT_TRUE(dominates_with_slack(sum, parts, 3e-3));
  EXPECT_NEAR(sum.upper(), 0.0, 1e-9);
  EXPECT_NEAR(parts.upper(), 2.0, 1e-3);
}
