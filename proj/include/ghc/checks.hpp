#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghc/error.hpp"
#include "ghc/interval.hpp"
#include "ghc/ivf.hpp"
#include "ghc/limit.hpp"
#include "ghc/sampling.hpp"

namespace ghc {

/// Inputs that violate a property, enough to replay the violation.
struct Counterexample {
  std::string check;          // convex | homogeneity | subadditivity | continuity
  std::vector<Point> points;  // convex: x1, x2; homogeneity: x; subadditivity: x, y;
                              // continuity: xbar, x
  std::vector<double> scalars;  // convex: lambda1; homogeneity: lambda; continuity: tol
  Interval lhs;
  Interval rhs;
  double slack = 0.0;
};

struct CheckVerdict {
  std::string check;
  bool holds = true;
  std::optional<Counterexample> counterexample;
  std::size_t trials = 0;
  // check_sublinear only: whether F(x+y) ⪯ F(x) ⊕ F(y) also held everywhere.
  std::optional<bool> stronger_form_holds;
};

struct LipschitzReport {
  double k_estimate = 0.0;
  std::array<Point, 2> witness_pair;
  bool is_lipschitz_likely = true;
  std::size_t samples = 0;
  // Least-squares slope of log10(max ratio) against log10(distance) over the
  // four smallest decades.
  double slope = 0.0;
  std::vector<double> decade_distances;
  std::vector<double> decade_ratios;
};

inline constexpr double kExactSlack = 1e-9;

namespace detail {

inline bool sample_in(const IVF& f, const DomainBox& box, Rng& rng, Point& x,
                      int max_tries = 1000) {
  for (int t = 0; t < max_tries; ++t) {
    for (std::size_t i = 0; i < box.dims(); ++i) {
      x[i] = rng.uniform(box[i].lower(), box[i].upper());
    }
    if (f.contains(x) && f.try_eval(x)) return true;
  }
  return false;
}

inline double gh_distance(const Interval& a, const Interval& b) noexcept {
  return std::max(std::fabs(a.lower() - b.lower()), std::fabs(a.upper() - b.upper()));
}

inline Interval convex_rhs(const IVF& f, const Point& x1, const Point& x2, double l1) {
  return add(scalar_mul(l1, f.eval(x1)), scalar_mul(1.0 - l1, f.eval(x2)));
}

inline Point combine(const Point& x1, const Point& x2, double l1) {
  Point z(x1.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = l1 * x1[i] + (1.0 - l1) * x2[i];
  return z;
}

inline double relative_slack(double eps, const Interval& ref) noexcept {
  return eps * (1.0 + norm(ref));
}

}  // namespace detail

/**
 * Samples (x1, x2, λ1) and tests F(λ1 x1 + λ2 x2) ⪯ λ1⊙F(x1) ⊕ λ2⊙F(x2)
 * with λ2 = 1 - λ1. Every fourth trial draws λ1 at random, the others cycle
 * through 0.25, 0.5, 0.75. The first violating trial is reported.
 */
inline CheckVerdict check_convex(const IVF& f, std::size_t trials = 4000,
                                 std::uint64_t seed = 0x5EED) {
  static constexpr double kFixed[] = {0.25, 0.5, 0.75};
  CheckVerdict v;
  v.check = "convex";
  Rng rng(seed);
  const std::size_t n = f.dims();
  Point x1(n), x2(n);
  for (std::size_t t = 0; t < trials; ++t) {
    const double l1 = t % 4 < 3 ? kFixed[t % 4] : rng.uniform();
    if (!detail::sample_in(f, f.domain(), rng, x1) ||
        !detail::sample_in(f, f.domain(), rng, x2)) {
      break;
    }
    const Point z = detail::combine(x1, x2, l1);
    const auto lhs = f.try_eval(z);
    if (!lhs) continue;  // S need not be convex when a `where` clause is present
    ++v.trials;
    const Interval rhs = detail::convex_rhs(f, x1, x2, l1);
    const double slack = detail::relative_slack(kExactSlack, rhs);
    if (!dominates_with_slack(*lhs, rhs, slack)) {
      v.holds = false;
      v.counterexample = Counterexample{"convex", {x1, x2}, {l1}, *lhs, rhs, slack};
      break;
    }
  }
  return v;
}

/**
 * Estimates a gH-Lipschitz constant over `region` by pair sampling at nine
 * distance decades (1 down to 1e-8) plus unrestricted random pairs. Anchors
 * include the region's corners and centre. The function is flagged as not
 * Lipschitz when the per-decade maximum ratio keeps growing as the distance
 * shrinks: log-log slope below -0.1 over the four smallest decades.
 */
inline LipschitzReport check_lipschitz(const IVF& f, const DomainBox& region,
                                       std::size_t trials = 4000,
                                       std::uint64_t seed = 0x5EED) {
  const std::size_t n = f.dims();
  if (region.dims() != n) throw error(errc::invalid_argument, "region dimension mismatch");
  LipschitzReport rep;
  Rng rng(seed);

  std::vector<Point> anchors;
  if (n <= 10) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Point c(n);
      for (std::size_t i = 0; i < n; ++i) {
        c[i] = (mask >> i) & 1 ? region[i].upper() : region[i].lower();
      }
      anchors.push_back(std::move(c));
    }
  }
  anchors.push_back(region.center());

  auto consider = [&](const Point& x, const Point& y, double& best) {
    const auto fx = f.try_eval(x);
    const auto fy = f.try_eval(y);
    if (!fx || !fy) return;
    const double dist = euclidean_distance(x, y);
    if (!(dist > 0.0)) return;
    ++rep.samples;
    const double ratio = detail::gh_distance(*fx, *fy) / dist;
    best = std::max(best, ratio);
    if (ratio > rep.k_estimate || rep.witness_pair[0].empty()) {
      rep.k_estimate = std::max(rep.k_estimate, ratio);
      rep.witness_pair = {x, y};
    }
  };

  constexpr int kDecades = 9;
  const std::size_t per_decade = std::max<std::size_t>(trials / (kDecades + 1), anchors.size() + 8);
  Point x(n), y(n), u(n);
  for (int j = 0; j < kDecades; ++j) {
    const double d = std::pow(10.0, -j);
    double best = 0.0;
    for (std::size_t s = 0; s < per_decade; ++s) {
      if (s < anchors.size()) {
        x = anchors[s];
      } else {
        for (std::size_t i = 0; i < n; ++i) x[i] = rng.uniform(region[i].lower(), region[i].upper());
      }
      rng.direction(u);
      bool placed = false;
      for (double sign : {1.0, -1.0}) {
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + sign * d * u[i];
        if (region.contains(y)) {
          placed = true;
          break;
        }
      }
      if (!placed) {
        // Corners: point the step into the box.
        for (std::size_t i = 0; i < n; ++i) {
          const double step = d * std::fabs(u[i]);
          y[i] = x[i] + (x[i] - step >= region[i].lower() && x[i] + step > region[i].upper() ? -step : step);
        }
        if (!region.contains(y)) continue;
      }
      consider(x, y, best);
    }
    rep.decade_distances.push_back(d);
    rep.decade_ratios.push_back(best);
  }
  double unrestricted = 0.0;
  for (std::size_t s = 0; s < per_decade; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.uniform(region[i].lower(), region[i].upper());
      y[i] = rng.uniform(region[i].lower(), region[i].upper());
    }
    consider(x, y, unrestricted);
  }

  const double top = *std::max_element(rep.decade_ratios.begin(), rep.decade_ratios.end());
  if (top > 0.0) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int first = kDecades - 5;
    for (int j = first; j < kDecades; ++j) {
      const double lx = std::log10(rep.decade_distances[j]);
      const double ly = std::log10(std::max(rep.decade_ratios[j], 1e-12 * top));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double m = kDecades - first;
    rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  rep.is_lipschitz_likely = rep.slope >= -0.1;
  return rep;
}

inline LipschitzReport check_lipschitz(const IVF& f, std::size_t trials = 4000,
                                       std::uint64_t seed = 0x5EED) {
  return check_lipschitz(f, f.domain(), trials, seed);
}

/**
 * gH-continuity at xbar: the supremum of ‖F(x) ⊖gH F(xbar)‖ over shrinking
 * balls must drop to tol or below at some level of the schedule.
 */
inline CheckVerdict check_gh_continuous(const IVF& f, std::span<const double> xbar,
                                        double tol = 1e-3, const ShrinkSchedule& sched = {}) {
  CheckVerdict v;
  v.check = "continuous";
  const Interval anchor = f.eval(xbar);
  const IVF dist = gh_distance_function(f, anchor);
  const LimitEstimate est = limsup_at(dist, xbar, sched, tol);
  v.trials = est.accepted;
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& lv : est.level_trace) smallest = std::min(smallest, lv.upper());
  if (smallest <= tol) return v;
  v.holds = false;
  Counterexample ce;
  ce.check = "continuity";
  ce.points = {Point(xbar.begin(), xbar.end()), est.witness};
  ce.scalars = {tol};
  ce.lhs = f.eval(est.witness);
  ce.rhs = anchor;
  ce.slack = tol;
  v.counterexample = std::move(ce);
  return v;
}

/**
 * Sublinearity on an origin-symmetric box: positive homogeneity
 * F(λx) = λ⊙F(x) within tol (relative for values above 1), and the ⊁ form
 * of subadditivity, violated when F(x) ⊕ F(y) ≺ F(x+y) by at least tol on
 * both endpoints. Points leaving the box are resampled.
 */
inline CheckVerdict check_sublinear(const IVF& f, std::size_t trials = 4000,
                                    std::uint64_t seed = 0x5EED, double tol = 1e-6) {
  if (!f.domain().symmetric_about_origin()) {
    throw error(errc::invalid_argument,
                "sublinearity check needs a domain box symmetric about the origin");
  }
  static constexpr double kFixed[] = {0.0, 0.5, 1.0, 2.0};
  CheckVerdict v;
  v.check = "sublinear";
  v.stronger_form_holds = true;
  Rng rng(seed);
  const std::size_t n = f.dims();
  Point x(n), y(n), s(n), lx(n);
  for (std::size_t t = 0; t < trials; ++t) {
    if (!detail::sample_in(f, f.domain(), rng, x) || !detail::sample_in(f, f.domain(), rng, y)) {
      break;
    }
    // Homogeneity.
    double lambda = t % 5 < 4 ? kFixed[t % 5] : rng.uniform(0.0, 4.0);
    for (int tries = 0;; ++tries) {
      for (std::size_t i = 0; i < n; ++i) lx[i] = lambda * x[i];
      if (f.contains(lx) || tries > 60) break;
      lambda *= 0.5;
    }
    const auto flx = f.try_eval(lx);
    if (flx) {
      const Interval expect = scalar_mul(lambda, f.eval(x));
      const double slack = tol * std::max(1.0, norm(expect));
      if (norm(gh_diff(*flx, expect)) > slack) {
        v.holds = false;
        v.trials = t + 1;
        v.counterexample = Counterexample{"homogeneity", {x}, {lambda}, *flx, expect, slack};
        return v;
      }
    }
    // Subadditivity, shrinking y until x + y is admissible.
    std::optional<Interval> fs;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t i = 0; i < n; ++i) s[i] = x[i] + y[i];
      if (f.contains(s) && f.contains(y) && (fs = f.try_eval(s))) break;
      for (auto& c : y) c *= 0.5;
    }
    ++v.trials;
    if (!fs) continue;
    const auto fy = f.try_eval(y);
    if (!fy) continue;
    const Interval rhs = add(f.eval(x), *fy);
    if (strictly_dominates_beyond(rhs, *fs, tol)) {
      v.holds = false;
      v.counterexample = Counterexample{"subadditivity", {x, y}, {}, *fs, rhs, tol};
      return v;
    }
    if (!dominates_with_slack(*fs, rhs, tol)) v.stronger_form_holds = false;
  }
  return v;
}

/// Re-evaluates a recorded counterexample; true when the violation recurs.
inline bool replay(const IVF& f, const Counterexample& ce) {
  if (ce.check == "convex") {
    if (ce.points.size() != 2 || ce.scalars.size() != 1) {
      throw error(errc::invalid_argument, "convex counterexample needs two points and lambda1");
    }
    const double l1 = ce.scalars[0];
    const Interval lhs = f.eval(detail::combine(ce.points[0], ce.points[1], l1));
    const Interval rhs = detail::convex_rhs(f, ce.points[0], ce.points[1], l1);
    return !dominates_with_slack(lhs, rhs, ce.slack);
  }
  if (ce.check == "homogeneity") {
    if (ce.points.size() != 1 || ce.scalars.size() != 1) {
      throw error(errc::invalid_argument, "homogeneity counterexample needs x and lambda");
    }
    const double lambda = ce.scalars[0];
    Point lx = ce.points[0];
    for (auto& c : lx) c *= lambda;
    return norm(gh_diff(f.eval(lx), scalar_mul(lambda, f.eval(ce.points[0])))) > ce.slack;
  }
  if (ce.check == "subadditivity") {
    if (ce.points.size() != 2) {
      throw error(errc::invalid_argument, "subadditivity counterexample needs x and y");
    }
    Point s = ce.points[0];
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += ce.points[1][i];
    const Interval rhs = add(f.eval(ce.points[0]), f.eval(ce.points[1]));
    return strictly_dominates_beyond(rhs, f.eval(s), ce.slack);
  }
  if (ce.check == "continuity") {
    if (ce.points.size() != 2) {
      throw error(errc::invalid_argument, "continuity counterexample needs xbar and x");
    }
    return norm(gh_diff(f.eval(ce.points[1]), f.eval(ce.points[0]))) > ce.slack;
  }
  throw error(errc::invalid_argument, "unknown counterexample kind '" + ce.check + "'");
}

}  // namespace ghc
