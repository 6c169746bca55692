#pragma once

#include <algorithm>
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
#include "ghc/sampling.hpp"

namespace ghc {

/**
 * Geometric shrink schedule for limit estimation: level k works in the ball
 * of radius delta0 * ratio^k around the base point.
 *
 * `min_levels` is the first level at which convergence may be declared; it
 * keeps coarse levels that straddle a kink from agreeing by accident.
 */
struct ShrinkSchedule {
  double delta0 = 0.5;
  double ratio = 0.5;
  int max_levels = 20;
  int min_levels = 8;
  std::size_t samples_per_level = 0;  // 0 selects the dimension-based default
  std::size_t lambda_samples = 8;
  std::uint64_t seed = 0x5EED;
  double divergence_cap = 1e12;

  double radius(int level) const { return delta0 * std::pow(ratio, level); }

  /// 4096 points for n <= 2, doubling per extra dimension, capped at 65536.
  std::size_t samples_for(std::size_t dims) const {
    if (samples_per_level != 0) return samples_per_level;
    std::size_t s = 4096;
    for (std::size_t d = 2; d < dims && s < 65536; ++d) s *= 2;
    return std::min<std::size_t>(s, 65536);
  }

  /// Throws errc::invalid_argument when the schedule is unusable around a
  /// base point of Euclidean norm `center_norm`.
  void validate(double center_norm = 0.0) const {
    auto bad = [](const std::string& m) { throw error(errc::invalid_argument, m); };
    if (!(delta0 > 0.0) || !std::isfinite(delta0)) bad("delta0 must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) bad("ratio must lie in (0, 1)");
    if (max_levels < 3) bad("max_levels must be at least 3");
    if (min_levels < 0) bad("min_levels must be nonnegative");
    if (lambda_samples == 0) bad("lambda_samples must be positive");
    if (!(divergence_cap > 0.0)) bad("divergence cap must be positive");
    const double smallest = delta0 * std::pow(ratio, max_levels);
    if (!(smallest > 10.0 * std::numeric_limits<double>::epsilon() * (1.0 + center_norm))) {
      bad("schedule shrinks below floating-point resolution at the base point");
    }
  }
};

enum class Extremum { Sup, Inf };

enum class Verdict { Converged, Divergent, Stalled };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "converged";
    case Verdict::Divergent: return "divergent";
    case Verdict::Stalled: return "stalled";
  }
  return "unknown";
}

/// Interval estimate of a limit plus the per-level record that produced it.
struct LimitEstimate {
  Interval value;
  std::vector<Interval> level_trace;
  std::vector<double> radii;
  bool converged = false;
  bool divergent = false;
  double residual = std::numeric_limits<double>::infinity();
  // Level trace respects nested-ball monotonicity within 10 * tol.
  bool monotone = true;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  // Sample attaining the final extreme of the upper endpoint.
  Point witness;

  Verdict verdict() const {
    if (converged) return Verdict::Converged;
    return divergent ? Verdict::Divergent : Verdict::Stalled;
  }
};

/// Extremes of one shrink level. Empty when every sample was rejected.
struct LevelExtreme {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;
  bool overflow = false;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  Point witness;
};

namespace detail {

struct ExtremeAccumulator {
  Extremum mode;
  LevelExtreme out;

  explicit ExtremeAccumulator(Extremum m) : mode(m) {}

  bool better(double candidate, double current) const noexcept {
    return mode == Extremum::Sup ? candidate > current : candidate < current;
  }

  void add(double lo, double hi, std::span<const double> where) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      out.overflow = true;
      return;
    }
    ++out.accepted;
    if (out.empty) {
      out.lo = lo;
      out.hi = hi;
      out.empty = false;
      out.witness.assign(where.begin(), where.end());
      return;
    }
    if (better(lo, out.lo)) out.lo = lo;
    if (better(hi, out.hi)) {
      out.hi = hi;
      out.witness.assign(where.begin(), where.end());
    }
  }
};

inline constexpr int kGrowthWindow = 4;
inline constexpr double kGrowthFactor = 1.5;

/**
 * Drives a shrink schedule. `level_fn(level, radius)` returns the extremes
 * of the sampled quantity at that level. Convergence needs two consecutive
 * gH residuals <= tol at or beyond sched.min_levels. Divergence is declared
 * when an endpoint exceeds the cap, or when the norm of the level value
 * grows by kGrowthFactor for kGrowthWindow consecutive unconverged levels
 * past sched.min_levels.
 */
template <class LevelFn>
LimitEstimate run_shrink(const ShrinkSchedule& sched, double tol, Extremum mode,
                         LevelFn&& level_fn) {
  LimitEstimate est;
  std::vector<double> residuals;
  int growth_run = 0;
  for (int k = 0; k < sched.max_levels; ++k) {
    const double radius = sched.radius(k);
    LevelExtreme lv = level_fn(k, radius);
    est.accepted += lv.accepted;
    est.rejected += lv.rejected;
    if (lv.overflow || (!lv.empty && (std::fabs(lv.lo) > sched.divergence_cap ||
                                      std::fabs(lv.hi) > sched.divergence_cap))) {
      est.divergent = true;
      if (!lv.empty) {
        est.level_trace.push_back(Interval(std::clamp(lv.lo, -sched.divergence_cap, sched.divergence_cap),
                                           std::clamp(std::max(lv.lo, lv.hi), -sched.divergence_cap,
                                                      sched.divergence_cap)));
        est.radii.push_back(radius);
        est.witness = lv.witness;
        est.value = est.level_trace.back();
      }
      return est;
    }
    if (lv.empty) {
      throw error(errc::boundary_starvation,
                  "no admissible samples at shrink level " + std::to_string(k) +
                      " (radius " + format_real(radius) + ")");
    }
    const Interval v(lv.lo, lv.hi);
    if (!est.level_trace.empty()) {
      const Interval& prev = est.level_trace.back();
      const double slack = 10.0 * tol;
      if (mode == Extremum::Sup) {
        if (v.lower() > prev.lower() + slack || v.upper() > prev.upper() + slack) {
          est.monotone = false;
        }
      } else if (v.lower() < prev.lower() - slack || v.upper() < prev.upper() - slack) {
        est.monotone = false;
      }
      const double r = norm(gh_diff(v, prev));
      residuals.push_back(r);
      est.residual = r;
      const double grown = norm(v);
      // Coarse levels can grow like 1/radius before reaching a kink.
      const bool counts = k >= sched.min_levels;
      growth_run = (counts && r > tol && grown >= kGrowthFactor * norm(prev)) ? growth_run + 1 : 0;
    }
    est.level_trace.push_back(v);
    est.radii.push_back(radius);
    est.witness = std::move(lv.witness);
    est.value = v;
    const std::size_t m = residuals.size();
    if (k + 1 >= sched.min_levels && m >= 2 && residuals[m - 1] <= tol &&
        residuals[m - 2] <= tol) {
      est.converged = true;
      return est;
    }
    if (growth_run >= kGrowthWindow) {
      est.divergent = true;
      return est;
    }
  }
  return est;
}

inline void check_base_point(const IVF& f, std::span<const double> xbar) {
  if (xbar.size() != f.dims()) {
    throw error(errc::domain, "base point " + to_string(xbar) + " has dimension " +
                                  std::to_string(xbar.size()) + ", expected " +
                                  std::to_string(f.dims()));
  }
  if (!f.domain().contains(xbar)) {
    throw error(errc::domain, "base point " + to_string(xbar) + " is outside the domain box");
  }
}

inline bool is_center(std::span<const double> x, std::span<const double> c,
                      double exclusion) noexcept {
  return euclidean_distance(x, c) <= exclusion;
}

}  // namespace detail

/// Componentwise supremum [max f_lower, max f_upper] over a finite region.
inline Interval sup_over(const IVF& f, std::span<const Point> region) {
  if (region.empty()) throw error(errc::invalid_argument, "empty region");
  double lo = -std::numeric_limits<double>::infinity();
  double hi = lo;
  for (const auto& x : region) {
    const Interval v = f.eval(x);
    lo = std::max(lo, v.lower());
    hi = std::max(hi, v.upper());
  }
  return Interval(lo, hi);
}

/// Componentwise infimum [min f_lower, min f_upper] over a finite region.
inline Interval inf_over(const IVF& f, std::span<const Point> region) {
  if (region.empty()) throw error(errc::invalid_argument, "empty region");
  double lo = std::numeric_limits<double>::infinity();
  double hi = lo;
  for (const auto& x : region) {
    const Interval v = f.eval(x);
    lo = std::min(lo, v.lower());
    hi = std::min(hi, v.upper());
  }
  return Interval(lo, hi);
}

/// Punctured-ball limit superior or inferior of F at xbar.
inline LimitEstimate limit_at(const IVF& f, std::span<const double> xbar,
                              const ShrinkSchedule& sched, double tol, Extremum mode) {
  detail::check_base_point(f, xbar);
  sched.validate(euclidean_norm(xbar));
  const std::size_t n = f.dims();
  const BallSampler sampler(n, sched.seed);
  const std::size_t count = sched.samples_for(n);
  const double exclusion = 1e-15 * (1.0 + euclidean_norm(xbar));
  std::vector<double> pts;
  auto level_fn = [&](int k, double radius) {
    pts.clear();
    sampler.generate(xbar, radius, count, static_cast<std::uint64_t>(k), pts);
    detail::ExtremeAccumulator acc(mode);
    for (std::size_t i = 0; i < pts.size(); i += n) {
      std::span<const double> x(pts.data() + i, n);
      if (detail::is_center(x, xbar, exclusion)) continue;
      double lo, hi;
      switch (f.try_eval(x, lo, hi)) {
        case EvalStatus::Ok:
          acc.add(lo, hi, x);
          break;
        case EvalStatus::Inverted:
          throw error(errc::validation, "lower endpoint exceeds upper at " + to_string(x));
        default:
          ++acc.out.rejected;
          break;
      }
    }
    return acc.out;
  };
  return detail::run_shrink(sched, tol, mode, level_fn);
}

inline LimitEstimate limsup_at(const IVF& f, std::span<const double> xbar,
                               const ShrinkSchedule& sched = {}, double tol = 1e-3) {
  return limit_at(f, xbar, sched, tol, Extremum::Sup);
}

inline LimitEstimate liminf_at(const IVF& f, std::span<const double> xbar,
                               const ShrinkSchedule& sched = {}, double tol = 1e-3) {
  return limit_at(f, xbar, sched, tol, Extremum::Inf);
}

}  // namespace ghc
