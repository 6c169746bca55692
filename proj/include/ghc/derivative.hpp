#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ghc/error.hpp"
#include "ghc/interval.hpp"
#include "ghc/ivf.hpp"
#include "ghc/limit.hpp"
#include "ghc/sampling.hpp"

namespace ghc {

enum class DerivativeKind { Directional, UpperClarke, LowerClarke };

inline const char* to_string(DerivativeKind k) {
  switch (k) {
    case DerivativeKind::Directional: return "directional";
    case DerivativeKind::UpperClarke: return "upper-clarke";
    case DerivativeKind::LowerClarke: return "lower-clarke";
  }
  return "unknown";
}

struct DerivativeQuery {
  IVF f;
  Point xbar;
  Point h;
  ShrinkSchedule sched{};
  double tol = 1e-3;
};

struct DerivativeResult {
  Interval value;
  DerivativeKind kind = DerivativeKind::Directional;
  LimitEstimate estimate;
  bool exists = false;
  // Clarke estimates include the base point itself among the x samples.
  bool includes_base_point = false;
};

namespace detail {

// (1/λ) ⊙ (B ⊖gH A) for A = [alo, ahi], B = [blo, bhi]; raw doubles so the
// sampling loops can flag overflow instead of throwing.
inline void quotient(double alo, double ahi, double blo, double bhi, double lambda,
                     double& lo, double& hi) noexcept {
  const double inv = 1.0 / lambda;
  const double d1 = blo - alo;
  const double d2 = bhi - ahi;
  lo = inv * std::min(d1, d2);
  hi = inv * std::max(d1, d2);
}

inline void check_direction(const DerivativeQuery& q) {
  detail::check_base_point(q.f, q.xbar);
  if (q.h.size() != q.f.dims()) {
    throw error(errc::domain, "direction " + to_string(q.h) + " has dimension " +
                                  std::to_string(q.h.size()) + ", expected " +
                                  std::to_string(q.f.dims()));
  }
  for (double v : q.h) {
    if (!std::isfinite(v)) throw error(errc::invalid_argument, "direction must be finite");
  }
  if (!(q.tol > 0.0)) throw error(errc::invalid_argument, "tolerance must be positive");
  q.sched.validate(euclidean_norm(q.xbar));
}

inline double richardson(double q0, double q1, double q2, double r) noexcept {
  const double a = (q1 - r * q0) / (1.0 - r);
  const double b = (q2 - r * q1) / (1.0 - r);
  return (b - r * r * a) / (1.0 - r * r);
}

}  // namespace detail

/// (1/λ) ⊙ (F(x + λh) ⊖gH F(x)).
inline Interval diff_quotient(const IVF& f, std::span<const double> x,
                              std::span<const double> h, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw error(errc::invalid_argument, "step lambda must be positive and finite");
  }
  if (h.size() != x.size()) throw error(errc::domain, "direction dimension mismatch");
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + lambda * h[i];
  const Interval a = f.eval(x);
  const Interval b = f.eval(y);
  double lo, hi;
  detail::quotient(a.lower(), a.upper(), b.lower(), b.upper(), lambda, lo, hi);
  return detail::checked(lo, hi);
}

/**
 * gH-directional derivative: the one-sided limit of the difference quotient
 * at x = xbar along λ_k = delta0 * ratio^k. Convergence follows the shrink
 * rules of run_shrink; a converged estimate is sharpened by three-point
 * Richardson extrapolation on the last three levels.
 */
inline DerivativeResult directional(const DerivativeQuery& q) {
  detail::check_direction(q);
  const IVF& f = q.f;
  const std::size_t n = f.dims();
  const Interval base = f.eval(q.xbar);
  Point y(n);
  bool seen_inside = false;
  auto level_fn = [&](int k, double lambda) {
    LevelExtreme lv;
    for (std::size_t i = 0; i < n; ++i) y[i] = q.xbar[i] + lambda * q.h[i];
    double blo, bhi;
    const auto status = f.try_eval(y, blo, bhi);
    if (status == EvalStatus::OutsideDomain) {
      if (seen_inside || k + 1 == q.sched.max_levels) {
        throw error(errc::domain, "xbar + lambda*h leaves the domain at lambda = " +
                                      detail::format_real(lambda));
      }
      lv.rejected = 1;
      return lv;
    }
    if (status != EvalStatus::Ok) {
      throw error(errc::evaluation, "cannot evaluate F at " + to_string(y));
    }
    seen_inside = true;
    double lo, hi;
    detail::quotient(base.lower(), base.upper(), blo, bhi, lambda, lo, hi);
    detail::ExtremeAccumulator acc(Extremum::Sup);
    acc.add(lo, hi, y);
    return acc.out;
  };

  // Levels before x̄ + λh first enters the domain are skipped.
  ShrinkSchedule sched = q.sched;
  DerivativeResult res;
  res.kind = DerivativeKind::Directional;
  {
    int skip = 0;
    for (; skip < sched.max_levels; ++skip) {
      for (std::size_t i = 0; i < n; ++i) y[i] = q.xbar[i] + sched.radius(skip) * q.h[i];
      if (f.contains(y)) break;
    }
    if (skip == sched.max_levels) {
      throw error(errc::domain, "xbar + lambda*h is outside the domain for every step");
    }
    sched.delta0 = sched.radius(skip);
    sched.max_levels -= skip;
    sched.min_levels = std::max(0, sched.min_levels - skip);
    if (sched.max_levels < 3) {
      throw error(errc::domain, "too few admissible steps along the direction");
    }
  }
  res.estimate = detail::run_shrink(sched, q.tol, Extremum::Sup, level_fn);
  res.exists = res.estimate.converged;
  res.value = res.estimate.value;
  const auto& tr = res.estimate.level_trace;
  if (res.exists && tr.size() >= 3) {
    const std::size_t m = tr.size();
    const double lo = detail::richardson(tr[m - 3].lower(), tr[m - 2].lower(),
                                         tr[m - 1].lower(), sched.ratio);
    const double hi = detail::richardson(tr[m - 3].upper(), tr[m - 2].upper(),
                                         tr[m - 1].upper(), sched.ratio);
    if (std::isfinite(lo) && std::isfinite(hi)) {
      const Interval extrapolated(std::min(lo, hi), std::max(lo, hi));
      if (norm(gh_diff(extrapolated, tr.back())) <= 4.0 * q.tol) res.value = extrapolated;
    }
  }
  return res;
}

namespace detail {

inline DerivativeResult clarke(const DerivativeQuery& q, Extremum mode) {
  check_direction(q);
  const IVF& f = q.f;
  const std::size_t n = f.dims();
  const BallSampler sampler(n, q.sched.seed);
  const std::size_t count = q.sched.samples_for(n);
  const std::size_t m = q.sched.lambda_samples;
  const double exclusion = 1e-15 * (1.0 + euclidean_norm(q.xbar));
  const bool base_inside = f.contains(q.xbar);
  std::vector<double> pts;
  std::vector<double> lambdas(m);
  Point y(n);
  auto level_fn = [&](int k, double delta) {
    pts.clear();
    sampler.generate(q.xbar, delta, count, static_cast<std::uint64_t>(k), pts);
    if (base_inside) pts.insert(pts.end(), q.xbar.begin(), q.xbar.end());
    // Log-uniform grid over [1e-6 δ, δ).
    for (std::size_t j = 0; j < m; ++j) {
      lambdas[j] = delta * std::pow(1e-6, (static_cast<double>(j) + 0.5) / static_cast<double>(m));
    }
    ExtremeAccumulator acc(mode);
    const std::size_t total = pts.size() / n;
    for (std::size_t s = 0; s < total; ++s) {
      std::span<const double> x(pts.data() + s * n, n);
      const bool is_base = base_inside && s + 1 == total;
      if (!is_base && is_center(x, q.xbar, exclusion)) continue;
      double alo, ahi;
      if (f.try_eval(x, alo, ahi) != EvalStatus::Ok) {
        acc.out.rejected += m;
        continue;
      }
      for (double lambda : lambdas) {
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + lambda * q.h[i];
        double blo, bhi;
        if (f.try_eval(y, blo, bhi) != EvalStatus::Ok) {
          ++acc.out.rejected;
          continue;
        }
        double lo, hi;
        quotient(alo, ahi, blo, bhi, lambda, lo, hi);
        acc.add(lo, hi, x);
      }
    }
    return acc.out;
  };
  DerivativeResult res;
  res.kind = mode == Extremum::Sup ? DerivativeKind::UpperClarke : DerivativeKind::LowerClarke;
  res.includes_base_point = base_inside;
  res.estimate = run_shrink(q.sched, q.tol, mode, level_fn);
  res.exists = res.estimate.converged;
  res.value = res.estimate.value;
  return res;
}

}  // namespace detail

/// Upper gH-Clarke derivative: joint limsup over x → x̄ and λ → 0+ with one
/// shared shrink parameter δ (x in the ball of radius δ, λ in (0, δ)).
inline DerivativeResult upper_clarke(const DerivativeQuery& q) {
  return detail::clarke(q, Extremum::Sup);
}

/// Lower gH-Clarke derivative: the liminf counterpart of upper_clarke.
inline DerivativeResult lower_clarke(const DerivativeQuery& q) {
  return detail::clarke(q, Extremum::Inf);
}

/// F_C(x̄)(h) ⊖gH F_D(x̄)(h); zero for convex gH-Lipschitz functions.
inline Interval clarke_directional_gap(const DerivativeQuery& q) {
  const DerivativeResult c = upper_clarke(q);
  if (!c.exists) {
    throw error(errc::nonexistence, std::string("upper gH-Clarke derivative does not exist (") +
                                        to_string(c.estimate.verdict()) + ")");
  }
  const DerivativeResult d = directional(q);
  if (!d.exists) {
    throw error(errc::nonexistence, std::string("gH-directional derivative does not exist (") +
                                        to_string(d.estimate.verdict()) + ")");
  }
  return gh_diff(c.value, d.value);
}

}  // namespace ghc
