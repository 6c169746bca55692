#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ghc/error.hpp"
#include "ghc/expr.hpp"
#include "ghc/ivf.hpp"
#include "ghc/parser.hpp"
#include "ghc/sampling.hpp"

namespace ghc {

enum class Family { Lipschitz, ConvexLipschitz, Sublinear, Pathological };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::Lipschitz: return "lipschitz";
    case Family::ConvexLipschitz: return "convex_lipschitz";
    case Family::Sublinear: return "sublinear";
    case Family::Pathological: return "pathological";
  }
  return "unknown";
}

inline Family parse_family(std::string_view s) {
  if (s == "lipschitz") return Family::Lipschitz;
  if (s == "convex_lipschitz") return Family::ConvexLipschitz;
  if (s == "sublinear") return Family::Sublinear;
  if (s == "pathological") return Family::Pathological;
  throw error(errc::invalid_argument, "unknown generator family '" + std::string(s) + "'");
}

/// One family member. `lipschitz_bound` is an analytic gH-Lipschitz constant
/// on the domain box; zero when the member is not Lipschitz.
struct GeneratedIvf {
  IVF f;
  std::string source;
  double lipschitz_bound = 0.0;
  bool homogeneous = false;
};

/**
 * Deterministic stream of IVFs of one family. Coefficients are multiples of
 * 1/16 so the generated sources print exactly.
 *
 *   lipschitz        affine, sine, kinked and smooth-slope scales times random C
 *   convex_lipschitz max of affine pieces and a constant b0 >= 0, times C >= 0;
 *                    every third member drops all offsets (positively homogeneous)
 *   sublinear        norm-like scales on a symmetric box, times C with c_hi > 0
 *   pathological     element 0 is the quadrant example x1^2(1+1/x2) ⊙ [3,8],
 *                    then randomized copies of it and of sin^2(x)/x ⊙ C
 */
class IvfGenerator {
 public:
  IvfGenerator(Family family, std::uint64_t seed) : family_(family), rng_(seed) {}

  GeneratedIvf next() {
    GeneratedIvf g;
    switch (family_) {
      case Family::Lipschitz: g = lipschitz(); break;
      case Family::ConvexLipschitz: g = convex(); break;
      case Family::Sublinear: g = sublinear(); break;
      case Family::Pathological: g = pathological(); break;
    }
    g.f = parse_ivf(g.source);
    ++index_;
    return g;
  }

  std::size_t index() const noexcept { return index_; }

 private:
  double coef(double lo, double hi) {
    const double k = std::floor(rng_.uniform(lo * 16.0, hi * 16.0 + 1.0));
    return std::clamp(k, lo * 16.0, hi * 16.0) / 16.0;
  }

  static std::string num(double v) { return detail::format_real(v); }

  std::vector<double> vec(std::size_t n, double lo, double hi, bool nonzero = true) {
    std::vector<double> v(n);
    do {
      for (auto& c : v) c = coef(lo, hi);
    } while (nonzero && std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; }));
    return v;
  }

  static double l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
  }

  static std::string dot(const std::vector<double>& v) {
    std::string s = "dot([";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
    return s + "])";
  }

  static std::string box(std::size_t n, double r) {
    return "[" + num(-r) + ", " + num(r) + "]^" + std::to_string(n);
  }

  std::string interval(double lo_min, double lo_max, double width_max) {
    const double c1 = coef(lo_min, lo_max);
    const double c2 = c1 + coef(0.0, width_max);
    last_c_norm_ = std::max(std::fabs(c1), std::fabs(c2));
    return "[" + num(c1) + ", " + num(c2) + "]";
  }

  static std::string scale_ivf(const std::string& dom, const std::string& scale,
                               const std::string& c) {
    return "ivf { dom: " + dom + "; scale: " + scale + "; c: " + c + " }";
  }

  GeneratedIvf lipschitz() {
    const std::size_t n = 1 + rng_.index(2);
    GeneratedIvf g;
    std::string scale;
    double slope = 0.0;
    switch (rng_.index(5)) {
      case 0: {
        const auto a = vec(n, -2, 2);
        scale = dot(a) + " + " + num(coef(-1, 1));
        slope = l2(a);
        break;
      }
      case 1: {
        const auto w = vec(n, -2, 2), v = vec(n, -1, 1, false);
        const double a = coef(0.25, 2);
        scale = num(a) + "*sin(" + dot(w) + " + " + num(coef(-2, 2)) + ") + " + dot(v);
        slope = a * l2(w) + l2(v);
        break;
      }
      case 2: {
        const auto w = vec(n, -2, 2), v = vec(n, -1, 1, false);
        const double a = coef(0.25, 2);
        scale = num(a) + "*abs(" + dot(w) + " - " + num(coef(-1, 1)) + ") + " + dot(v);
        slope = a * l2(w) + l2(v);
        break;
      }
      case 3: {
        const auto w = vec(n, -2, 2);
        const double a = coef(0.25, 2);
        scale = num(a) + "*sqrt(1 + " + dot(w) + "^2)";
        slope = a * l2(w);
        break;
      }
      default: {
        const auto w1 = vec(n, -2, 2), w2 = vec(n, -2, 2);
        scale = "min(" + dot(w1) + " + " + num(coef(-1, 1)) + ", " + dot(w2) + " + " +
                num(coef(-1, 1)) + ")";
        slope = std::max(l2(w1), l2(w2));
        break;
      }
    }
    const std::string c = interval(-3, 3, 3);
    g.source = scale_ivf(box(n, 2), scale, c);
    g.lipschitz_bound = slope * last_c_norm_;
    return g;
  }

  GeneratedIvf convex() {
    const std::size_t n = 1 + rng_.index(2);
    const std::size_t pieces = 2 + rng_.index(2);
    const bool homogeneous = index_ % 3 == 2;
    GeneratedIvf g;
    g.homogeneous = homogeneous;
    std::string scale = "max(";
    double slope = 0.0;
    for (std::size_t p = 0; p < pieces; ++p) {
      const auto a = vec(n, -2, 2);
      slope = std::max(slope, l2(a));
      scale += dot(a);
      if (!homogeneous) scale += " + " + num(coef(-1, 1));
      scale += ", ";
    }
    scale += num(homogeneous ? 0.0 : coef(0, 1)) + ")";
    const std::string c = interval(0, 2, 3);
    g.source = scale_ivf(box(n, 2), scale, c);
    g.lipschitz_bound = slope * last_c_norm_;
    return g;
  }

  GeneratedIvf sublinear() {
    const std::size_t n = 1 + rng_.index(2);
    GeneratedIvf g;
    g.homogeneous = true;
    std::string scale;
    double slope = 0.0;
    switch (rng_.index(4)) {
      case 0: {
        const auto a = vec(n, -2, 2);
        scale = "abs(" + dot(a) + ")";
        slope = l2(a);
        break;
      }
      case 1: {
        // Q = L L^T + I/4 is symmetric positive definite.
        std::vector<double> l = vec(n * n, -1, 1, false);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) l[i * n + j] = 0.0;
        }
        std::vector<double> q(n * n, 0.0);
        double frob = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) q[i * n + j] += l[i * n + k] * l[j * n + k];
            if (i == j) q[i * n + j] += 0.25;
            frob += q[i * n + j] * q[i * n + j];
          }
        }
        scale = "sqrt(quad([";
        for (std::size_t i = 0; i < n; ++i) {
          scale += i ? ", [" : "[";
          for (std::size_t j = 0; j < n; ++j) scale += (j ? ", " : "") + num(q[i * n + j]);
          scale += "]";
        }
        scale += "]))";
        slope = std::sqrt(std::sqrt(frob));
        break;
      }
      case 2: {
        const auto a = vec(n, 0, 2);
        for (std::size_t i = 0; i < n; ++i) {
          scale += (i ? " + " : "") + num(a[i]) + "*abs(x" + std::to_string(i + 1) + ")";
        }
        slope = l2(a);
        break;
      }
      default: {
        const auto a = vec(n, -2, 2), b = vec(n, -2, 2);
        scale = "max(abs(" + dot(a) + "), abs(" + dot(b) + "))";
        slope = std::max(l2(a), l2(b));
        break;
      }
    }
    // c_hi > 0, so C is not strictly below zero.
    const double c1 = coef(-3, 2);
    const double c2 = std::max(c1, 0.0) + coef(0.0625, 3);
    last_c_norm_ = std::max(std::fabs(c1), std::fabs(c2));
    g.source = scale_ivf(box(n, 2), scale, "[" + num(c1) + ", " + num(c2) + "]");
    g.lipschitz_bound = slope * last_c_norm_;
    return g;
  }

  GeneratedIvf pathological() {
    GeneratedIvf g;
    std::string coeff, c = "[3, 8]";
    if (index_ > 0) {
      c = interval(0.5, 4, 4);
      if (index_ % 2 == 1) {
        const double jump = coef(1, 8);
        g.source = "ivf { dom: [-10, 10]; scale: sin(x1)^2/x1; c: " + c +
                   "; branch: x1 == 0 -> { scale: " + num(jump) + "; c: " + c + " } }";
        g.lipschitz_bound = 0.0;
        return g;
      }
      coeff = num(coef(0.25, 2)) + "*";
    }
    g.source = "ivf { dom: [-10, 10] x [0, 10]; where: x2 >= 0; scale: " + coeff +
               "x1^2*(1 + 1/x2); c: " + c +
               "; branch: x1 == 0 && x2 == 0 -> { scale: 0; c: " + c + " } }";
    return g;
  }

  Family family_;
  Rng rng_;
  std::size_t index_ = 0;
  double last_c_norm_ = 0.0;
};

inline std::vector<GeneratedIvf> generator_family(Family family, std::uint64_t seed,
                                                  std::size_t count) {
  IvfGenerator gen(family, seed);
  std::vector<GeneratedIvf> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.next());
  return out;
}

}  // namespace ghc
