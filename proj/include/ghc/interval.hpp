#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

#include "ghc/error.hpp"

namespace ghc {

/**
 * Closed bounded real interval [lower, upper].
 *
 * Endpoints are finite doubles with lower <= upper; -0.0 is stored as +0.0 so
 * that equality and dominance verdicts do not depend on the sign of zero.
 * Arithmetic is round-to-nearest, not outward-rounded.
 */
class Interval {
 public:
  constexpr Interval() noexcept = default;

  Interval(double lower, double upper) : lo_(lower + 0.0), hi_(upper + 0.0) {
    if (!std::isfinite(lo_) || !std::isfinite(hi_)) {
      throw error(errc::invalid_interval, "interval endpoints must be finite");
    }
    if (lo_ > hi_) {
      throw error(errc::invalid_interval,
                  "interval lower endpoint exceeds upper endpoint");
    }
  }

  static Interval point(double v) { return Interval(v, v); }

  constexpr double lower() const noexcept { return lo_; }
  constexpr double upper() const noexcept { return hi_; }
  constexpr double width() const noexcept { return hi_ - lo_; }
  constexpr bool is_degenerate() const noexcept { return lo_ == hi_; }
  constexpr bool contains(double v) const noexcept {
    return lo_ <= v && v <= hi_;
  }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline const Interval kZero{};
inline const Interval kOne{1.0, 1.0};

namespace detail {

inline Interval checked(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw error(errc::arithmetic_overflow,
                "interval arithmetic produced a non-finite endpoint");
  }
  return Interval(lo, hi);
}

inline Interval hull4(double p, double q, double r, double s) {
  return checked(std::min({p, q, r, s}), std::max({p, q, r, s}));
}

}  // namespace detail

inline Interval add(const Interval& a, const Interval& b) {
  return detail::checked(a.lower() + b.lower(), a.upper() + b.upper());
}

// Moore subtraction; A - A is not [0,0] unless A is degenerate.
inline Interval sub(const Interval& a, const Interval& b) {
  return detail::checked(a.lower() - b.upper(), a.upper() - b.lower());
}

inline Interval mul(const Interval& a, const Interval& b) {
  return detail::hull4(a.lower() * b.lower(), a.lower() * b.upper(),
                       a.upper() * b.lower(), a.upper() * b.upper());
}

inline Interval scalar_mul(double lambda, const Interval& a) {
  if (!std::isfinite(lambda)) {
    throw error(errc::invalid_argument, "scalar multiplier must be finite");
  }
  if (lambda >= 0.0) {
    return detail::checked(lambda * a.lower(), lambda * a.upper());
  }
  return detail::checked(lambda * a.upper(), lambda * a.lower());
}

inline Interval div(const Interval& a, const Interval& b) {
  if (b.lower() <= 0.0 && 0.0 <= b.upper()) {
    throw error(errc::zero_in_divisor, "divisor interval contains zero");
  }
  return detail::hull4(a.lower() / b.lower(), a.lower() / b.upper(),
                       a.upper() / b.lower(), a.upper() / b.upper());
}

/// Generalized Hukuhara difference: the unique C with A = B + C or B = A - C.
inline Interval gh_diff(const Interval& a, const Interval& b) {
  const double dl = a.lower() - b.lower();
  const double du = a.upper() - b.upper();
  return detail::checked(std::min(dl, du), std::max(dl, du));
}

inline double norm(const Interval& a) noexcept {
  return std::max(std::fabs(a.lower()), std::fabs(a.upper()));
}

/// Relation of the first interval toward the second. "a dominates b" means
/// a.lower <= b.lower and a.upper <= b.upper, i.e. a is the smaller one.
enum class Dominance {
  Equal,
  StrictlyDominates,
  Dominates,
  StrictlyDominatedBy,
  DominatedBy,
  Incomparable,
};

inline const char* to_string(Dominance d) {
  switch (d) {
    case Dominance::Equal: return "equal";
    case Dominance::StrictlyDominates: return "strictly-dominates";
    case Dominance::Dominates: return "dominates";
    case Dominance::StrictlyDominatedBy: return "strictly-dominated-by";
    case Dominance::DominatedBy: return "dominated-by";
    case Dominance::Incomparable: return "incomparable";
  }
  return "unknown";
}

/// a ⪯ b.
constexpr bool dominates(const Interval& a, const Interval& b) noexcept {
  return a.lower() <= b.lower() && a.upper() <= b.upper();
}

/// a ≺ b.
constexpr bool strictly_dominates(const Interval& a, const Interval& b) noexcept {
  return dominates(a, b) && (a.lower() < b.lower() || a.upper() < b.upper());
}

// Strongest applicable relation wins: Equal, then strict, then non-strict.
// Because a ⪯ b with a != b always has a strict endpoint, the non-strict
// verdicts are never the strongest one for valid intervals.
inline Dominance dominance(const Interval& a, const Interval& b) noexcept {
  if (a == b) return Dominance::Equal;
  if (strictly_dominates(a, b)) return Dominance::StrictlyDominates;
  if (dominates(a, b)) return Dominance::Dominates;
  if (strictly_dominates(b, a)) return Dominance::StrictlyDominatedBy;
  if (dominates(b, a)) return Dominance::DominatedBy;
  return Dominance::Incomparable;
}

/// a ⪯ b after lifting both endpoints of b by eps.
constexpr bool dominates_with_slack(const Interval& a, const Interval& b,
                                    double eps) noexcept {
  return a.lower() <= b.lower() + eps && a.upper() <= b.upper() + eps;
}

/// a ≺ b by a margin of at least eps on both endpoints.
constexpr bool strictly_dominates_beyond(const Interval& a, const Interval& b,
                                         double eps) noexcept {
  return eps > 0.0 ? (a.lower() + eps <= b.lower() && a.upper() + eps <= b.upper())
                   : strictly_dominates(a, b);
}

inline Interval operator+(const Interval& a, const Interval& b) { return add(a, b); }
inline Interval operator-(const Interval& a, const Interval& b) { return sub(a, b); }
inline Interval operator*(const Interval& a, const Interval& b) { return mul(a, b); }
inline Interval operator*(double s, const Interval& a) { return scalar_mul(s, a); }
inline Interval operator/(const Interval& a, const Interval& b) { return div(a, b); }

/// Renders with 9 significant digits, e.g. "[-8, -7]".
inline std::string to_string(const Interval& a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%.9g, %.9g]", a.lower(), a.upper());
  return buf;
}

inline std::ostream& operator<<(std::ostream& os, const Interval& a) {
  return os << to_string(a);
}

namespace detail {

inline void skip_ws(std::string_view s, std::size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' ||
                          s[i] == '\r')) {
    ++i;
  }
}

inline double parse_real(std::string_view s, std::size_t& i) {
  skip_ws(s, i);
  std::size_t j = i;
  if (j < s.size() && s[j] == '+') ++j;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data() + j, s.data() + s.size(), v);
  if (ec != std::errc{} || !std::isfinite(v)) {
    throw error(errc::parse, "expected a finite real number at offset " +
                                 std::to_string(i) + " in '" + std::string(s) + "'");
  }
  i = static_cast<std::size_t>(ptr - s.data());
  return v;
}

}  // namespace detail

/// Parses the text form "[a,b]"; endpoints may use scientific notation.
inline Interval parse_interval(std::string_view text) {
  std::size_t i = 0;
  auto expect = [&](char c) {
    detail::skip_ws(text, i);
    if (i >= text.size() || text[i] != c) {
      throw error(errc::parse, std::string("expected '") + c + "' in interval '" +
                                   std::string(text) + "'");
    }
    ++i;
  };
  expect('[');
  const double lo = detail::parse_real(text, i);
  expect(',');
  const double hi = detail::parse_real(text, i);
  expect(']');
  detail::skip_ws(text, i);
  if (i != text.size()) {
    throw error(errc::parse, "trailing characters after interval '" +
                                 std::string(text) + "'");
  }
  return Interval(lo, hi);
}

}  // namespace ghc
